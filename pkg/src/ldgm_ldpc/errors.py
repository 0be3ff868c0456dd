"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid parameters, distributions or config documents."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class DecoderIntegrityError(RuntimeError):
    """Known bits contradict a parity check; the input was not a BEC output."""


class BoundUndefinedError(ArithmeticError):
    """A bound expression has a nonpositive denominator or log argument."""


class DegenerateLinearizationError(ArithmeticError):
    """The fixed-point linearization divides by (numerically) zero."""


class NonMonotoneError(RuntimeError):
    """DE convergence is not monotone in the erasure probability."""


class ScheduleInfeasibleError(ValueError):
    """kappa * epsilon > 1, so no puncturing probability exists."""
