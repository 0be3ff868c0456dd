"""Degree distributions and their generating polynomials.

An edge-perspective distribution stores the fraction of edges attached to
degree-i nodes and evaluates as ``sum_i c_i x**(i-1)``.  Its node-perspective
counterpart stores the fraction of *nodes* of degree i and evaluates as
``sum_i c_i x**i`` (the normalized integral of the edge polynomial).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import ConfigurationError, DomainError

DEFAULT_MAX_DEGREE = 100
_RENORM_SLACK = 1e-9

EDGE = "edge"
NODE = "node"


@dataclass(frozen=True)
class DegreeDistribution:
    """Probability weights indexed by degree; ``coeffs[i - 1]`` is degree i.

    Inputs whose weights sum to within 1e-9 of one are renormalized; anything
    further off is rejected.
    """

    coeffs: tuple[float, ...]
    perspective: str = EDGE
    max_degree: int = DEFAULT_MAX_DEGREE

    def __post_init__(self) -> None:
        if self.perspective not in (EDGE, NODE):
            raise ConfigurationError(f"unknown perspective {self.perspective!r}")
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ConfigurationError("degree distribution needs at least one weight")
        if not np.all(np.isfinite(c)) or np.any(c < 0):
            raise ConfigurationError("degree weights must be finite and nonnegative")
        nz = np.flatnonzero(c)
        if nz.size == 0:
            raise ConfigurationError("degree distribution has no nonzero weight")
        c = c[: nz[-1] + 1]
        if c.size > self.max_degree:
            raise ConfigurationError(
                f"degree {c.size} exceeds max_degree={self.max_degree}"
            )
        total = float(c.sum())
        if abs(total - 1.0) > _RENORM_SLACK:
            raise ConfigurationError(f"degree weights sum to {total!r}, not 1")
        c = c / total
        object.__setattr__(self, "coeffs", tuple(float(v) for v in c))

    # -- construction -----------------------------------------------------
    @classmethod
    def from_mapping(
        cls,
        weights: Mapping[int | str, float],
        perspective: str = EDGE,
        max_degree: int = DEFAULT_MAX_DEGREE,
    ) -> "DegreeDistribution":
        """Build from ``{degree: weight}``; keys may be strings (config files)."""
        parsed: dict[int, float] = {}
        for k, w in weights.items():
            try:
                d = int(k)
            except (TypeError, ValueError):
                raise ConfigurationError(f"degree key {k!r} is not an integer") from None
            if d < 1:
                raise ConfigurationError(f"degree {d} < 1")
            if d > max_degree:
                raise ConfigurationError(f"degree {d} exceeds max_degree={max_degree}")
            parsed[d] = parsed.get(d, 0.0) + float(w)
        if not parsed:
            raise ConfigurationError("empty degree mapping")
        coeffs = [0.0] * max(parsed)
        for d, w in parsed.items():
            coeffs[d - 1] = w
        return cls(tuple(coeffs), perspective, max_degree)

    @classmethod
    def regular(cls, degree: int, perspective: str = EDGE) -> "DegreeDistribution":
        return cls.from_mapping({degree: 1.0}, perspective)

    # -- views --------------------------------------------------------------
    @property
    def degrees(self) -> np.ndarray:
        return np.arange(1, len(self.coeffs) + 1)

    @property
    def terms(self) -> tuple[tuple[int, float], ...]:
        """Nonzero ``(exponent, coefficient)`` pairs of the polynomial."""
        shift = 1 if self.perspective == EDGE else 0
        return tuple(
            (d - shift, c) for d, c in enumerate(self.coeffs, start=1) if c != 0.0
        )

    def as_mapping(self) -> dict[int, float]:
        return {d: c for d, c in enumerate(self.coeffs, start=1) if c != 0.0}

    @property
    def is_regular(self) -> bool:
        return len(self.terms) == 1

    def __call__(self, x: float) -> float:
        return eval_poly(self, x)


def _check_unit(x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x!r} outside [0, 1]")
    return x


def eval_poly(d: DegreeDistribution, x: float) -> float:
    """Evaluate the generating polynomial at ``x`` in [0, 1]."""
    x = _check_unit(x)
    return sum(c * x**e for e, c in d.terms)


def derivative_at(d: DegreeDistribution, x: float) -> float:
    x = _check_unit(x)
    return sum(c * e * x ** (e - 1) for e, c in d.terms if e > 0)


def node_perspective(d: DegreeDistribution) -> DegreeDistribution:
    """Normalized integral of an edge polynomial; node inputs pass through."""
    if d.perspective == NODE:
        return d
    c = np.asarray(d.coeffs) / d.degrees
    return DegreeDistribution(tuple(c / c.sum()), NODE, d.max_degree)


def edge_perspective(d: DegreeDistribution) -> DegreeDistribution:
    if d.perspective == EDGE:
        return d
    c = np.asarray(d.coeffs) * d.degrees
    return DegreeDistribution(tuple(c / c.sum()), EDGE, d.max_degree)


def integral(d: DegreeDistribution) -> float:
    """``int_0^1`` of an edge polynomial, i.e. ``sum_i c_i / i``."""
    if d.perspective != EDGE:
        raise DomainError("integral is defined for edge-perspective distributions")
    return float(np.sum(np.asarray(d.coeffs) / d.degrees))


def average_degree(d: DegreeDistribution) -> float:
    """Average node degree: ``1 / sum_i c_i/i`` (edge) or ``sum_i i c_i`` (node)."""
    if d.perspective == NODE:
        return float(np.dot(d.degrees, d.coeffs))
    return 1.0 / integral(d)


def design_rate(lam: DegreeDistribution, rho: DegreeDistribution) -> float:
    """``1 - (int rho)/(int lambda)`` for an LDPC ensemble."""
    r = 1.0 - integral(rho) / integral(lam)
    if r < -1e-12:
        raise ConfigurationError(f"negative design rate {r!r}")
    return max(r, 0.0)


def parse_distribution(
    spec: Mapping[int | str, float] | Iterable[float] | DegreeDistribution,
    perspective: str = EDGE,
) -> DegreeDistribution:
    """Accept a mapping, a dense coefficient list or an existing distribution."""
    if isinstance(spec, DegreeDistribution):
        return spec
    if isinstance(spec, Mapping):
        return DegreeDistribution.from_mapping(spec, perspective)
    return DegreeDistribution(tuple(float(v) for v in spec), perspective)
