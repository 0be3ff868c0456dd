"""Rate and complexity bounds for punctured LDGM-LDPC ensembles.

Entropies are in bits.  The constant in front of the g-functional sum is
``1 / (2 ln 2)`` by default (``log_reading="nat"``); ``log_reading="bits"``
switches to ``1/2`` for sensitivity checks.

Notation: ``p1``/``p2`` are the X1/X2 length fractions, ``p`` the X2
puncturing probability, ``R_H`` the lower-LDPC design rate, ``a_L``/``a_R``
the average X2-degrees of LDGM checks and LDPC checks, and ``g11``/``g21`` the
order-one g-functionals of the unpunctured and punctured bit classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

from .channel import capacity, g_functional, llr_density, puncture_density
from .degree_dist import average_degree
from .errors import BoundUndefinedError, ConfigurationError, ScheduleInfeasibleError

LOG_READINGS = ("nat", "bits")


def entropy_constant(log_reading: str = "nat") -> float:
    if log_reading == "nat":
        return 1.0 / (2.0 * math.log(2.0))
    if log_reading == "bits":
        return 0.5
    raise ConfigurationError(f"unknown log reading {log_reading!r}")


@dataclass(frozen=True)
class BoundInputs:
    p1: float
    p2: float
    C: float
    p: float
    R_H: float
    a_L: float
    a_R: float
    g11: float
    g21: float
    epsilon: float | None = None
    kappa: float | None = None
    log_reading: str = "nat"

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "C", "p", "g11", "g21"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigurationError(f"{name}={v} outside [0, 1]")
        if abs(self.p1 + self.p2 - 1.0) > 1e-12:
            raise ConfigurationError("p1 + p2 must equal 1")
        if not 0.0 <= self.R_H < 1.0:
            raise ConfigurationError(f"R_H={self.R_H} outside [0, 1)")
        if self.a_L < 1.0 or self.a_R < 1.0:
            raise ConfigurationError("average degrees must be at least 1")
        if self.epsilon is not None and not 0.0 < self.epsilon <= 1.0:
            raise ConfigurationError(f"epsilon={self.epsilon} outside (0, 1]")
        entropy_constant(self.log_reading)


def effective_capacity(C: float, p2: float, p: float) -> float:
    """Capacity left after puncturing a ``p2`` fraction with probability ``p``."""
    return (1.0 - p2 * p) * C


def puncture_schedule(epsilon: float, kappa: float) -> float:
    """Puncturing probability ``1 - kappa * epsilon``."""
    if kappa * epsilon > 1.0:
        raise ScheduleInfeasibleError(f"kappa*epsilon={kappa * epsilon} > 1")
    if kappa < 0 or epsilon < 0:
        raise ScheduleInfeasibleError("kappa and epsilon must be nonnegative")
    return 1.0 - kappa * epsilon


def kappa_from_eta(eta: float, g1: float) -> float:
    """Schedule constant from ``(1 - p) g1 = eta * epsilon``."""
    return eta / g1


def punctured_g(g1: float, p: float) -> float:
    return (1.0 - p) * g1


def _weights(b: BoundInputs) -> tuple[float, float]:
    """LDGM and LDPC check masses ``p1 g11`` and ``(1 - R_H) p2``."""
    return b.g11 * b.p1, (1.0 - b.R_H) * b.p2


def prefactor(b: BoundInputs) -> float:
    """``(g11 p1 + (1-R_H) p2) / (p1 + (1-R_H) p2)``."""
    w1, w2 = _weights(b)
    return (w1 + w2) / (b.p1 + w2)


def weighted_degree(b: BoundInputs) -> float:
    """Exponent of ``g21``: the g11-weighted average of ``a_L`` and ``a_R``."""
    w1, w2 = _weights(b)
    if w1 + w2 == 0.0:
        raise BoundUndefinedError("both check classes carry zero weight")
    return (w1 * b.a_L + w2 * b.a_R) / (w1 + w2)


def rate_upper_bound_at(b: BoundInputs, exponent: float) -> float:
    """Design-rate bound with the degree exponent supplied explicitly."""
    K = entropy_constant(b.log_reading)
    cbar = effective_capacity(b.C, b.p2, b.p)
    denom = 1.0 - K * prefactor(b) * b.g21**exponent
    if denom <= 0.0:
        raise BoundUndefinedError(f"rate bound denominator {denom!r} <= 0")
    return 1.0 - (1.0 - cbar) / denom


def rate_upper_bound(b: BoundInputs) -> float:
    """Upper bound on the mother-code design rate."""
    return rate_upper_bound_at(b, weighted_degree(b))


def complexity_lower_bound(b: BoundInputs, epsilon: float | None = None) -> float:
    """Lower bound on the weighted degree average at design rate ``(1-eps) * Cbar``.

    Returned raw: it can be negative (vacuous) in easy regimes.
    """
    eps = b.epsilon if epsilon is None else epsilon
    if eps is None or not 0.0 < eps <= 1.0:
        raise ConfigurationError("epsilon in (0, 1] required")
    if not 0.0 < b.g21 < 1.0:
        raise BoundUndefinedError(f"g21={b.g21} makes log(1/g21) degenerate")
    cbar = effective_capacity(b.C, b.p2, b.p)
    if cbar <= 0.0:
        raise BoundUndefinedError("effective capacity is zero")
    K = entropy_constant(b.log_reading)
    arg = K * prefactor(b) * (1.0 - (1.0 - eps) * cbar) / (eps * cbar)
    if arg <= 0.0:
        raise BoundUndefinedError(f"log argument {arg!r} <= 0")
    return math.log(arg) / math.log(1.0 / b.g21)


def with_schedule(b: BoundInputs, epsilon: float, kappa: float, g1: float | None = None) -> BoundInputs:
    """Inputs with ``p = 1 - kappa*eps`` and ``g21 = (1 - p) g1`` applied."""
    p = puncture_schedule(epsilon, kappa)
    g1 = b.g11 if g1 is None else g1
    return replace(b, p=p, g21=punctured_g(g1, p), epsilon=epsilon, kappa=kappa)


def entropy_series_bound(
    b: BoundInputs,
    g1: Callable[[int], float],
    g2: Callable[[int], float],
    p_max: int,
) -> float:
    """Lower bound on ``H(X|Y)/n`` with the series truncated after ``p_max`` orders.

    The per-check products are replaced by their Jensen bound
    ``p1 g1(k) g2(k)^a_L + (1-R_H) p2 g2(k)^a_R``, and ``1 - R_d`` is the
    check fraction ``p1 + (1-R_H) p2`` of the mother code.
    """
    if p_max < 1:
        raise ValueError("p_max must be at least 1")
    K = entropy_constant(b.log_reading)
    cbar = effective_capacity(b.C, b.p2, b.p)
    check_frac = b.p1 + (1.0 - b.R_H) * b.p2
    series = 0.0
    for k in range(1, p_max + 1):
        term = b.p1 * g1(k) * g2(k) ** b.a_L + (1.0 - b.R_H) * b.p2 * g2(k) ** b.a_R
        series += term / (k * (2 * k - 1))
    return 1.0 - cbar - check_frac + K * series


def series_tail(p_max: int) -> float:
    """Upper bound ``1/p_max`` on the omitted weights ``sum_{k>p_max} 1/(k(2k-1))``."""
    return 1.0 / p_max


def inputs_from_ensemble(
    ens,
    ch,
    p: float,
    epsilon: float | None = None,
    kappa: float | None = None,
    log_reading: str = "nat",
) -> BoundInputs:
    """Bound inputs for an :class:`EnsembleParams` over a channel model.

    ``a_L`` is the average number of X2 bits per LDGM check and ``a_R`` the
    average LDPC check degree; the g-functionals come from the channel's LLR
    density, with the X2 class punctured at ``p``.
    """
    base = llr_density(ch)
    return BoundInputs(
        p1=ens.p1,
        p2=ens.p2,
        C=capacity(ch),
        p=p,
        R_H=ens.rate_H,
        a_L=average_degree(ens.rho_G),
        a_R=average_degree(ens.rho_H),
        g11=min(1.0, g_functional(base, 1)),
        g21=min(1.0, g_functional(puncture_density(base, p), 1)),
        epsilon=epsilon,
        kappa=kappa,
        log_reading=log_reading,
    )
