"""BEC density evolution for the punctured LDGM-LDPC ensemble.

State per iteration: erasure probabilities on the three edge classes,
``x`` for variable-to-check and ``y`` for check-to-variable messages:

* class 1: X1 bit <-> its LDGM check (identity edge)
* class 2: X2 bit <-> LDGM check
* class 3: X2 bit <-> LDPC check

One step recomputes every ``y`` from the previous ``x`` and then every ``x``
from the fresh ``y``.  Two modelling switches are exposed:

``x1_rule``
    ``"printed"``: ``x1 = delta * y1`` (the X1 node returns its posterior,
    so the identity edge also carries feedback); ``"channel"``: ``x1 = delta``
    (strictly extrinsic, which is what a message-passing decoder computes
    for a degree-one node).
``check_to_x1``
    ``"node"``: ``y1 = 1 - R_G(1 - x2)`` with the node-perspective check
    polynomial; ``"edge"``: ``y1 = 1 - rho_G(1 - x2)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple

import numpy as np

from .degree_dist import DegreeDistribution, derivative_at, eval_poly, node_perspective
from .errors import ConfigurationError, DegenerateLinearizationError, NonMonotoneError

Poly = Callable[[float], float]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERS = 100_000
ZERO_LEVEL = 1e-8


class DEState(NamedTuple):
    x1: float
    x2: float
    x3: float
    y1: float
    y2: float
    y3: float

    @classmethod
    def ones(cls) -> "DEState":
        return cls(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)

    @classmethod
    def perturbation(cls, x2: float, x3: float) -> "DEState":
        return cls(0.0, x2, x3, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class DEConfig:
    lambda_G: DegreeDistribution
    rho_G: DegreeDistribution
    lambda_H: DegreeDistribution
    rho_H: DegreeDistribution
    delta: float
    p: float = 0.0
    tol: float = DEFAULT_TOL
    max_iters: int = DEFAULT_MAX_ITERS
    x1_rule: str = "printed"
    check_to_x1: str = "node"

    def __post_init__(self) -> None:
        if not 0.0 <= self.delta <= 1.0:
            raise ConfigurationError(f"delta={self.delta} outside [0, 1]")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigurationError(f"p={self.p} outside [0, 1]")
        if not self.tol > 0:
            raise ConfigurationError("tol must be positive")
        if self.x1_rule not in ("printed", "channel"):
            raise ConfigurationError(f"unknown x1_rule {self.x1_rule!r}")
        if self.check_to_x1 not in ("node", "edge"):
            raise ConfigurationError(f"unknown check_to_x1 {self.check_to_x1!r}")
        for name in ("lambda_G", "rho_G", "lambda_H", "rho_H"):
            if getattr(self, name).perspective != "edge":
                raise ConfigurationError(f"{name} must be edge-perspective")

    @property
    def prior(self) -> float:
        """Probability that an X2 bit is erased or punctured."""
        return 1.0 - (1.0 - self.delta) * (1.0 - self.p)


def _fast(d: DegreeDistribution) -> Poly:
    terms = d.terms
    if len(terms) == 1:
        (e, c), = terms
        if c == 1.0:
            return lambda x: x**e
        return lambda x: c * x**e
    return lambda x: sum(c * x**e for e, c in terms)


@dataclass(frozen=True)
class _Polys:
    lam_G: Poly
    rho_G: Poly
    lam_H: Poly
    rho_H: Poly
    L_G: Poly
    L_H: Poly
    R_G: Poly

    @classmethod
    def of(cls, cfg: DEConfig) -> "_Polys":
        return cls(
            _fast(cfg.lambda_G), _fast(cfg.rho_G), _fast(cfg.lambda_H), _fast(cfg.rho_H),
            _fast(node_perspective(cfg.lambda_G)), _fast(node_perspective(cfg.lambda_H)),
            _fast(node_perspective(cfg.rho_G)),
        )


def _clip(v: float) -> float:
    return 0.0 if v < 0.0 else (1.0 if v > 1.0 else v)


def _stepper(cfg: DEConfig) -> Callable[[DEState], DEState]:
    P = _Polys.of(cfg)
    prior, delta = cfg.prior, cfg.delta
    y1_poly = P.R_G if cfg.check_to_x1 == "node" else P.rho_G
    printed = cfg.x1_rule == "printed"

    def step(s: DEState) -> DEState:
        u2 = 1.0 - s.x2
        y1 = _clip(1.0 - y1_poly(u2))
        y2 = _clip(1.0 - (1.0 - s.x1) * P.rho_G(u2))
        y3 = _clip(1.0 - P.rho_H(1.0 - s.x3))
        x1 = delta * y1 if printed else delta
        x2 = _clip(prior * P.lam_G(y2) * P.L_H(y3))
        x3 = _clip(prior * P.L_G(y2) * P.lam_H(y3))
        return DEState(x1, x2, x3, y1, y2, y3)

    return step


def de_step(cfg: DEConfig, s: DEState) -> DEState:
    return _stepper(cfg)(DEState(*s))


@dataclass
class FixedPointResult:
    state: DEState
    iterations: int
    converged: bool
    monotone: bool
    trajectory: list[DEState] | None = None

    @property
    def is_zero(self) -> bool:
        return self.state.x2 < ZERO_LEVEL and self.state.x3 < ZERO_LEVEL


def run_to_fixed_point(
    cfg: DEConfig,
    init: DEState | None = None,
    *,
    record: bool = False,
    iterations: int | None = None,
) -> FixedPointResult:
    """Iterate until the max-norm change drops below ``cfg.tol``.

    ``iterations`` forces exactly that many steps (used for trajectory traces).
    ``monotone`` reports whether every coordinate was nonincreasing along the way.
    """
    step = _stepper(cfg)
    s = DEState.ones() if init is None else DEState(*(float(v) for v in init))
    traj = [s] if record else None
    monotone = True
    limit = cfg.max_iters if iterations is None else iterations
    converged = False
    n = 0
    for n in range(1, limit + 1):
        nxt = step(s)
        change = max(abs(a - b) for a, b in zip(nxt, s))
        if any(b > a + 1e-15 for a, b in zip(s, nxt)):
            monotone = False
        s = nxt
        if traj is not None:
            traj.append(s)
        if iterations is None and change < cfg.tol:
            converged = True
            break
    else:
        n = limit
    return FixedPointResult(s, n, converged, monotone, traj)


def fixed_point_maps(cfg: DEConfig, x2: float, x3: float) -> tuple[float, float]:
    """Right-hand sides of the two-equation fixed-point system in ``(x2, x3)``.

    ``x1`` and the check messages are eliminated; under the printed rule this
    is ``x1 = delta * (1 - R_G(1 - x2))``.
    """
    P = _Polys.of(cfg)
    return _maps(cfg, P)(x2, x3)


def _maps(cfg: DEConfig, P: _Polys) -> Callable[[float, float], tuple[float, float]]:
    prior, delta = cfg.prior, cfg.delta
    y1_poly = P.R_G if cfg.check_to_x1 == "node" else P.rho_G
    printed = cfg.x1_rule == "printed"

    def psi(x2: float, x3: float) -> tuple[float, float]:
        u2 = 1.0 - x2
        x1 = delta * (1.0 - y1_poly(u2)) if printed else delta
        y2 = 1.0 - (1.0 - x1) * P.rho_G(u2)
        y3 = 1.0 - P.rho_H(1.0 - x3)
        return prior * P.lam_G(y2) * P.L_H(y3), prior * P.L_G(y2) * P.lam_H(y3)

    return psi


def fixed_point_residual(cfg: DEConfig, s: DEState) -> float:
    a, b = fixed_point_maps(cfg, s.x2, s.x3)
    return max(abs(a - s.x2), abs(b - s.x3))


# -- thresholds -----------------------------------------------------------------

def decodes_to_zero(cfg: DEConfig) -> bool:
    return run_to_fixed_point(cfg).is_zero


def _probe(args: tuple[DEConfig, float]) -> bool:
    cfg, delta = args
    return decodes_to_zero(replace(cfg, delta=delta))


def threshold_search(
    cfg: DEConfig,
    precision: float = 1e-6,
    grid_points: int = 21,
    jobs: int = 1,
) -> float:
    """Largest ``delta`` whose DE from all-ones reaches ``x2, x3 < 1e-8``.

    A coarse grid is evaluated first; a success set that is not a prefix of
    the grid raises :class:`NonMonotoneError`.  Bisection then refines the
    bracket to ``precision``.
    """
    grid = np.linspace(0.0, 1.0, grid_points).tolist()
    tasks = [(cfg, d) for d in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            ok = list(pool.map(_probe, tasks))
    else:
        ok = [_probe(t) for t in tasks]
    first_fail = next((i for i, v in enumerate(ok) if not v), len(ok))
    if any(ok[first_fail:]):
        bad = [round(grid[i], 6) for i in range(first_fail, len(ok)) if ok[i]]
        raise NonMonotoneError(f"DE succeeds again at delta={bad} after failing")
    if first_fail == len(ok):
        return 1.0
    if first_fail == 0:
        return 0.0
    lo, hi = grid[first_fail - 1], grid[first_fail]
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if _probe((cfg, mid)):
            lo = mid
        else:
            hi = mid
    return lo


def scalar_ldpc_threshold(lam: DegreeDistribution, rho: DegreeDistribution,
                          precision: float = 1e-7, max_iters: int = 200_000) -> float:
    """Plain LDPC BEC threshold of ``x = e * lam(1 - rho(1 - x))`` by bisection."""
    fl, fr = _fast(lam), _fast(rho)

    def ok(eps: float) -> bool:
        x = eps
        for _ in range(max_iters):
            nx = eps * fl(1.0 - fr(1.0 - x))
            if nx < ZERO_LEVEL:
                return True
            if abs(nx - x) < 1e-13:
                return False
            x = nx
        return False

    lo, hi = 0.0, 1.0
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return lo


# -- stability ------------------------------------------------------------------

def _stability_product(cfg: DEConfig, prior: float, variant: str) -> float:
    lG0 = eval_poly(cfg.lambda_G, 0.0)
    LG = node_perspective(cfg.lambda_G)
    LH = node_perspective(cfg.lambda_H)
    core = (
        prior**2
        * lG0
        * derivative_at(LG, 0.0)
        * derivative_at(cfg.rho_H, 1.0)
        * eval_poly(cfg.lambda_H, 0.0)
        * derivative_at(LH, 0.0)
    )
    if variant == "printed":
        return core * (cfg.delta * derivative_at(LG, 1.0) + derivative_at(cfg.rho_G, 1.0))
    if variant == "derived":
        return _derived_criterion(cfg, prior)
    raise ValueError(f"unknown variant {variant!r}")


def _derived_criterion(cfg: DEConfig, prior: float) -> float:
    """Exact linearization of the fixed-point system at the origin."""
    lam_G, rho_G, lam_H, rho_H = cfg.lambda_G, cfg.rho_G, cfg.lambda_H, cfg.rho_H
    LG, LH, RG = (node_perspective(d) for d in (lam_G, lam_H, rho_G))
    delta = cfg.delta
    if cfg.x1_rule == "printed":
        y0 = 0.0
        y1_slope = derivative_at(RG if cfg.check_to_x1 == "node" else rho_G, 1.0)
        dy = delta * y1_slope + derivative_at(rho_G, 1.0)
    else:
        y0 = delta
        dy = (1.0 - delta) * derivative_at(rho_G, 1.0)
    z_slope = derivative_at(rho_H, 1.0)
    a_x3 = prior * eval_poly(lam_G, y0) * derivative_at(LH, 0.0) * z_slope
    b_x2 = prior * derivative_at(LG, y0) * dy * eval_poly(lam_H, 0.0)
    b_x3 = prior * eval_poly(LG, y0) * derivative_at(lam_H, 0.0) * z_slope
    if abs(1.0 - b_x3) < 1e-12:
        raise DegenerateLinearizationError("1 - dpsi_B/dx3 vanishes at the origin")
    return a_x3 * b_x2 / (1.0 - b_x3)


def stability_closed_form(cfg: DEConfig, variant: str = "printed") -> tuple[float, bool]:
    """Zero-fixed-point stability product; stable when below one.

    ``variant="printed"`` uses the closed form with ``delta * L_G'(1)`` in the
    bracket, which is exact only when ``n1 = n2``.  ``"derived"`` is the exact
    origin linearization for the configured update rules; under the printed
    rules it differs only by ``R_G'(1)`` replacing ``L_G'(1)``.
    """
    value = _stability_product(cfg, cfg.prior, variant)
    return value, value < 1.0


def capacity_limit_stability(cfg: DEConfig, variant: str = "printed") -> tuple[float, bool]:
    """Stability product with the erasure prior at its ``p -> 1`` limit of one."""
    value = _stability_product(cfg, 1.0, variant)
    return value, value < 1.0


FD_STEP = 1e-7
RICHARDSON_STEPS = (1e-6, 5e-7)


def _partial(f: Callable[[float], float], x0: float) -> float:
    if x0 < RICHARDSON_STEPS[0]:
        h1, h2 = RICHARDSON_STEPS
        d1 = (f(x0 + h1) - f(x0)) / h1
        d2 = (f(x0 + h2) - f(x0)) / h2
        return (h1 * d2 - h2 * d1) / (h1 - h2)
    h = min(FD_STEP, 1.0 - x0) if x0 < 1.0 else FD_STEP
    if x0 + h > 1.0:
        return (f(x0) - f(x0 - h)) / h
    return (f(x0 + h) - f(x0 - h)) / (2 * h)


def jacobian_partials(cfg: DEConfig, at: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """``[[dA/dx2, dA/dx3], [dB/dx2, dB/dx3]]`` of the fixed-point maps by finite differences."""
    psi = _maps(cfg, _Polys.of(cfg))
    x2, x3 = at
    J = np.empty((2, 2))
    for i in range(2):
        J[i, 0] = _partial(lambda t: psi(t, x3)[i], x2)
        J[i, 1] = _partial(lambda t: psi(x2, t)[i], x3)
    return J


def stability_jacobian(cfg: DEConfig, at: tuple[float, float] = (0.0, 0.0)) -> tuple[float, bool]:
    """``dA/dx2 + dA/dx3 * (dB/dx2) / (1 - dB/dx3)``; stable when below one."""
    J = jacobian_partials(cfg, at)
    denom = 1.0 - J[1, 1]
    if abs(denom) < 1e-12:
        raise DegenerateLinearizationError("1 - dpsi_B/dx3 is numerically zero")
    crit = float(J[0, 0] + J[0, 1] * J[1, 0] / denom)
    return crit, crit < 1.0


def perturbation_decay_rate(
    cfg: DEConfig, x0: tuple[float, float] = (1e-4, 1e-4), iterations: int = 50
) -> float:
    """Per-iteration geometric factor of ``max(x1, x2, x3)`` fitted over ``iterations`` steps."""
    step = _stepper(cfg)
    s = DEState.perturbation(*x0)
    norms = [max(s.x1, s.x2, s.x3)]
    for _ in range(iterations):
        s = step(s)
        norms.append(max(s.x1, s.x2, s.x3))
    v = np.array(norms)
    pos = v > 1e-300
    if pos.sum() < 2:
        return 0.0
    if not pos.all():
        return 0.0
    slope = np.polyfit(np.arange(v.size), np.log(v), 1)[0]
    return float(math.exp(slope))
