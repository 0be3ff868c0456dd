"""Monte-Carlo sweeps over the BEC and DE-vs-simulation comparisons.

Every trial draws its randomness from ``SeedSequence([base_seed, point, trial])``
so results do not depend on the number of worker processes or their
completion order.  Aggregates are computed in canonical trial order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import channel as chn
from .decoder import bit_erasure_rate, decode
from .density_evolution import DEConfig, run_to_fixed_point
from .ensemble import (
    EnsembleParams,
    LdgmLdpcGraph,
    sample_codeword,
    sample_graph,
    sample_puncture_pattern,
)
from .errors import ConfigurationError, DecoderIntegrityError

SWEEP_COLUMNS = (
    "delta", "p", "n", "trials",
    "ber_x1_mean", "ber_x1_se", "ber_x2_mean", "ber_x2_se", "avg_iters", "error",
)
COMPARE_COLUMNS = (
    "delta", "p", "l", "de_x2", "mc_x2_mean", "mc_x2_se", "gap", "tolerance", "pass",
)
DE_MC_ITERATIONS = 30
DE_MC_TOL = 0.02


@dataclass(frozen=True)
class SweepSpec:
    ensemble: EnsembleParams
    deltas: tuple[float, ...]
    ps: tuple[float, ...] = (0.0,)
    trials: int = 10
    max_iters: int = 200
    base_seed: int = 0
    quenched: bool = False
    codeword: str = "zero"
    x1_feedback: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))
        object.__setattr__(self, "ps", tuple(float(p) for p in self.ps))
        if not self.deltas or not self.ps:
            raise ConfigurationError("sweep grids must be nonempty")
        if self.trials < 1:
            raise ConfigurationError("trials must be at least 1")
        if self.codeword not in ("zero", "random"):
            raise ConfigurationError(f"unknown codeword mode {self.codeword!r}")
        for d in self.deltas:
            chn.bec(d)
        for p in self.ps:
            if not 0.0 <= p <= 1.0:
                raise ConfigurationError(f"puncture probability {p} outside [0, 1]")

    def points(self) -> list[tuple[float, float]]:
        return [(d, p) for p in self.ps for d in self.deltas]

    def describe(self) -> dict:
        """Plain-data echo of the spec for JSON output."""
        ens = self.ensemble
        out = asdict(self)
        out["ensemble"] = {
            "n1": ens.n1, "n2": ens.n2, "seed": ens.seed, "puncture_p": ens.puncture_p,
            **{k: {str(d): c for d, c in getattr(ens, k).as_mapping().items()}
               for k in ("lambda_G", "rho_G", "lambda_H", "rho_H")},
        }
        out["deltas"] = list(self.deltas)
        out["ps"] = list(self.ps)
        return out


@dataclass
class TrialOutcome:
    ber_x1: float = 0.0
    ber_x2: float = 0.0
    iterations: int = 0
    trace: np.ndarray | None = None
    error: str = ""


def _trial_rng(spec: SweepSpec, point: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([spec.base_seed, point, trial]))


def _graph_for(spec: SweepSpec, rng: np.random.Generator) -> LdgmLdpcGraph:
    if spec.quenched:
        return _quenched_graph(spec.ensemble)
    seed = int(rng.integers(0, 2**63 - 1))
    return sample_graph(spec.ensemble, seed=seed)


_QUENCHED: dict[EnsembleParams, LdgmLdpcGraph] = {}


def _quenched_graph(ens: EnsembleParams) -> LdgmLdpcGraph:
    if ens not in _QUENCHED:
        _QUENCHED.clear()
        _QUENCHED[ens] = sample_graph(ens)
    return _QUENCHED[ens]


def run_trial(spec: SweepSpec, point: int, trial: int, delta: float, p: float,
              *, trace: bool = False, max_iters: int | None = None) -> TrialOutcome:
    """One transmission over ``BEC(delta)`` with X2 punctured at rate ``p``."""
    rng = _trial_rng(spec, point, trial)
    graph = _graph_for(spec, rng)
    if spec.codeword == "random":
        word = sample_codeword(graph, rng)
    else:
        word = np.zeros(graph.n, dtype=np.uint8)
    mask = sample_puncture_pattern(spec.ensemble, rng, p).mask
    rx = chn.transmit(chn.bec(delta), word, mask, rng)
    try:
        res = decode(graph, rx, spec.max_iters if max_iters is None else max_iters,
                     x1_feedback=spec.x1_feedback, trace=trace)
    except DecoderIntegrityError as exc:
        return TrialOutcome(math.nan, math.nan, 0, None, f"integrity: {exc}")
    wrong = res.known_mask & (res.resolved != word)
    if wrong.any():
        return TrialOutcome(math.nan, math.nan, res.iterations, None,
                            f"integrity: {int(wrong.sum())} bits resolved incorrectly")
    tr = res.trace
    if tr is not None and tr.shape[0] == 0:
        # no message ever changed: either nothing was erased or nothing can move
        tr = np.full((1, 6), 0.0 if res.converged else 1.0)
    return TrialOutcome(bit_erasure_rate(res, "X1"), bit_erasure_rate(res, "X2"),
                        res.iterations, tr)


def _run_task(args: tuple) -> TrialOutcome:
    spec, point, trial, delta, p, trace, iters = args
    return run_trial(spec, point, trial, delta, p, trace=trace, max_iters=iters)


def _map(tasks: list[tuple], jobs: int) -> list[TrialOutcome]:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_task, tasks))
    return [_run_task(t) for t in tasks]


def _mean_se(v: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(v))
    se = float(np.std(v, ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
    return mean, se


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[dict]:
    """Mean and standard error of X1/X2 erasure rates per ``(delta, p)`` grid point."""
    pts = spec.points()
    tasks = [(spec, i, t, d, p, False, None) for i, (d, p) in enumerate(pts) for t in range(spec.trials)]
    outcomes = _map(tasks, jobs)
    rows = []
    for i, (d, p) in enumerate(pts):
        chunk = outcomes[i * spec.trials:(i + 1) * spec.trials]
        errors = [o.error for o in chunk if o.error]
        row = {"delta": d, "p": p, "n": spec.ensemble.n, "trials": spec.trials, "error": ""}
        if errors:
            row.update(ber_x1_mean=math.nan, ber_x1_se=math.nan, ber_x2_mean=math.nan,
                       ber_x2_se=math.nan, avg_iters=math.nan, error=errors[0])
        else:
            row["ber_x1_mean"], row["ber_x1_se"] = _mean_se(np.array([o.ber_x1 for o in chunk]))
            row["ber_x2_mean"], row["ber_x2_se"] = _mean_se(np.array([o.ber_x2 for o in chunk]))
            row["avg_iters"] = float(np.mean([o.iterations for o in chunk]))
        rows.append(row)
    return rows


def de_trajectory(cfg: DEConfig, iterations: int = DE_MC_ITERATIONS) -> np.ndarray:
    """``(iterations, 6)`` DE states for ``l = 1..iterations`` from the all-ones start."""
    res = run_to_fixed_point(cfg, record=True, iterations=iterations)
    return np.array(res.trajectory[1:], dtype=float)


def _pad(trace: np.ndarray, length: int) -> np.ndarray:
    if trace.shape[0] >= length:
        return trace[:length]
    return np.vstack([trace, np.tile(trace[-1], (length - trace.shape[0], 1))])


def compare_de_mc(
    spec: SweepSpec,
    de_cfg: DEConfig,
    iterations: int = DE_MC_ITERATIONS,
    tol: float = DE_MC_TOL,
    jobs: int = 1,
) -> list[dict]:
    """Per-iteration DE ``x2`` against the simulated X2-to-LDGM-check erasure fraction.

    A row passes when ``|gap| <= max(tol, 3 * se)``.  The decoder feeds X1
    posteriors back exactly when the DE uses the ``x1 = delta * y1`` rule, so
    both sides model the same message-passing schedule.
    """
    spec = replace(spec, x1_feedback=(de_cfg.x1_rule == "printed"))
    pts = spec.points()
    tasks = [(spec, i, t, d, p, True, iterations) for i, (d, p) in enumerate(pts) for t in range(spec.trials)]
    outcomes = _map(tasks, jobs)
    rows = []
    for i, (d, p) in enumerate(pts):
        chunk = outcomes[i * spec.trials:(i + 1) * spec.trials]
        bad = [o.error for o in chunk if o.error]
        if bad:
            raise DecoderIntegrityError(bad[0])
        traces = np.stack([_pad(o.trace, iterations)[:, 1] for o in chunk])
        de = de_trajectory(replace(de_cfg, delta=d, p=p), iterations)[:, 1]
        for l in range(iterations):
            mean, se = _mean_se(traces[:, l])
            gap = abs(mean - de[l])
            allowed = max(tol, 3.0 * se)
            rows.append({
                "delta": d, "p": p, "l": l + 1, "de_x2": float(de[l]),
                "mc_x2_mean": mean, "mc_x2_se": se, "gap": gap,
                "tolerance": allowed, "pass": bool(gap <= allowed),
            })
    return rows


@dataclass(frozen=True)
class TransitionEstimate:
    delta: float
    below: float
    above: float


def erasure_transition(rows: list[dict], level: float = 0.5, column: str = "ber_x1_mean") -> TransitionEstimate:
    """Linear interpolation of where ``column`` crosses ``level`` times its maximum."""
    d = np.array([r["delta"] for r in rows])
    v = np.array([r[column] for r in rows])
    order = np.argsort(d)
    d, v = d[order], v[order]
    target = level * float(v.max())
    idx = int(np.argmax(v >= target)) if target > 0 else 0
    if idx == 0:
        return TransitionEstimate(float(d[0]), float(d[0]), float(d[0]))
    lo, hi = d[idx - 1], d[idx]
    t = (target - v[idx - 1]) / (v[idx] - v[idx - 1])
    return TransitionEstimate(float(lo + t * (hi - lo)), float(lo), float(hi))

