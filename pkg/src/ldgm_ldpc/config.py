"""TOML run configuration with strict key checking.

Example::

    [ensemble]
    n1 = 1000
    n2 = 1000
    lambda_G = {2 = 1.0}     # degree -> edge fraction
    rho_G = {2 = 1.0}
    lambda_H = {3 = 1.0}
    rho_H = {6 = 1.0}
    seed = 7

    [channel]
    kind = "bec"
    param = 0.4

    [puncture]
    p = 0.5                  # or a [puncture.schedule] table with kappa, epsilon
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import bounds
from .channel import ChannelModel
from .degree_dist import DegreeDistribution, parse_distribution
from .density_evolution import DEFAULT_MAX_ITERS, DEFAULT_TOL, DEConfig
from .ensemble import EnsembleParams
from .errors import ConfigurationError
from .experiments import SweepSpec


@dataclass(frozen=True)
class EnsembleSection:
    n1: int = 1000
    n2: int = 1000
    lambda_G: dict = field(default_factory=lambda: {2: 1.0})
    rho_G: dict = field(default_factory=lambda: {2: 1.0})
    lambda_H: dict = field(default_factory=lambda: {3: 1.0})
    rho_H: dict = field(default_factory=lambda: {6: 1.0})
    seed: int = 0


@dataclass(frozen=True)
class ChannelSection:
    kind: str = "bec"
    param: float = 0.5


@dataclass(frozen=True)
class ScheduleSection:
    kappa: float
    epsilon: float


@dataclass(frozen=True)
class PunctureSection:
    p: float | None = None
    schedule: ScheduleSection | None = None


@dataclass(frozen=True)
class DESection:
    tol: float = DEFAULT_TOL
    max_iters: int = DEFAULT_MAX_ITERS
    x1_rule: str = "printed"
    check_to_x1: str = "node"
    iterations: int = 30  # length of the written trace
    precision: float = 1e-6


@dataclass(frozen=True)
class SweepSection:
    deltas: tuple = (0.3, 0.4, 0.5)
    ps: tuple | None = None  # defaults to the [puncture] probability
    trials: int = 10
    max_iters: int = 200
    quenched: bool = False
    codeword: str = "zero"
    x1_feedback: bool = False
    tol: float = 0.02


@dataclass(frozen=True)
class BoundsSection:
    log_reading: str = "nat"
    p_max: int = 50
    epsilon: float | None = None


@dataclass(frozen=True)
class OutputSection:
    path: str | None = None
    format: str = "csv"


_SECTIONS = {
    "ensemble": EnsembleSection,
    "channel": ChannelSection,
    "puncture": PunctureSection,
    "de": DESection,
    "sweep": SweepSection,
    "bounds": BoundsSection,
    "output": OutputSection,
}


def _build(cls, data: Mapping[str, Any], where: str):
    if not isinstance(data, Mapping):
        raise ConfigurationError(f"[{where}] must be a table")
    allowed = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigurationError(f"unknown key(s) in [{where}]: {', '.join(unknown)}")
    kwargs = dict(data)
    if cls is PunctureSection and "schedule" in kwargs:
        kwargs["schedule"] = _build(ScheduleSection, kwargs["schedule"], "puncture.schedule")
    for k in ("deltas", "ps"):
        if k in kwargs:
            kwargs[k] = tuple(float(v) for v in kwargs[k])
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigurationError(f"[{where}]: {exc}") from None


@dataclass(frozen=True)
class RunConfig:
    ensemble: EnsembleSection = field(default_factory=EnsembleSection)
    channel: ChannelSection = field(default_factory=ChannelSection)
    puncture: PunctureSection = field(default_factory=PunctureSection)
    de: DESection = field(default_factory=DESection)
    sweep: SweepSection = field(default_factory=SweepSection)
    bounds: BoundsSection = field(default_factory=BoundsSection)
    output: OutputSection = field(default_factory=OutputSection)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "RunConfig":
        unknown = sorted(set(data) - set(_SECTIONS))
        if unknown:
            raise ConfigurationError(f"unknown section(s): {', '.join(unknown)}")
        return cls(**{k: _build(c, data[k], k) for k, c in _SECTIONS.items() if k in data})

    def override(self, section: str, **values: Any) -> "RunConfig":
        """Replace non-``None`` values inside one section (command-line flags win)."""
        values = {k: v for k, v in values.items() if v is not None}
        if not values:
            return self
        sec = getattr(self, section)
        try:
            return replace(self, **{section: replace(sec, **values)})
        except TypeError as exc:
            raise ConfigurationError(str(exc)) from None

    # -- typed views ---------------------------------------------------------

    def distributions(self) -> dict[str, DegreeDistribution]:
        e = self.ensemble
        return {k: parse_distribution(getattr(e, k)) for k in ("lambda_G", "rho_G", "lambda_H", "rho_H")}

    def puncture_p(self) -> float:
        pu = self.puncture
        if pu.schedule is not None:
            if pu.p is not None:
                raise ConfigurationError("give either puncture.p or puncture.schedule, not both")
            return bounds.puncture_schedule(pu.schedule.epsilon, pu.schedule.kappa)
        return 0.0 if pu.p is None else float(pu.p)

    def ensemble_params(self) -> EnsembleParams:
        e = self.ensemble
        return EnsembleParams(e.n1, e.n2, **self.distributions(), puncture_p=self.puncture_p(), seed=e.seed)

    def channel_model(self) -> ChannelModel:
        return ChannelModel(self.channel.kind, self.channel.param)

    def de_config(self) -> DEConfig:
        ch = self.channel_model()
        if ch.kind != "bec":
            raise ConfigurationError("density evolution is implemented for the BEC only")
        d = self.de
        return DEConfig(**self.distributions(), delta=ch.param, p=self.puncture_p(), tol=d.tol,
                        max_iters=d.max_iters, x1_rule=d.x1_rule, check_to_x1=d.check_to_x1)

    def sweep_spec(self, seed: int | None = None) -> SweepSpec:
        s = self.sweep
        return SweepSpec(
            self.ensemble_params(), s.deltas, s.ps if s.ps is not None else (self.puncture_p(),),
            s.trials, s.max_iters,
            self.ensemble.seed if seed is None else seed,
            s.quenched, s.codeword, s.x1_feedback,
        )

    def bound_inputs(self) -> bounds.BoundInputs:
        sched = self.puncture.schedule
        eps = sched.epsilon if sched is not None else self.bounds.epsilon
        kappa = sched.kappa if sched is not None else None
        return bounds.inputs_from_ensemble(
            self.ensemble_params(), self.channel_model(), self.puncture_p(),
            epsilon=eps, kappa=kappa, log_reading=self.bounds.log_reading,
        )


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"malformed config {path}: {exc}") from None
    return RunConfig.from_mapping(data)
