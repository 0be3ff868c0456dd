"""Command-line entry point: ``ldgm-ldpc <subcommand> [--config FILE] [flags]``.

Results go to ``--output`` (or stdout).  Failures print one JSON object on
stderr; exit status 2 means a bad configuration, 3 a numerical degeneracy,
4 a decoder integrity failure and 1 anything else.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import bounds, experiments, gf2
from .channel import capacity, class_g_functionals
from .config import PunctureSection, RunConfig, ScheduleSection, load_config
from .decoder import TRACE_COLUMNS
from .density_evolution import (
    capacity_limit_stability,
    run_to_fixed_point,
    stability_closed_form,
    stability_jacobian,
    threshold_search,
)
from .ensemble import sample_codeword, sample_graph, sample_puncture_pattern
from .errors import (
    BoundUndefinedError,
    ConfigurationError,
    DecoderIntegrityError,
    DegenerateLinearizationError,
    DomainError,
    NonMonotoneError,
    ScheduleInfeasibleError,
)
from .serialize import to_csv, to_json, to_json_line, write_text

EXIT_OK, EXIT_OTHER, EXIT_CONFIG, EXIT_NUMERIC, EXIT_INTEGRITY = 0, 1, 2, 3, 4

_EXIT_CODES: tuple[tuple[type, int], ...] = (
    (ConfigurationError, EXIT_CONFIG),
    (ScheduleInfeasibleError, EXIT_CONFIG),
    (DomainError, EXIT_CONFIG),
    (BoundUndefinedError, EXIT_NUMERIC),
    (DegenerateLinearizationError, EXIT_NUMERIC),
    (NonMonotoneError, EXIT_NUMERIC),
    (DecoderIntegrityError, EXIT_INTEGRITY),
)

DE_TRACE_COLUMNS = ("l",) + TRACE_COLUMNS


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        _fail("usage", message, EXIT_CONFIG)


def _fail(kind: str, message: str, code: int) -> None:
    sys.stderr.write(to_json_line({"error": kind, "message": message}) + "\n")
    raise SystemExit(code)


def _emit(text: str, output: str | None) -> None:
    if output:
        write_text(output, text)
    else:
        sys.stdout.write(text)


def _format(args: argparse.Namespace, cfg: RunConfig) -> str:
    fmt = args.format or cfg.output.format
    if fmt not in ("csv", "json"):
        raise ConfigurationError(f"unknown output format {fmt!r}")
    return fmt


def _output(args: argparse.Namespace, cfg: RunConfig) -> str | None:
    return args.output or cfg.output.path


def _table(rows: list[dict], columns: Sequence[str], fmt: str, extra: dict | None = None) -> str:
    if fmt == "json":
        return to_json({**(extra or {}), "rows": [{c: r.get(c) for c in columns} for r in rows]})
    return to_csv(rows, columns)


# -- configuration --------------------------------------------------------------

def _resolve(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config)
    cfg = cfg.override("ensemble", n1=args.n1, n2=args.n2, seed=args.seed)
    cfg = cfg.override("channel", kind=args.channel, param=args.delta)
    if args.p is not None:
        cfg = replace(cfg, puncture=PunctureSection(p=args.p))
    if args.epsilon is not None or args.kappa is not None:
        old = cfg.puncture.schedule
        eps = args.epsilon if args.epsilon is not None else (old.epsilon if old else None)
        kappa = args.kappa if args.kappa is not None else (old.kappa if old else None)
        if eps is None or kappa is None:
            raise ConfigurationError("a puncturing schedule needs both epsilon and kappa")
        cfg = replace(cfg, puncture=PunctureSection(schedule=ScheduleSection(kappa, eps)))
    cfg = cfg.override("de", x1_rule=args.x1_rule, check_to_x1=args.check_to_x1,
                       iterations=args.iterations, precision=args.precision)
    cfg = cfg.override("sweep", trials=args.trials)
    cfg = cfg.override("bounds", log_reading=args.log_reading, p_max=args.p_max)
    return cfg


def _seed(args: argparse.Namespace, cfg: RunConfig) -> int:
    return cfg.ensemble.seed if args.seed is None else args.seed


# -- subcommands ----------------------------------------------------------------

def cmd_sample(args: argparse.Namespace, cfg: RunConfig) -> None:
    ens = cfg.ensemble_params()
    graph = sample_graph(ens, seed=_seed(args, cfg))
    out = _output(args, cfg)
    if out:
        gf2.write_alist(graph.mother, out)
    summary = {
        "n1": graph.n1, "n2": graph.n2, "checks": graph.mother.n_rows,
        "edges": graph.mother.nnz, "design_rate": ens.mother_design_rate,
        "dimension": graph.dimension, "true_rate": graph.true_rate(),
    }
    sys.stdout.write(to_json(summary))
    if not out:
        gf2.write_alist(graph.mother, sys.stdout)


def cmd_encode(args: argparse.Namespace, cfg: RunConfig) -> None:
    ens = cfg.ensemble_params()
    seed = _seed(args, cfg)
    graph = sample_graph(ens, seed=seed)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    word = sample_codeword(graph, rng)
    mask = sample_puncture_pattern(ens, rng)
    sent = "".join("-" if m else str(b) for b, m in zip(word.tolist(), mask.mask.tolist()))
    _emit(to_json({
        "n1": graph.n1, "n2": graph.n2, "p": ens.puncture_p,
        "codeword": "".join(map(str, word.tolist())),
        "puncture_mask": mask.to_bitstring(),
        "transmitted": sent,
        "syndrome_zero": not gf2.matvec(graph.mother, word).any(),
    }), _output(args, cfg))


def cmd_simulate(args: argparse.Namespace, cfg: RunConfig) -> None:
    ch = cfg.channel_model()
    if ch.kind != "bec":
        raise ConfigurationError("the erasure decoder needs a BEC channel")
    p = cfg.puncture_p()
    spec = replace(cfg.sweep_spec(_seed(args, cfg)), deltas=(ch.param,), ps=(p,), trials=1)
    res = experiments.run_trial(spec, 0, 0, ch.param, p)
    if res.error:
        raise DecoderIntegrityError(res.error)
    _emit(to_json({"delta": ch.param, "p": p, "n": spec.ensemble.n, "ber_x1": res.ber_x1,
                   "ber_x2": res.ber_x2, "iterations": res.iterations}), _output(args, cfg))


def _de_rows(cfg, iterations: int) -> list[dict]:
    res = run_to_fixed_point(cfg, record=True, iterations=iterations)
    # row l is the state after l updates from the all-ones start
    return [dict(zip(DE_TRACE_COLUMNS, (l, *s))) for l, s in enumerate(res.trajectory) if l > 0]


def cmd_de(args: argparse.Namespace, cfg: RunConfig) -> None:
    de = cfg.de_config()
    rows = _de_rows(de, cfg.de.iterations)
    fp = run_to_fixed_point(de)
    meta = {"delta": de.delta, "p": de.p, "fixed_point": list(fp.state),
            "iterations": fp.iterations, "converged": fp.converged, "monotone": fp.monotone}
    _emit(_table(rows, DE_TRACE_COLUMNS, _format(args, cfg), meta), _output(args, cfg))


def cmd_threshold(args: argparse.Namespace, cfg: RunConfig) -> None:
    de = cfg.de_config()
    delta_star = threshold_search(de, precision=cfg.de.precision, jobs=args.jobs)
    sys.stdout.write(to_json({"threshold": delta_star, "p": de.p, "x1_rule": de.x1_rule,
                              "check_to_x1": de.check_to_x1, "precision": cfg.de.precision}))
    out = _output(args, cfg)
    if out:
        rows = _de_rows(replace(de, delta=delta_star), cfg.de.iterations)
        write_text(out, _table(rows, DE_TRACE_COLUMNS, _format(args, cfg), {"threshold": delta_star}))


def cmd_stability(args: argparse.Namespace, cfg: RunConfig) -> None:
    de = cfg.de_config()
    closed, closed_ok = stability_closed_form(de)
    derived, derived_ok = stability_closed_form(de, variant="derived")
    jac, jac_ok = stability_jacobian(de)
    limit, limit_ok = capacity_limit_stability(de)
    _emit(to_json({
        "delta": de.delta, "p": de.p,
        "closed_form": closed, "closed_form_stable": closed_ok,
        "derived": derived, "derived_stable": derived_ok,
        "jacobian": jac, "jacobian_stable": jac_ok,
        "capacity_limit": limit, "capacity_limit_stable": limit_ok,
        "stable": jac_ok, "agree": closed_ok == jac_ok,
    }), _output(args, cfg))


def cmd_bounds(args: argparse.Namespace, cfg: RunConfig) -> None:
    b = cfg.bound_inputs()
    ch = cfg.channel_model()
    g1, g2 = class_g_functionals(ch, b.p)
    result: dict[str, Any] = {
        "p": b.p, "epsilon": b.epsilon, "kappa": b.kappa, "capacity": capacity(ch),
        "effective_capacity": bounds.effective_capacity(b.C, b.p2, b.p),
        "g11": b.g11, "g21": b.g21, "a_L": b.a_L, "a_R": b.a_R, "R_H": b.R_H,
        "weighted_degree": bounds.weighted_degree(b),
        "rate_bound": bounds.rate_upper_bound(b),
        "degree_bound": bounds.complexity_lower_bound(b) if b.epsilon is not None else None,
        "prop1_bound": bounds.entropy_series_bound(b, g1, g2, cfg.bounds.p_max),
        "p_max": cfg.bounds.p_max, "log_reading": b.log_reading,
    }
    _emit(to_json(result), _output(args, cfg))


def cmd_sweep(args: argparse.Namespace, cfg: RunConfig) -> None:
    spec = cfg.sweep_spec(_seed(args, cfg))
    rows = experiments.run_sweep(spec, jobs=args.jobs)
    fmt = _format(args, cfg)
    out = _output(args, cfg)
    _emit(_table(rows, experiments.SWEEP_COLUMNS, fmt, {"spec": spec.describe()}), out)
    if out and fmt == "csv":
        mirror = Path(out).with_suffix(".json")
        write_text(mirror, _table(rows, experiments.SWEEP_COLUMNS, "json", {"spec": spec.describe()}))


def cmd_compare(args: argparse.Namespace, cfg: RunConfig) -> None:
    spec = cfg.sweep_spec(_seed(args, cfg))
    de = cfg.de_config()
    rows = experiments.compare_de_mc(spec, de, iterations=cfg.de.iterations,
                                     tol=cfg.sweep.tol, jobs=args.jobs)
    meta = {"spec": spec.describe(), "all_pass": all(r["pass"] for r in rows)}
    _emit(_table(rows, experiments.COMPARE_COLUMNS, _format(args, cfg), meta), _output(args, cfg))


COMMANDS: dict[str, tuple[Callable[[argparse.Namespace, RunConfig], None], str]] = {
    "sample": (cmd_sample, "sample a mother matrix and write it in alist format"),
    "encode": (cmd_encode, "sample a codeword and puncturing pattern"),
    "simulate": (cmd_simulate, "one erasure-decoding trial"),
    "de": (cmd_de, "density-evolution trace"),
    "threshold": (cmd_threshold, "density-evolution threshold in delta"),
    "stability": (cmd_stability, "zero-fixed-point stability checks"),
    "bounds": (cmd_bounds, "rate, degree and entropy bounds"),
    "sweep": (cmd_sweep, "Monte-Carlo erasure-rate sweep"),
    "compare": (cmd_compare, "density evolution against simulation"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ldgm-ldpc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="TOML run configuration")
        p.add_argument("--seed", type=int)
        p.add_argument("--output", "-o")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--n1", type=int)
        p.add_argument("--n2", type=int)
        p.add_argument("--channel", choices=("bec", "bsc", "biawgn"))
        p.add_argument("--delta", type=float, help="channel parameter")
        p.add_argument("--p", type=float, help="X2 puncturing probability")
        p.add_argument("--epsilon", type=float)
        p.add_argument("--kappa", type=float)
        p.add_argument("--x1-rule", choices=("printed", "channel"))
        p.add_argument("--check-to-x1", choices=("node", "edge"))
        p.add_argument("--iterations", type=int)
        p.add_argument("--precision", type=float)
        p.add_argument("--trials", type=int)
        p.add_argument("--log-reading", choices=bounds.LOG_READINGS)
        p.add_argument("--p-max", type=int)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        handler(args, _resolve(args))
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes below
        code = next((c for t, c in _EXIT_CODES if isinstance(exc, t)), EXIT_OTHER)
        _fail(type(exc).__name__, str(exc).splitlines()[0] if str(exc) else "", code)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
