"""Degree lower bound versus capacity gap, with fixed puncturing and with p = 1 - kappa*eps."""

import argparse

import numpy as np

from ldgm_ldpc import bounds as bd
from ldgm_ldpc.serialize import to_csv, write_text


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--delta", type=float, default=0.5, help="BEC erasure probability")
    ap.add_argument("--p", type=float, default=0.9, help="fixed puncturing probability")
    ap.add_argument("--kappa", type=float, default=5.0)
    ap.add_argument("--log-reading", default="nat", choices=bd.LOG_READINGS)
    ap.add_argument("--output", default="results/bounded_complexity.csv")
    args = ap.parse_args()

    g1 = 1.0 - args.delta
    base = bd.BoundInputs(0.5, 0.5, g1, args.p, 0.5, 3.0, 6.0, g1, (1 - args.p) * g1,
                          log_reading=args.log_reading)
    rows = []
    for eps in 10.0 ** -np.arange(1, 9):
        fixed = bd.complexity_lower_bound(base, eps)
        sched = bd.with_schedule(base, eps, args.kappa)
        rows.append({"epsilon": eps, "fixed_p_bound": fixed, "schedule_p": sched.p,
                     "schedule_bound": bd.complexity_lower_bound(sched)})
        print(f"eps={eps:.0e}  fixed p: {fixed:8.4f}   p=1-kappa*eps: {rows[-1]['schedule_bound']:8.4f}")
    write_text(args.output, to_csv(rows, ("epsilon", "fixed_p_bound", "schedule_p", "schedule_bound")))


if __name__ == "__main__":
    main()
