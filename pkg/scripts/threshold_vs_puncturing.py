"""DE threshold in delta as a function of the X2 puncturing probability."""

import argparse

import numpy as np

from ldgm_ldpc.degree_dist import parse_distribution
from ldgm_ldpc.density_evolution import DEConfig, threshold_search
from ldgm_ldpc.serialize import to_csv, write_text


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=11)
    ap.add_argument("--x1-rule", default="channel", choices=("printed", "channel"))
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--output", default="results/threshold_vs_puncturing.csv")
    args = ap.parse_args()

    ensembles = {
        "regular_2_2_3_6": ({2: 1.0}, {2: 1.0}, {3: 1.0}, {6: 1.0}),
        "degree_one_checks": ({1: 0.3, 3: 0.7}, {1: 0.5, 2: 0.5}, {2: 0.2, 3: 0.8}, {6: 1.0}),
    }
    rows = []
    for name, dists in ensembles.items():
        lam_G, rho_G, lam_H, rho_H = (parse_distribution(d) for d in dists)
        for p in np.linspace(0.0, 1.0, args.points):
            cfg = DEConfig(lam_G, rho_G, lam_H, rho_H, delta=0.0, p=float(p), x1_rule=args.x1_rule)
            t = threshold_search(cfg, precision=1e-5, jobs=args.jobs)
            rows.append({"ensemble": name, "p": float(p), "threshold": t})
            print(f"{name:20s} p={p:.2f} delta*={t:.5f}")
    write_text(args.output, to_csv(rows, ("ensemble", "p", "threshold")))


if __name__ == "__main__":
    main()
