#!/usr/bin/env python
"""Non-Markovian measure of the Pauli simplex versus n (quadrature and Monte Carlo)."""
import argparse
import csv
from pathlib import Path

import numpy as np

from paulimix.region import monte_carlo_measure, region_measure


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=33)
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", type=Path, default=Path("results/fig1_measure.csv"))
    p.add_argument("--plot", action="store_true", help="also save a PNG next to the CSV (needs matplotlib)")
    args = p.parse_args()

    ns = np.linspace(2.0, args.n_max, args.points)
    rows = []
    for n in ns:
        mc = monte_carlo_measure(n, args.samples, args.seed)
        rows.append((n, region_measure(n), mc.estimate, mc.std_error))
        print(f"n={n:6.3f}  quad={rows[-1][1]:.9f}  mc={mc.estimate:.6f} +- {mc.std_error:.6f}")

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "measure_quadrature", "measure_monte_carlo", "mc_std_error"])
        w.writerows([[f"{v:.17g}" for v in r] for r in rows])

    if args.plot:
        import matplotlib.pyplot as plt

        arr = np.array(rows)
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(arr[:, 0], arr[:, 1], label="quadrature")
        ax.errorbar(arr[:, 0], arr[:, 2], yerr=3 * arr[:, 3], fmt=".", label="Monte Carlo (3 s.e.)")
        ax.set_xlabel("n")
        ax.set_ylabel("non-Markovian measure")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.out.with_suffix(".png"), dpi=150)


if __name__ == "__main__":
    main()
