#!/usr/bin/env python
"""Squeezed Markovian triangles in the equilateral representation for several n."""
import argparse
import csv
from pathlib import Path

from paulimix.region import SimplexTransform, boundary_polyline


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=float, nargs="+", default=[2.0, 3.0, 5.0, 10.0])
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--convention", choices=("unit_side", "area_preserving"), default="unit_side")
    p.add_argument("--out", type=Path, default=Path("results/fig2_boundary.csv"))
    p.add_argument("--plot", action="store_true")
    args = p.parse_args()

    tr = SimplexTransform.from_convention(args.convention)
    curves = []
    for n in args.n:
        for label, bd in boundary_polyline(n, args.samples).items():
            closed = bd.closed_xy()
            curves.append((n, label.name, closed, tr.apply(closed)))

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "region", "x", "y", "u", "v"])
        for n, name, xy, uv in curves:
            for (x, y), (u, v) in zip(xy, uv):
                w.writerow([f"{n:.17g}", name, f"{x:.17g}", f"{y:.17g}", f"{u:.17g}", f"{v:.17g}"])
    print(f"wrote {args.out}")

    if args.plot:
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 4.5))
        tri = tr.apply([[0, 0], [1, 0], [0, 1], [0, 0]])
        ax.plot(tri[:, 0], tri[:, 1], color="tab:blue")
        colors = dict(zip(args.n, plt.cm.viridis_r([i / max(1, len(args.n) - 1) for i in range(len(args.n))])))
        for n, name, _, uv in curves:
            ax.plot(uv[:, 0], uv[:, 1], color=colors[n], label=f"n={n:g}" if name == "NM_Y" else None)
        ax.set_aspect("equal")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.out.with_suffix(".png"), dpi=150)


if __name__ == "__main__":
    main()
