"""Command-line front end: sweeps, boundary curves and classifications.

Each command writes a self-describing CSV or JSON table. Output depends only
on the parsed flags (``--out`` excluded), so reruns are byte-identical.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from .channel_core import DecoherenceProfile, MixWeights
from .divisibility import cp_divisibility_scan, cp_scan_array, p_divisibility_check, zeta_measure
from .generator import decay_rates
from .region import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    QuadratureError,
    RegionLabel,
    SimplexTransform,
    boundary_distance,
    boundary_polyline,
    classify,
    classify_array,
    monte_carlo_measure,
    region_measure_estimate,
    sample_simplex,
)

ZETA_AGREEMENT = 1e-10
NEAR_BOUNDARY = 1e-4
ORACLE_SAMPLES = 10**4
SCAN_GRID = 1000

_REGION_NAMES = {RegionLabel.NM_X: "R_x", RegionLabel.NM_Y: "R_y", RegionLabel.NM_Z: "R_z"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    n_min: float = 2.0
    n_max: float = 10.0
    n_step: float = 1.0
    method: str = "quadrature"
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    tolerance: float = DEFAULT_TOLERANCE
    output_format: str = "csv"
    output_path: Optional[str] = None

    def __post_init__(self) -> None:
        if not (2.0 <= self.n_min <= self.n_max):
            raise ConfigError(f"need 2 <= n_min <= n_max, got n_min={self.n_min}, n_max={self.n_max}")
        if not self.n_step > 0:
            raise ConfigError(f"n_step must be > 0, got {self.n_step}")
        if self.method not in ("quadrature", "monte_carlo", "both"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.method != "quadrature" and self.samples < 1000:
            raise ConfigError("samples must be >= 1000 for Monte Carlo")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be > 0")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.output_format!r}")

    def n_grid(self) -> list[float]:
        return n_grid(self.n_min, self.n_max, self.n_step)


def n_grid(n_min: float, n_max: float, n_step: float) -> list[float]:
    """Inclusive grid n_min, n_min + step, ... up to n_max."""
    count = int(math.floor((n_max - n_min) / n_step + 1e-9)) + 1
    return [n_min + i * n_step for i in range(count)]


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _show(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return f"{float(v):.10g}"


def _json_value(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def render_table(fmt: str, command: str, columns: Sequence[str], rows: Sequence[Sequence[Any]], meta: Optional[dict] = None) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# {command}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    doc = {
        "meta": {"command": command, "columns": list(columns), **{k: _json_value(v) for k, v in (meta or {}).items()}},
        "rows": [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def _emit(args, columns, rows, meta=None) -> None:
    text = render_table(args.format, canonical_command(args), columns, rows, meta)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def canonical_command(args: argparse.Namespace) -> str:
    parts = ["paulimix", args.command]
    for key in sorted(vars(args)):
        if key in ("command", "func", "out"):
            continue
        val = getattr(args, key)
        if val is None:
            continue
        if isinstance(val, list):
            val = " ".join(_fmt(v) for v in val)
        else:
            val = _fmt(val)
        parts.append(f"--{key.replace('_', '-')}={val}")
    return " ".join(parts)


def _grid_from_args(args) -> list[float]:
    if args.n:
        grid = list(args.n)
    else:
        if not args.n_step > 0:
            raise ConfigError("--n-step must be > 0")
        if not (2.0 <= args.n_min <= args.n_max):
            raise ConfigError(f"need 2 <= n-min <= n-max, got {args.n_min}, {args.n_max}")
        grid = n_grid(args.n_min, args.n_max, args.n_step)
    for n in grid:
        if not (math.isfinite(n) and n >= 2.0):
            raise ConfigError(f"n must be >= 2, got {n}")
    return grid


def cmd_measure_sweep(args) -> int:
    grid = _grid_from_args(args)
    n_lo, n_hi = min(grid), max(grid)
    cfg = SweepConfig(
        n_min=n_lo,
        n_max=n_hi,
        n_step=args.n_step,
        method=args.method,
        samples=args.samples,
        seed=args.seed,
        tolerance=args.tolerance,
        output_format=args.format,
        output_path=args.out,
    )
    rows = []
    status = 0
    for n in grid:
        quad = None
        if cfg.method in ("quadrature", "both"):
            try:
                quad = region_measure_estimate(n, cfg.tolerance)
            except QuadratureError as exc:
                print(f"error: n={n}: {exc}", file=sys.stderr)
                return 2
            rows.append((n, quad[0], "quadrature", quad[1]))
        if cfg.method in ("monte_carlo", "both"):
            mc = monte_carlo_measure(n, cfg.samples, cfg.seed)
            rows.append((n, mc.estimate, "monte_carlo", mc.std_error))
            if quad is not None and abs(mc.estimate - quad[0]) > 3.0 * mc.std_error:
                print(f"error: n={n}: Monte Carlo {mc.estimate} disagrees with quadrature {quad[0]}", file=sys.stderr)
                status = 3
    _emit(args, ("n", "measure", "method", "error"), rows)
    return status


def cmd_boundary(args) -> int:
    grid = args.n or [2.0]
    for n in grid:
        if not n >= 2.0:
            raise ConfigError(f"n must be >= 2, got {n}")
    if args.samples < 2:
        raise ConfigError("samples must be >= 2")
    tr = SimplexTransform.from_convention(args.convention)
    rows = []
    tri = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    for i, (xy, uv) in enumerate(zip(tri, tr.apply(tri))):
        rows.append(("", "simplex", "edge", i, xy[0], xy[1], uv[0], uv[1]))
    for n in grid:
        for label, bd in boundary_polyline(n, args.samples).items():
            for branch, xy in zip(("minus", "plus"), bd.branches_xy()):
                for i, (p, q) in enumerate(zip(xy, tr.apply(xy))):
                    rows.append((n, _REGION_NAMES[label], branch, i, p[0], p[1], q[0], q[1]))
    _emit(args, ("n", "region", "branch", "index", "x", "y", "u", "v"), rows, {"convention": args.convention})
    return 0


def cmd_zeta_sweep(args) -> int:
    grid = _grid_from_args(args)
    if not args.r > 0:
        raise ConfigError("r must be > 0")
    rows = []
    status = 0
    for n in grid:
        zc = zeta_measure(n, args.r, "closed_form").zeta
        zq = zeta_measure(n, args.r, "quadrature").zeta
        diff = abs(zc - zq)
        if diff > ZETA_AGREEMENT:
            print(f"error: n={n}: closed form and quadrature differ by {diff}", file=sys.stderr)
            status = 3
        rows.append((n, zc, zq, diff))
    _emit(args, ("n", "zeta_closed_form", "zeta_quadrature", "abs_difference"), rows, {"r": args.r})
    return status


def cmd_classify(args) -> int:
    if args.x < 0 or args.y < 0 or args.x + args.y > 1.0 + 1e-12:
        raise ConfigError("need x, y >= 0 and x + y <= 1")
    n = args.n[0] if args.n else 2.0
    w = MixWeights.from_xy(args.x, args.y)
    profile = DecoherenceProfile(n, args.r)
    label = classify(w, n)
    q = (1.0 / n) * (1.0 - 1e-6)
    dq = float(profile.dq_dt(profile.time_for_q(q)))
    rates = decay_rates(w, q, dq)
    report = cp_divisibility_scan(w, profile, args.grid_size)
    p_rates = p_divisibility_check(w, profile, args.grid_size)
    print(f"point: x={_show(w.x)} y={_show(w.y)} z={_show(w.z)} n={_show(n)} r={_show(args.r)}")
    print(f"region: {label.name}")
    print(f"rates at q={_show(q)}: gamma_x={_show(rates.gx)} gamma_y={_show(rates.gy)} gamma_z={_show(rates.gz)}")
    print(f"cp_divisible: {_show(report.cp_divisible)}")
    print(f"p_divisible: {_show(report.p_divisible and p_rates)}")
    fv = "none" if report.first_violation_q is None else _show(report.first_violation_q)
    print(f"first_violation_q: {fv}")
    print(f"min_choi_eigenvalue: {_show(report.min_choi_eigenvalue)}")
    consistent = (label is RegionLabel.MARKOVIAN) == report.cp_divisible
    print(f"consistent: {_show(consistent)}")
    return 0


def cmd_oracle_compare(args) -> int:
    grid = _grid_from_args(args)
    if args.samples < 1000:
        raise ConfigError("samples must be >= 1000")
    rows = []
    summary = {}
    status = 0
    for n in grid:
        rng = np.random.default_rng(args.seed)
        w = sample_simplex(args.samples, rng)
        labels = classify_array(w, n)
        min_choi, first, _ = cp_scan_array(w, DecoherenceProfile(n, args.r), args.grid_size)
        scan_nm = ~np.isnan(first)
        dist = boundary_distance(w, n)
        near = dist <= NEAR_BOUNDARY
        disagree = (labels != 0) != scan_nm
        far = ~near
        rate = 1.0 - np.count_nonzero(disagree & far) / max(1, np.count_nonzero(far))
        summary[_fmt(n)] = rate
        print(
            f"n={_fmt(n)}: agreement {rate:.6%} on {np.count_nonzero(far)} points farther than "
            f"{NEAR_BOUNDARY:g} from a boundary; {np.count_nonzero(disagree & near)} near-boundary disagreements"
        )
        if np.any(disagree & far):
            status = 3
        for i in np.flatnonzero(disagree):
            rows.append(
                (n, w[i, 0], w[i, 1], w[i, 2], RegionLabel(int(labels[i])).name, not scan_nm[i], min_choi[i], dist[i], bool(near[i]))
            )
    columns = ("n", "x", "y", "z", "label", "cp_divisible", "min_choi_eigenvalue", "boundary_distance", "near_boundary")
    _emit(args, columns, rows, {"agreement_rate": summary})
    return status


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default: csv)")
    p.add_argument("--out", default=None, help="output file (default: stdout)")


def _add_grid(p: argparse.ArgumentParser, n_step: float) -> None:
    p.add_argument("--n", type=float, nargs="+", default=None, help="explicit n values (overrides the grid)")
    p.add_argument("--n-min", type=float, default=2.0, help="grid start (default: 2)")
    p.add_argument("--n-max", type=float, default=10.0, help="grid end, inclusive (default: 10)")
    p.add_argument("--n-step", type=float, default=n_step, help=f"grid step (default: {n_step:g})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paulimix", description="Non-Markovianity of mixed Pauli channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure-sweep", help="non-Markovian measure of the Pauli simplex versus n")
    _add_grid(p, 1.0)
    p.add_argument("--method", choices=("quadrature", "monte_carlo", "both"), default="quadrature",
                   help="(default: quadrature)")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Monte Carlo samples (default: 1000000)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Monte Carlo seed (default: 42)")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE, help="quadrature absolute tolerance (default: 1e-9)")
    _add_common(p)
    p.set_defaults(func=cmd_measure_sweep)

    p = sub.add_parser("boundary", help="boundary curves of the non-Markovian regions")
    p.add_argument("--n", type=float, nargs="+", default=None, help="one or more n values (default: 2)")
    p.add_argument("--samples", type=int, default=200, help="samples per curve (default: 200)")
    p.add_argument("--convention", choices=("unit_side", "area_preserving"), default="unit_side",
                   help="equilateral transform scale (default: unit_side)")
    _add_common(p)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("zeta-sweep", help="semigroup-deviation measure zeta versus n")
    _add_grid(p, 0.5)
    p.add_argument("--r", type=float, default=1.0, help="rate constant (default: 1)")
    _add_common(p)
    p.set_defaults(func=cmd_zeta_sweep)

    p = sub.add_parser("classify", help="classify one mixture (x, y, 1 - x - y)")
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    p.add_argument("--n", type=float, nargs=1, default=None, help="deviation degree (default: 2)")
    p.add_argument("--r", type=float, default=1.0, help="rate constant (default: 1)")
    p.add_argument("--grid-size", type=int, default=SCAN_GRID, help="divisibility scan grid (default: 1000)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("oracle-compare", help="compare analytic classification with the CP-divisibility scan")
    _add_grid(p, 1.0)
    p.add_argument("--samples", type=int, default=ORACLE_SAMPLES, help="points per n (default: 10000)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="sampling seed (default: 42)")
    p.add_argument("--r", type=float, default=1.0, help="rate constant (default: 1)")
    p.add_argument("--grid-size", type=int, default=SCAN_GRID, help="divisibility scan grid (default: 1000)")
    _add_common(p)
    p.set_defaults(func=cmd_oracle_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
