"""Geometry of the (non-)Markovian partition of the Pauli simplex.

The rate gamma_y of a mixture (x, y, z) turns negative at some q < 1/n exactly
when y <= beta_plus(n) and x lies strictly between the boundary curves

    x_pm(y) = ( +- g(n, y) / (y + n - 1) - y + 1 ) / 2,
    g(n, y) = sqrt[ (1 - n + y)(n - 1 + y)(beta_plus - y)(beta_minus - y) ],
    beta_pm = +- sqrt(n^2 + 1) - n.

Regions for gamma_x and gamma_z follow by permuting coordinates. The three
regions never overlap, so the non-Markovian measure is three times that of
the gamma_y region.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _integrate
from scipy.spatial import cKDTree

from .channel_core import MixWeights

DEFAULT_TOLERANCE = 1e-9
DEFAULT_SAMPLES = 10**6
DEFAULT_SEED = 42
_BATCH = 1 << 18


class RegionLabel(enum.Enum):
    MARKOVIAN = 0
    NM_X = 1
    NM_Y = 2
    NM_Z = 3


# For each of NM_X, NM_Y, NM_Z: index of the coordinate playing y, and the
# two coordinates that must both exceed x_minus (b < x_plus iff the third
# weight exceeds x_minus, so the test is symmetric and free of cancellation).
_ROLES = ((0, (1, 2)), (1, (0, 2)), (2, (0, 1)))
_NM_LABELS = (RegionLabel.NM_X, RegionLabel.NM_Y, RegionLabel.NM_Z)


class QuadratureError(RuntimeError):
    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate {estimate!r}, error estimate {error!r})")
        self.estimate = estimate
        self.error = error


def _check_n(n: float) -> None:
    if not (math.isfinite(n) and n >= 2.0):
        raise ValueError(f"n must be >= 2, got {n!r}")


def beta_plus(n: float) -> float:
    """sqrt(n^2 + 1) - n, written to avoid cancellation at large n."""
    _check_n(n)
    return 1.0 / (math.hypot(n, 1.0) + n)


def beta_minus(n: float) -> float:
    _check_n(n)
    return -math.hypot(n, 1.0) - n


def _g_unchecked(n, y):
    bp = beta_plus(n)
    bm = beta_minus(n)
    y = np.asarray(y, dtype=float)
    radicand = (1.0 - n + y) * (n - 1.0 + y) * (bp - y) * (bm - y)
    return np.sqrt(np.maximum(radicand, 0.0))


def _check_y(n: float, y) -> None:
    bp = beta_plus(n)
    y = np.asarray(y, dtype=float)
    if np.any(y < 0.0) or np.any(y > bp * (1.0 + 1e-12)):
        raise ValueError(f"y must lie in [0, beta_plus(n)] = [0, {bp!r}]")


def g_of(n: float, y: float) -> float:
    _check_y(n, y)
    return float(_g_unchecked(n, y))


def _half_width(n, y):
    return 0.5 * _g_unchecked(n, y) / (np.asarray(y, dtype=float) + n - 1.0)


def _curves(n, y):
    """(x_minus, x_plus) without the cancellation in mid - half_width.

    x_minus = y (n^2 - 2n + 2 - 2y) / (2 (y + n - 1) (mid + h)) follows from
    (mid - h)(mid + h) = mid^2 - h^2; x_plus is its mirror about mid.
    """
    y = np.asarray(y, dtype=float)
    mid = 0.5 * (1.0 - y)
    h = _half_width(n, y)
    lo = y * (n * n - 2.0 * n + 2.0 - 2.0 * y) / (2.0 * (y + n - 1.0) * (mid + h))
    return lo, (1.0 - y) - lo


def x_bounds(n: float, y: float) -> tuple[float, float]:
    """Curves (x_minus, x_plus) bounding the gamma_y-negative region at ``y``."""
    _check_y(n, y)
    lo, hi = _curves(n, y)
    return float(lo), float(hi)


def nm_conditions(weights, n: float) -> np.ndarray:
    """Boolean array (..., 3): which of the R_x, R_y, R_z conditions hold."""
    _check_n(n)
    w = np.asarray(weights, dtype=float)
    bp = beta_plus(n)
    out = np.empty(w.shape, dtype=bool)
    for k, (s_idx, (i, j)) in enumerate(_ROLES):
        s = w[..., s_idx]
        lo, _ = _curves(n, np.clip(s, 0.0, bp))
        out[..., k] = (s <= bp) & (np.minimum(w[..., i], w[..., j]) > lo)
    return out


def classify_array(weights, n: float) -> np.ndarray:
    """Vectorized classification; returns ``RegionLabel`` values as ints.

    A point satisfying more than one condition would get the first label,
    which never happens for points on the simplex.
    """
    cond = nm_conditions(weights, n)
    any_nm = cond.any(axis=-1)
    return np.where(any_nm, np.argmax(cond, axis=-1) + 1, 0)


def classify(w: MixWeights, n: float) -> RegionLabel:
    cond = nm_conditions(w.as_array(), n)
    hits = [lab for lab, c in zip(_NM_LABELS, cond) if c]
    if len(hits) > 1:
        raise AssertionError(f"overlapping regions {hits} at {w}")
    return hits[0] if hits else RegionLabel.MARKOVIAN


def integrate(func, a: float, b: float, tolerance: float = DEFAULT_TOLERANCE) -> tuple[float, float]:
    """Adaptive Gauss-Kronrod quadrature to absolute ``tolerance``.

    Returns ``(value, error_estimate)``; raises :class:`QuadratureError` when
    the requested accuracy is not reached.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        value, err, info, *rest = _integrate.quad(
            func, a, b, epsabs=tolerance, epsrel=0.0, limit=500, full_output=True
        )
    if rest or err > tolerance:
        raise QuadratureError("quadrature did not converge", value, err)
    return value, err


def region_measure_estimate(n: float, tolerance: float = DEFAULT_TOLERANCE) -> tuple[float, float]:
    """Non-Markovian measure with its absolute quadrature error estimate.

    Integrates the width x_plus - x_minus over y = beta_plus * sin(theta)^2,
    which removes the square-root endpoint behaviour at y = beta_plus.
    """
    _check_n(n)
    bp = beta_plus(n)

    def integrand(theta):
        s, c = math.sin(theta), math.cos(theta)
        return 2.0 * float(_half_width(n, bp * s * s)) * 2.0 * bp * s * c

    # measure = 3 * 2 * integral
    value, err = integrate(integrand, 0.0, 0.5 * math.pi, tolerance / 6.0)
    return 6.0 * value, 6.0 * err


def region_measure(n: float, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """Fraction of the Pauli simplex occupied by non-Markovian mixtures."""
    return region_measure_estimate(n, tolerance)[0]


def sample_simplex(count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points on the 2-simplex via normalized exponentials."""
    e = rng.standard_exponential((count, 3))
    return e / e.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class MeasureEstimate:
    estimate: float
    std_error: float


def monte_carlo_measure(n: float, sample_count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> MeasureEstimate:
    """Non-Markovian fraction of uniformly sampled mixtures.

    Deterministic for a fixed seed; sampling is batched but drawn from a
    single generator so the result does not depend on the batch size.
    """
    _check_n(n)
    if sample_count < 1000:
        raise ValueError("sample_count must be >= 1000")
    rng = np.random.default_rng(seed)
    hits = 0
    remaining = sample_count
    while remaining:
        m = min(remaining, _BATCH)
        hits += int(np.count_nonzero(classify_array(sample_simplex(m, rng), n)))
        remaining -= m
    p = hits / sample_count
    return MeasureEstimate(p, math.sqrt(p * (1.0 - p) / sample_count))


@dataclass(frozen=True)
class SimplexTransform:
    """Linear map k * [[2, 1], [0, sqrt(3)]] from the (x, y) right triangle."""

    m11: float
    m12: float
    m21: float
    m22: float
    k: float

    @classmethod
    def with_scale(cls, k: float) -> "SimplexTransform":
        return cls(2.0 * k, k, 0.0, k * math.sqrt(3.0), k)

    @classmethod
    def area_preserving(cls) -> "SimplexTransform":
        return cls.with_scale((2.0 * math.sqrt(3.0)) ** -0.5)

    @classmethod
    def unit_side(cls) -> "SimplexTransform":
        """Scale sending the vertices to (0, 0), (1, 0), (1/2, sqrt(3)/2)."""
        return cls.with_scale(0.5)

    @classmethod
    def from_convention(cls, convention: str) -> "SimplexTransform":
        if convention == "unit_side":
            return cls.unit_side()
        if convention == "area_preserving":
            return cls.area_preserving()
        raise ValueError(f"unknown convention {convention!r}")

    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def determinant(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def apply(self, points) -> np.ndarray:
        """Map an array of (x, y) rows."""
        return np.asarray(points, dtype=float) @ self.matrix().T


def to_equilateral(transform: SimplexTransform, point: tuple[float, float]) -> tuple[float, float]:
    x, y = point
    if x < 0 or y < 0 or x + y > 1.0 + 1e-12:
        raise ValueError(f"point {point} is outside the right triangle")
    u, v = transform.apply([x, y])
    return float(u), float(v)


@dataclass(frozen=True)
class RegionBoundary:
    """Sampled curves of one region.

    ``samples`` rows are ``(s, b_minus, b_plus)`` where ``s`` is the value of
    the region's own coordinate (y for R_y) and ``b_pm`` the curve values of
    the tested coordinate (x for R_y).
    """

    n: float
    label: RegionLabel
    samples: np.ndarray

    def branches_xy(self) -> tuple[np.ndarray, np.ndarray]:
        """Minus and plus branches as (x, y) point arrays."""
        s, lo, hi = self.samples.T
        out = []
        for b in (lo, hi):
            if self.label is RegionLabel.NM_Y:
                xy = np.column_stack([b, s])
            elif self.label is RegionLabel.NM_X:
                xy = np.column_stack([s, b])
            else:
                xy = np.column_stack([b, 1.0 - s - b])
            out.append(xy)
        return out[0], out[1]

    def closed_xy(self) -> np.ndarray:
        """Minus branch out to the tip, then plus branch back."""
        lo, hi = self.branches_xy()
        return np.vstack([lo, hi[-2::-1]])


def _curve_samples(n: float, s: np.ndarray) -> np.ndarray:
    lo, hi = _curves(n, s)
    return np.column_stack([s, lo, hi])


def boundary_polyline(n: float, samples_per_curve: int) -> dict[RegionLabel, RegionBoundary]:
    """Boundary curves of R_x, R_y, R_z on a uniform grid over [0, beta_plus]."""
    _check_n(n)
    if samples_per_curve < 2:
        raise ValueError("samples_per_curve must be >= 2")
    s = np.linspace(0.0, beta_plus(n), samples_per_curve)
    rows = _curve_samples(n, s)
    return {lab: RegionBoundary(n, lab, rows) for lab in _NM_LABELS}


def boundary_distance(weights, n: float, resolution: int = 4000) -> np.ndarray:
    """Euclidean (x, y)-plane distance from each point to the nearest curve.

    Curves are resolved on y = beta_plus * sin(theta)^2 so the tips are
    sampled as densely as the flanks.
    """
    _check_n(n)
    theta = np.linspace(0.0, 0.5 * math.pi, resolution)
    s = beta_plus(n) * np.sin(theta) ** 2
    rows = _curve_samples(n, s)
    polys = [RegionBoundary(n, lab, rows).closed_xy() for lab in _NM_LABELS]

    # segments of all three closed curves
    starts = np.vstack([p[:-1] for p in polys])
    ends = np.vstack([p[1:] for p in polys])
    tree = cKDTree(0.5 * (starts + ends))

    pts = np.asarray(weights, dtype=float)[..., :2].reshape(-1, 2)
    k = min(8, len(starts))
    _, idx = tree.query(pts, k=k)
    a = starts[idx]
    d = ends[idx] - a
    rel = pts[:, None, :] - a
    t = np.clip(np.sum(rel * d, axis=-1) / np.maximum(np.sum(d * d, axis=-1), 1e-300), 0.0, 1.0)
    dist = np.linalg.norm(rel - t[..., None] * d, axis=-1).min(axis=-1)
    return dist.reshape(np.shape(weights)[:-1])
