"""Divisibility oracles and the semigroup-deviation measure zeta.

These checks work from the dynamical map itself rather than from the
boundary curves, so they serve as independent confirmation of
``region.classify``:

* CP-divisibility: all intermediate maps between grid instants have a
  nonnegative Choi spectrum.
* P-divisibility: all pairwise rate sums stay nonnegative.
* BLP: trace distance between two evolving states never grows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channel_core import (
    BlochState,
    ChannelEigenvalues,
    DecoherenceProfile,
    MixWeights,
    choi_values,
    mixture_lambdas,
)
from .generator import SingularityError, gamma_single, rates_array
from .region import integrate

CHOI_TOL = 1e-12
RATE_TOL = 1e-12
BLP_TOL = 1e-9
# scan stops at q = (1 - END_FRACTION) / n
END_FRACTION = 1e-9
# grid points held in memory per vectorized block
_SCAN_CHUNK = 1 << 21


@dataclass(frozen=True)
class DivisibilityReport:
    cp_divisible: bool
    p_divisible: bool
    first_violation_q: Optional[float]
    min_choi_eigenvalue: float


@dataclass(frozen=True)
class ZetaResult:
    n: float
    zeta: float
    reference_rate: float


@dataclass(frozen=True)
class BLPResult:
    monotone: bool
    max_increase: float
    distances: np.ndarray


def _intermediate(lam1, lam2):
    if np.any(np.abs(lam1) <= 1e-300):
        raise SingularityError("intermediate map undefined: an eigenvalue vanished at the earlier time")
    return lam2 / lam1


def intermediate_eigenvalues(w: MixWeights, profile: DecoherenceProfile, t1: float, t2: float) -> ChannelEigenvalues:
    """Eigenvalues lambda_i(t2) / lambda_i(t1) of the map carrying t1 to t2."""
    if not 0.0 <= t1 <= t2:
        raise ValueError(f"need 0 <= t1 <= t2, got t1={t1!r}, t2={t2!r}")
    lam1 = mixture_lambdas(w.as_array(), profile.q(t1))
    lam2 = mixture_lambdas(w.as_array(), profile.q(t2))
    ratio = _intermediate(lam1, lam2)
    # roundoff can push a ratio a hair above 1
    return ChannelEigenvalues(*np.clip(ratio, -1.0, 1.0))


def scan_times(profile, grid_size: int) -> np.ndarray:
    """Uniform time grid from 0 to where q reaches (1 - 1e-9) / n.

    Uniform in t means geometrically refined in q near the asymptote, which
    is where violations close to a boundary curve first appear.
    """
    q_end = (1.0 - END_FRACTION) * profile.q_limit
    return np.linspace(0.0, float(profile.time_for_q(q_end)), grid_size)


def cp_scan_array(weights, profile, grid_size: int = 1000):
    """Vectorized CP/P scan over consecutive grid intervals.

    Returns ``(min_choi, first_violation_q, p_ok)`` arrays over the leading
    axes of ``weights``; ``first_violation_q`` is NaN where no violation
    was found.
    """
    if grid_size < 100:
        raise ValueError("grid_size must be >= 100")
    w = np.asarray(weights, dtype=float)
    flat = w.reshape(-1, 3)
    q = profile.q(scan_times(profile, grid_size))
    min_choi = np.empty(len(flat))
    first = np.empty(len(flat))
    p_ok = np.empty(len(flat), dtype=bool)
    step = max(1, _SCAN_CHUNK // grid_size)
    for lo in range(0, len(flat), step):
        sl = slice(lo, lo + step)
        lam = mixture_lambdas(flat[sl, None, :], q)  # (chunk, G, 3)
        ratio = _intermediate(lam[:, :-1, :], lam[:, 1:, :])
        per_step = choi_values(ratio).min(axis=-1)
        bad = per_step < -CHOI_TOL
        min_choi[sl] = per_step.min(axis=-1)
        first[sl] = np.where(bad.any(axis=-1), q[:-1][np.argmax(bad, axis=-1)], np.nan)
        p_ok[sl] = np.all(np.abs(ratio) <= 1.0 + CHOI_TOL, axis=(-2, -1))
    shape = w.shape[:-1]
    return min_choi.reshape(shape), first.reshape(shape), p_ok.reshape(shape)


def cp_divisibility_scan(w: MixWeights, profile: DecoherenceProfile, grid_size: int = 1000) -> DivisibilityReport:
    """Check CP-divisibility on consecutive intervals of the scan grid.

    ``first_violation_q`` is the start of the first interval whose
    intermediate map has a Choi eigenvalue below -1e-12.
    """
    min_choi, first, p_ok = cp_scan_array(w.as_array(), profile, grid_size)
    cp = bool(np.isnan(first))
    return DivisibilityReport(
        cp_divisible=cp,
        p_divisible=bool(p_ok),
        first_violation_q=None if cp else float(first),
        min_choi_eigenvalue=float(min_choi),
    )


def p_divisibility_check(w: MixWeights, profile: DecoherenceProfile, grid_size: int = 1000) -> bool:
    """True iff every pairwise rate sum is >= -1e-12 on the scan grid."""
    if grid_size < 100:
        raise ValueError("grid_size must be >= 100")
    t = scan_times(profile, grid_size)
    g = rates_array(w.as_array(), profile.q(t), profile.dq_dt(t))
    sums = np.stack([g[:, 0] + g[:, 1], g[:, 1] + g[:, 2], g[:, 0] + g[:, 2]], axis=-1)
    return bool(np.all(sums >= -RATE_TOL))


def blp_scan(
    w: MixWeights,
    profile: DecoherenceProfile,
    state_a: BlochState,
    state_b: BlochState,
    t_grid: Sequence[float],
    tolerance: float = BLP_TOL,
) -> BLPResult:
    """Trace distance of two evolving states along ``t_grid``."""
    t = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t) < 0.0):
        raise ValueError("t_grid must be sorted")
    # trace distance is half the contracted Bloch difference
    diff = state_a.as_array() - state_b.as_array()
    lam = mixture_lambdas(w.as_array(), profile.q(t))
    dist = 0.5 * np.linalg.norm(lam * diff, axis=-1)
    max_inc = float(np.max(np.diff(dist), initial=0.0))
    return BLPResult(monotone=max_inc <= tolerance, max_increase=max(max_inc, 0.0), distances=dist)


def zeta_closed_form(n: float, r: float = 1.0, horizon: float = 1.0) -> float:
    """(1/T) * integral_0^T |r/((n-2)e^{rt}+2) - r/2| dt in closed form.

    The antiderivative of r/((n-2)e^{rt}+2) is (rt - log((n-2)e^{rt}+2))/2,
    giving zeta = log(((n-2)e^{rT} + 2)/n) / (2T).
    """
    _check_zeta_args(n, r, horizon)
    # (n-2)e^{rT} + 2 over n, as 1 + (n-2)(e^{rT} - 1)/n
    return math.log1p((n - 2.0) * math.expm1(r * horizon) / n) / (2.0 * horizon)


def zeta_quadrature(n: float, r: float = 1.0, horizon: float = 1.0, tolerance: float = 1e-13) -> float:
    _check_zeta_args(n, r, horizon)
    prof = DecoherenceProfile(n, r)
    value, _ = integrate(lambda t: abs(gamma_single(prof, t) - 0.5 * r), 0.0, horizon, tolerance)
    return value / horizon


def _check_zeta_args(n: float, r: float, horizon: float) -> None:
    if not n >= 2.0:
        raise ValueError(f"n must be >= 2, got {n!r}")
    if not r > 0.0:
        raise ValueError(f"r must be > 0, got {r!r}")
    if not horizon > 0.0:
        raise ValueError(f"horizon must be > 0, got {horizon!r}")


def zeta_measure(n: float, r: float = 1.0, method: str = "closed_form", horizon: float = 1.0) -> ZetaResult:
    """Deviation of the single-channel rate from the semigroup rate r/2.

    ``method`` is ``"closed_form"`` or ``"quadrature"``. The default
    ``horizon = 1`` with ``r = 1`` is the anchored setting; other values
    time-average over [0, horizon].
    """
    if method == "closed_form":
        z = zeta_closed_form(n, r, horizon)
    elif method == "quadrature":
        z = zeta_quadrature(n, r, horizon)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ZetaResult(n=n, zeta=z, reference_rate=0.5 * r)
