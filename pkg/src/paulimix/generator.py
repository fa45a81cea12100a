"""Time-local decay rates of single Pauli channels and their mixtures.

The generator of a mixture has the form

    L(t) rho = sum_k gamma_k(t) (sigma_k rho sigma_k - rho)

and is represented only through the rate vector (gamma_x, gamma_y, gamma_z).
Each rate is a signed sum of one common term

    f(alpha) = (dq/2) (1 - alpha) / (1 - 2 (1 - alpha) q),

with gamma_x = -f(x) + f(y) + f(z) and cyclically. Rates are parametrized by
(q, dq); time enters only through a profile.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel_core import DecoherenceProfile, MixWeights

SINGULAR_TOL = 1e-14

# row k gives the signs of (f(x), f(y), f(z)) in gamma_k
_RATE_SIGNS = np.array(
    [
        [-1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0],
    ]
)


class SingularityError(ArithmeticError):
    """A rate denominator 1 - 2(1 - alpha) q vanished."""


@dataclass(frozen=True)
class RateVector:
    gx: float
    gy: float
    gz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.gx, self.gy, self.gz])

    def pair_sums(self) -> np.ndarray:
        """(gx + gy, gy + gz, gx + gz)."""
        return np.array([self.gx + self.gy, self.gy + self.gz, self.gx + self.gz])

    def negative_count(self) -> int:
        return int(np.sum(self.as_array() < 0.0))


def gamma_single(profile: DecoherenceProfile, t: float) -> float:
    """Rate r / ((n - 2) e^{r t} + 2) of a single Pauli channel.

    Constant ``r/2`` for the semigroup ``n = 2``.
    """
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t!r}")
    n, r = profile.n, profile.r
    if n == 2.0:
        return r / 2.0
    return float(r / ((n - 2.0) * np.exp(r * t) + 2.0))


def f_terms(alpha, q, dq, denom=None):
    """Vectorized common summand; raises if any denominator is <= 1e-14.

    ``denom`` may carry precomputed values of 1 - 2 (1 - alpha) q.
    """
    alpha = np.asarray(alpha, dtype=float)
    if denom is None:
        denom = 1.0 - 2.0 * (1.0 - alpha) * np.asarray(q, dtype=float)
    if np.any(denom <= SINGULAR_TOL):
        raise SingularityError(
            f"rate denominator {np.min(denom)!r} is singular (q too close to 1/2 on a simplex edge)"
        )
    return 0.5 * np.asarray(dq, dtype=float) * (1.0 - alpha) / denom


def f_term(alpha: float, q: float, dq: float) -> float:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    if q < 0.0:
        raise ValueError(f"q must be nonnegative, got {q!r}")
    return float(f_terms(alpha, q, dq))


def rates_array(weights, q, dq=1.0):
    """Vectorized decay rates.

    ``weights`` has trailing axis 3; ``q`` and ``dq`` broadcast against the
    leading axes. Returns an array of the broadcast shape with trailing
    axis (gx, gy, gz).
    """
    weights = np.asarray(weights, dtype=float)
    q = np.asarray(q, dtype=float)[..., None]
    dq = np.asarray(dq, dtype=float)[..., None]
    f = f_terms(weights, q, dq)
    return f @ _RATE_SIGNS.T


def decay_rates(w: MixWeights, q: float, dq: float = 1.0) -> RateVector:
    """Rates of the mixture ``w`` at parameter ``q`` with derivative ``dq``.

    ``dq = 1`` gives rates per unit of q, which is enough for sign queries.
    """
    if q < 0.0:
        raise ValueError(f"q must be nonnegative, got {q!r}")
    return RateVector(*rates_array(w.as_array(), q, dq))


def rate_trajectory(w: MixWeights, profile, t_grid) -> list[RateVector]:
    """Rates along ``t_grid`` using the profile's analytic dq/dt.

    ``profile`` is anything exposing ``q(t)`` and ``dq_dt(t)``; a
    ``lambdas(w, t)`` method, when present, supplies the denominators.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1:
        raise ValueError("t_grid must be one-dimensional")
    if np.any(np.diff(t) < 0.0):
        raise ValueError("t_grid must be sorted")
    alpha = w.as_array()
    dq = profile.dq_dt(t)[:, None]
    if hasattr(profile, "lambdas"):
        f = f_terms(alpha, None, dq, denom=profile.lambdas(alpha, t))
    else:
        f = f_terms(alpha, profile.q(t)[:, None], dq)
    return [RateVector(*row) for row in f @ _RATE_SIGNS.T]
