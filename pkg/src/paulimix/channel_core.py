"""Pauli channels, their convex mixtures, and the decoherence family q(t).

Everything is done in the Bloch representation. A mixture
x*Phi_x + y*Phi_y + z*Phi_z of Pauli channels sharing the parameter q is
diagonal there, with contraction factors

    lambda_i = 1 - 2 q (1 - w_i),   w = (x, y, z),

so channel action, trace distance and Choi positivity all have exact real
closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

WEIGHT_SUM_TOL = 1e-9
BLOCH_TOL = 1e-12
EIGENVALUE_TOL = 1e-12


@dataclass(frozen=True)
class MixWeights:
    """Point (x, y, z) on the probability simplex.

    Inputs summing to within ``WEIGHT_SUM_TOL`` of one are renormalized;
    anything farther off is rejected.
    """

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        vals = (float(self.x), float(self.y), float(self.z))
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"mixing weights must be finite, got {vals}")
        if min(vals) < 0.0:
            raise ValueError(f"mixing weights must be nonnegative, got {vals}")
        total = sum(vals)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"mixing weights must sum to 1, got sum {total!r}")
        object.__setattr__(self, "x", vals[0] / total)
        object.__setattr__(self, "y", vals[1] / total)
        object.__setattr__(self, "z", vals[2] / total)

    @classmethod
    def from_xy(cls, x: float, y: float) -> "MixWeights":
        z = 1.0 - x - y
        # clip roundoff from 1 - x - y at the hypotenuse
        if -WEIGHT_SUM_TOL <= z < 0.0:
            z = 0.0
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def permuted(self, perm: tuple[int, int, int]) -> "MixWeights":
        """Return weights with components reordered as ``w[perm[i]]``."""
        w = self.as_array()
        return MixWeights(*w[list(perm)])


@dataclass(frozen=True)
class DecoherenceProfile:
    """The family q(t) = (1 - exp(-r t)) / n.

    ``n = 2`` is the semigroup member. ``q`` approaches ``1/n`` from below.
    """

    n: float
    r: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.n) and self.n >= 2.0):
            raise ValueError(f"n must be >= 2, got {self.n!r}")
        if not (math.isfinite(self.r) and self.r > 0.0):
            raise ValueError(f"r must be > 0, got {self.r!r}")

    @property
    def q_limit(self) -> float:
        return 1.0 / self.n

    def q(self, t):
        t = _check_times(t)
        return -np.expm1(-self.r * t) / self.n

    def dq_dt(self, t):
        t = _check_times(t)
        return (self.r / self.n) * np.exp(-self.r * t)

    def lambdas(self, weights, t):
        """Mixture eigenvalues 1 - 2 q(t) (1 - w) evaluated without going through q.

        Written as (n - 2c + 2c e^{-rt}) / n with c = 1 - w, which keeps full
        relative precision when q is close to 1/2.
        """
        t = _check_times(t)
        c = 1.0 - np.asarray(weights, dtype=float)
        decay = np.exp(-self.r * np.asarray(t, dtype=float))[..., None]
        return ((self.n - 2.0 * c) + 2.0 * c * decay) / self.n

    def time_for_q(self, q):
        """Inverse of ``q``: the time at which the profile reaches ``q``."""
        q = np.asarray(q, dtype=float)
        if np.any(q < 0.0) or np.any(q >= self.q_limit):
            raise ValueError("q must lie in [0, 1/n)")
        return -np.log1p(-self.n * q) / self.r


@dataclass(frozen=True)
class PowerProfile:
    """Reparametrized family q(t) = [1 - exp(-r t**m1)]**m2 / n.

    Shares the asymptote ``1/n`` with :class:`DecoherenceProfile`, which is
    the case ``m1 = m2 = 1``.
    """

    n: float
    r: float = 1.0
    m1: float = 1.0
    m2: float = 1.0

    def __post_init__(self) -> None:
        DecoherenceProfile(self.n, self.r)
        if self.m1 < 1.0 or self.m2 < 1.0:
            raise ValueError("exponents m1, m2 must be >= 1")

    @property
    def q_limit(self) -> float:
        return 1.0 / self.n

    def lambdas(self, weights, t):
        return mixture_lambdas(weights, self.q(t))

    def q(self, t):
        t = _check_times(t)
        return (-np.expm1(-self.r * t**self.m1)) ** self.m2 / self.n

    def dq_dt(self, t):
        t = _check_times(t)
        # 0.0**0 == 1 keeps the m == 1 cases finite at t = 0
        decay = np.exp(-self.r * t**self.m1)
        inner = -np.expm1(-self.r * t**self.m1)
        dinner = self.r * self.m1 * t ** (self.m1 - 1.0) * decay
        outer = self.m2 * inner ** (self.m2 - 1.0)
        return outer * dinner / self.n

    def time_for_q(self, q):
        q = np.asarray(q, dtype=float)
        if np.any(q < 0.0) or np.any(q >= self.q_limit):
            raise ValueError("q must lie in [0, 1/n)")
        inner = (self.n * q) ** (1.0 / self.m2)
        return (-np.log1p(-inner) / self.r) ** (1.0 / self.m1)


def _check_times(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or not np.all(np.isfinite(t)):
        raise ValueError("time must be finite and nonnegative")
    return t if t.ndim else float(t)


@dataclass(frozen=True)
class BlochState:
    """Qubit state as a Bloch vector inside the unit ball."""

    bx: float
    by: float
    bz: float

    def __post_init__(self) -> None:
        if self.norm() > 1.0 + BLOCH_TOL:
            raise ValueError(f"Bloch vector norm {self.norm()!r} exceeds 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.bx, self.by, self.bz])

    def norm(self) -> float:
        return math.sqrt(self.bx**2 + self.by**2 + self.bz**2)


@dataclass(frozen=True)
class ChannelEigenvalues:
    """Contraction factors of a Pauli-diagonal map on the Bloch components."""

    l1: float
    l2: float
    l3: float

    def __post_init__(self) -> None:
        for v in (self.l1, self.l2, self.l3):
            if not abs(v) <= 1.0 + EIGENVALUE_TOL:
                raise ValueError(f"eigenvalue {v!r} outside [-1, 1]")

    def as_array(self) -> np.ndarray:
        return np.array([self.l1, self.l2, self.l3])


def q_of_t(profile: DecoherenceProfile, t: float) -> float:
    """Decoherence parameter (1 - exp(-r t)) / n at time ``t``."""
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t!r}")
    return float(profile.q(t))


def _check_q(q: float) -> None:
    if not (0.0 <= q <= 0.5):
        raise ValueError(f"q must lie in [0, 1/2], got {q!r}")


def mixture_lambdas(weights, q):
    """Vectorized ``1 - 2 q (1 - w)``; ``weights`` has trailing axis 3."""
    weights = np.asarray(weights, dtype=float)
    q = np.asarray(q, dtype=float)[..., None]
    return 1.0 - 2.0 * q * (1.0 - weights)


def mixture_eigenvalues(w: MixWeights, q: float) -> ChannelEigenvalues:
    _check_q(q)
    return ChannelEigenvalues(*mixture_lambdas(w.as_array(), q))


def apply_channel(w: MixWeights, q: float, state: BlochState) -> BlochState:
    lam = mixture_eigenvalues(w, q).as_array()
    return BlochState(*(lam * state.as_array()))


def trace_distance(a: BlochState, b: BlochState) -> float:
    """Trace distance between qubit states: half the Bloch-vector distance."""
    return 0.5 * float(np.linalg.norm(a.as_array() - b.as_array()))


# sign patterns (s1, s2, s3) with an even number of minus signs
_CHOI_SIGNS = np.array(
    [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]
)


def choi_values(lams):
    """Vectorized Choi spectrum, trailing axis 3 -> trailing axis 4."""
    lams = np.asarray(lams, dtype=float)
    return (1.0 + lams @ _CHOI_SIGNS.T) / 4.0


def choi_spectrum(eigs: ChannelEigenvalues) -> np.ndarray:
    """Choi eigenvalues ``(1 +- l1 +- l2 +- l3)/4`` of a Pauli-diagonal map.

    Ordered as (+,+,+), (+,-,-), (-,+,-), (-,-,+). These are also the Pauli
    probabilities (p_I, p_x, p_y, p_z) of the map, so the map is completely
    positive iff all four are nonnegative.
    """
    return choi_values(eigs.as_array())
