"""Non-Markovianity of convex mixtures of Pauli channels."""
from .channel_core import (
    BlochState,
    ChannelEigenvalues,
    DecoherenceProfile,
    MixWeights,
    PowerProfile,
    apply_channel,
    choi_spectrum,
    mixture_eigenvalues,
    q_of_t,
    trace_distance,
)
from .divisibility import (
    DivisibilityReport,
    ZetaResult,
    blp_scan,
    cp_divisibility_scan,
    intermediate_eigenvalues,
    p_divisibility_check,
    zeta_measure,
)
from .generator import RateVector, SingularityError, decay_rates, f_term, gamma_single, rate_trajectory
from .region import (
    QuadratureError,
    RegionBoundary,
    RegionLabel,
    SimplexTransform,
    beta_plus,
    boundary_polyline,
    classify,
    g_of,
    monte_carlo_measure,
    region_measure,
    to_equilateral,
    x_bounds,
)

__version__ = "0.1.0"
