"""Penner matrix model with negative coupling constant, end to end.

Exact partition functions through the Barnes G function, large-n free-energy
expansions over the (t, l) phase space of Kuijlaars-McLaughlin coupling
sequences, complex saddle points as generalized-Laguerre zeros, and the
limiting eigenvalue supports with their Coulomb-gas electrostatics.
"""

from .asymptotics import (
    CouplingSequence,
    FreeEnergyBreakdown,
    KmLimitEstimate,
    PhasePoint,
    SequenceKind,
    TransitionDiagnostics,
    decompose_free_energy,
    euler_characteristic,
    km_limit_estimate,
    osc_contribution,
    per_contribution,
    planar_dfdt,
    planar_free_energy,
    positive_expansion_coefficient,
    topological_expansion_positive,
    transition_diagnostics,
)
from .barnes import (
    BERNOULLI,
    BernoulliTable,
    PrecisionContext,
    clausen2,
    clausen2_quadrature,
    log_abs_barnes_g_reflected,
    log_barnes_g,
    log_barnes_g_integer,
    log_barnes_g_product,
    log_barnes_g_stirling,
    stirling_first_dropped,
)
from .errors import (
    AsymptoticRegime,
    CoincidentPoints,
    CriticalT,
    Degenerate,
    DomainError,
    GBarnesZero,
    LevelNotClosed,
    NoConvergence,
    OriginSingular,
    PennerError,
    PoleOfLog,
    QuadratureFailure,
    SingularPhase,
    SinZero,
    TraceFailure,
    ZeroOfG,
)
from .laguerre import (
    LaguerreSpec,
    ZeroSet,
    laguerre_eval,
    laguerre_eval_sum,
    laguerre_zeros,
    saddle_points,
    saddle_residual,
)
from .partition import (
    FreeEnergyValue,
    PartitionValue,
    check_factorization,
    free_energy_exact,
    quadrature_oracle_eig,
    z0_contour_oracle,
    z0_holomorphic,
    z_negative,
    z_positive,
)
from .spectral import (
    CloudComparison,
    Regime,
    SupportDescription,
    cloud_vs_theory,
    coulomb_energy,
    density,
    effective_potential_gap,
    effective_potential_profile,
    endpoints,
    filling_fractions,
    re_phi,
    strong_loop,
    support_for,
    support_mass,
    szego_curve,
    weak_arc,
)

__version__ = "0.1.0"
