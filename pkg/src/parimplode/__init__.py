"""Non-autonomous compositions of perturbed parabolic maps.

Numerics for compositions f_N o ... o f_1 of Moebius maps
f_k(z) = rho_k z/(1 - z) + eps_k^2 near the parabolic model z/(1 - z):
coefficient recurrences, convergence-rate sweeps, seeded random ensembles,
and skew-product drivers, with CSV/SVG output through the ``parimplode``
command-line tool.
"""
from .convergence import (
    DecayFit,
    RatePoint,
    fit_decay,
    fit_loglog,
    run_point,
    run_sweep,
    write_rate_csv,
)
from .errors import (
    AllPointsSkippedError,
    DegenerateMapError,
    DegenerateNormalizationError,
    IdentityViolationError,
    InvalidSpecError,
    NonPositiveValueError,
    OracleMismatchError,
    ParimplodeError,
    PoleProximityError,
    RecurrenceOverflowError,
    ScheduleMismatchError,
    SweepError,
    UsageError,
)
from .mobius import (
    EvalRegion,
    MoebiusCoeffs,
    compose,
    compose_chain,
    evaluate,
    identity_distance,
    perturbed_parabolic_step,
    projective_coeff_error,
    projective_distance,
    rotation_step,
)
from .randomlab import (
    EnsembleSummary,
    FixedLambda,
    PropLambda,
    TrialRecord,
    azuma_tail_bound,
    exceedance_vs_bound,
    martingale_check,
    quantile_nearest_rank,
    run_ensemble,
    union_bound,
    write_summary_csv,
    write_trial_csv,
)
from .recurrences import (
    ChebyshevPoint,
    PerturbationSequences,
    QRSTriple,
    chebyshev_U,
    closed_form_T,
    closed_form_T_array,
    coefficients_from_qr,
    coefficients_rho_only,
    difference_formula,
    martingale_sum,
    r_from_qs,
    run_recurrences,
    wronskian_residual,
)
from .schedules import (
    CounterexampleC,
    Custom,
    QuadraticNonconvergent,
    Rademacher,
    RandomSchedule,
    TheoremA,
    TheoremB,
    UniformSymmetric,
    conjugacy_check,
    decode_spec,
    encode_spec,
    materialize,
    random_small_schedule,
    summation_diagnostic,
)
from .skew import (
    SkewOrbitResult,
    SkewSystem,
    base_orbit,
    build_example,
    induced_schedule,
    iterate_skew,
    write_skew_csv,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
