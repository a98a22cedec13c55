"""Population dynamics driven by bounded mean-reverting noise.

Simulate logistic and competitive Lotka-Volterra models whose parameters are
perturbed by a seeded Ornstein-Uhlenbeck process, calibrate the mean
reversion so the perturbed parameter stays in a prescribed interval, verify
the resulting absorbing/attracting regions, estimate the growth rate online
with observers, and fit noise parameters from measured series.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .errors import (
    BlowUpError,
    CalibrationError,
    CoverageError,
    GridError,
    InconsistentBoundsError,
    NonMeanRevertingError,
    OupopError,
    ParameterError,
    PathRangeError,
    SeriesFormatError,
    SingularMeasurementError,
)
from .fit import FittedOU, fit_ou, format_fit_report, load_series_csv
from .models import (
    Box2D,
    LogisticKSpec,
    LogisticRSpec,
    LVSpec,
    PersistenceConditions,
    deterministic_coexistence,
    logistic_k_attracting_interval,
    lv_attracting_box,
    lv_persistence_conditions,
    rhs_logistic_k,
    rhs_logistic_r,
    rhs_lv,
    shift_envelope,
)
from .noise import (
    CalibrationResult,
    EnvelopeBounds,
    ErgodicReport,
    OUParams,
    SamplePath,
    calibrate_beta,
    default_grid,
    ergodic_diagnostics,
    evaluate_path,
    measured_envelope,
    sample_ou,
    sample_wiener,
    write_path_csv,
)
from .observe import (
    GUARD,
    HighGainConfig,
    LuenbergerConfig,
    ObserverRun,
    coordinate_drift,
    direct_estimator,
    highgain_run,
    innovation_trust,
    luenberger_run,
    lyapunov_V,
    lyapunov_gains,
    rate_from_coordinates,
    write_observer_csv,
)
from .solve import (
    AbsorptionReport,
    EnsembleResult,
    SeedRun,
    Trajectory,
    absorption_report,
    closed_form_logistic_k,
    closed_form_logistic_r,
    ensemble,
    integrate,
    rk4_stream,
    write_envelope_csv,
    write_trajectory_csv,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "__version__",
    # errors
    "OupopError", "ParameterError", "GridError", "PathRangeError",
    "CoverageError", "BlowUpError", "CalibrationError",
    "InconsistentBoundsError", "SingularMeasurementError",
    "NonMeanRevertingError", "SeriesFormatError",
    # noise
    "OUParams", "SamplePath", "EnvelopeBounds", "ErgodicReport",
    "CalibrationResult", "default_grid", "sample_wiener", "sample_ou",
    "evaluate_path", "measured_envelope", "calibrate_beta",
    "ergodic_diagnostics", "write_path_csv",
    # models
    "LogisticKSpec", "LogisticRSpec", "LVSpec", "Box2D",
    "PersistenceConditions", "rhs_logistic_k", "rhs_logistic_r", "rhs_lv",
    "deterministic_coexistence", "lv_persistence_conditions",
    "lv_attracting_box", "logistic_k_attracting_interval", "shift_envelope",
    # solve
    "Trajectory", "AbsorptionReport", "SeedRun", "EnsembleResult",
    "integrate", "closed_form_logistic_k", "closed_form_logistic_r",
    "ensemble", "absorption_report", "rk4_stream", "write_trajectory_csv",
    "write_envelope_csv",
    # observe
    "GUARD", "LuenbergerConfig", "HighGainConfig", "ObserverRun",
    "direct_estimator", "luenberger_run", "highgain_run", "lyapunov_V",
    "lyapunov_gains", "rate_from_coordinates", "coordinate_drift",
    "innovation_trust", "write_observer_csv",
    # fit
    "FittedOU", "fit_ou", "load_series_csv", "format_fit_report",
]
