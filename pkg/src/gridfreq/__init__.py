"""gridfreq: power-system frequency response and reserve sizing.

Simulates post-imbalance frequency dynamics of an aggregated thermal /
hydro / renewable system and sizes the minimum virtual inertia and
additional fast power required to satisfy ROCOF and nadir limits across a
scenario grid.
"""

from .dynamics import (
    FrequencyTrace,
    GenerationMix,
    HydroParams,
    PlantDynamics,
    Scenario,
    SimulationError,
    SystemConstants,
    ThermalParams,
    compute_h_eq,
    damping_pu,
    simulate,
)
from .metrics import (
    BLACKOUT_FLOOR_HZ,
    NADIR_BAND_HZ,
    ComplianceReport,
    FrequencyMetrics,
    RocofLimits,
    check_compliance,
    extract_metrics,
    rocof_window,
)
from .sizing import (
    DEFAULT_DP_INC,
    DEFAULT_H_RES_CAP,
    HResSizing,
    SizingInfeasibleError,
    SizingResult,
    h_eq_min,
    h_res_from_h_min,
    size_h_res,
    size_p_add,
    size_scenario,
    verify,
)
from .sweep import (
    GridSpec,
    RegressionFit,
    SweepRow,
    fit_regression,
    generate_grid,
    run_sweep,
    summarize,
)
from .config import ConfigError, RunConfig, load_config, save_config

__version__ = "0.1.0"

__all__ = [
    "FrequencyTrace", "GenerationMix", "HydroParams", "PlantDynamics",
    "Scenario", "SimulationError", "SystemConstants", "ThermalParams",
    "compute_h_eq", "damping_pu", "simulate",
    "BLACKOUT_FLOOR_HZ", "NADIR_BAND_HZ", "ComplianceReport",
    "FrequencyMetrics", "RocofLimits", "check_compliance", "extract_metrics",
    "rocof_window",
    "DEFAULT_DP_INC", "DEFAULT_H_RES_CAP", "HResSizing",
    "SizingInfeasibleError", "SizingResult", "h_eq_min", "h_res_from_h_min",
    "size_h_res", "size_p_add", "size_scenario", "verify",
    "GridSpec", "RegressionFit", "SweepRow", "fit_regression",
    "generate_grid", "run_sweep", "summarize",
    "ConfigError", "RunConfig", "load_config", "save_config",
    "__version__",
]
