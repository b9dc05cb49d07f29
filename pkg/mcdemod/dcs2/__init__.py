from mcdemod.dcs2.data import (
    BASELINE_MODEL_ERROR,
    CM_MODEL_ERROR,
    MSN2_AMPLITUDES,
    Msn2Profile,
    TimeSeries,
    cm_profiles,
    ingest_timeseries,
    pulse_train,
    sample_times,
)
from mcdemod.dcs2.fit import (
    Dataset,
    DCS2FitConfig,
    DCS2FitResult,
    ProportionalityResult,
    default_synthetic_profiles,
    fit_dcs2,
    max_myfp_proportionality,
    myfp_integral_identity,
    synthetic_datasets,
)
from mcdemod.dcs2.model import (
    REFERENCE_PARAMS,
    STATE_NAMES,
    SYNTHETIC_CONSTANTS,
    DCS2Params,
    DCS2Trajectory,
    FixedConstants,
    simulate_batch,
    simulate_dcs2,
)

__all__ = [
    "BASELINE_MODEL_ERROR",
    "CM_MODEL_ERROR",
    "DCS2FitConfig",
    "DCS2FitResult",
    "DCS2Params",
    "DCS2Trajectory",
    "Dataset",
    "FixedConstants",
    "MSN2_AMPLITUDES",
    "Msn2Profile",
    "ProportionalityResult",
    "REFERENCE_PARAMS",
    "STATE_NAMES",
    "SYNTHETIC_CONSTANTS",
    "TimeSeries",
    "cm_profiles",
    "default_synthetic_profiles",
    "fit_dcs2",
    "ingest_timeseries",
    "max_myfp_proportionality",
    "myfp_integral_identity",
    "pulse_train",
    "sample_times",
    "simulate_batch",
    "simulate_dcs2",
    "synthetic_datasets",
]
