"""Online transfer learning for multi-step thermal prediction.

The heavy lifting lives in the compiled extension; this package re-exports
it and adds a small numpy convenience for pulling datasets apart.
"""

from gotl._core import (
    ConfigError,
    CurvePoint,
    CurveStudyResult,
    Dataset,
    ExperimentConfig,
    ExperimentResult,
    GotlState,
    HouseConfig,
    IntervalLogRow,
    LinearModel,
    MetricsRow,
    NumericalError,
    SampleRecord,
    ScenarioSpec,
    closed_form_alpha,
    ewma,
    feature_dim,
    fit_source_model,
    interval_discount_weights,
    load_experiment_config,
    neighbor_set,
    read_dataset_csv,
    run_experiment,
    run_mpc_study,
    simulate_scenario,
    write_dataset_csv,
)

__all__ = [
    "ConfigError",
    "CurvePoint",
    "CurveStudyResult",
    "Dataset",
    "ExperimentConfig",
    "ExperimentResult",
    "GotlState",
    "HouseConfig",
    "IntervalLogRow",
    "LinearModel",
    "MetricsRow",
    "NumericalError",
    "SampleRecord",
    "ScenarioSpec",
    "closed_form_alpha",
    "dataset_arrays",
    "ewma",
    "feature_dim",
    "fit_source_model",
    "interval_discount_weights",
    "load_experiment_config",
    "neighbor_set",
    "read_dataset_csv",
    "run_experiment",
    "run_mpc_study",
    "simulate_scenario",
    "write_dataset_csv",
]


def dataset_arrays(data):
    """Split a Dataset into (time, outputs, inputs) numpy arrays."""
    import numpy as np

    time = np.array([r.time_index for r in data.records], dtype=np.int64)
    outputs = np.array([r.output for r in data.records])
    inputs = np.array([r.inputs for r in data.records])
    return time, outputs, inputs
