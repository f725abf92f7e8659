from .dataset import (
    BATCH_LABELS,
    STD_FLOOR,
    SpectraDataset,
    StandardizationParams,
    WavenumberAxis,
    concat_datasets,
    standardize_apply,
    standardize_fit,
    standardize_invert,
    trim_axis,
)
from .io import (
    ColumnSchema,
    DatasetLoadError,
    MissingResponseError,
    NonMonotonicAxisError,
    NonNumericCellError,
    RowWidthError,
    load_dataset,
    save_dataset,
)
from .scenarios import DEFAULT_FRACTIONS, ScenarioSpec, make_scenario, partition_sizes
from .synth import (
    BatchShift,
    GaussianPeak,
    InteractionTerm,
    SynthConfig,
    SynthResult,
    default_peaks,
    generate_synthetic,
    ground_truth_features,
)

__all__ = [
    "BATCH_LABELS",
    "STD_FLOOR",
    "SpectraDataset",
    "StandardizationParams",
    "WavenumberAxis",
    "concat_datasets",
    "standardize_apply",
    "standardize_fit",
    "standardize_invert",
    "trim_axis",
    "ColumnSchema",
    "DatasetLoadError",
    "MissingResponseError",
    "NonMonotonicAxisError",
    "NonNumericCellError",
    "RowWidthError",
    "load_dataset",
    "save_dataset",
    "DEFAULT_FRACTIONS",
    "ScenarioSpec",
    "make_scenario",
    "partition_sizes",
    "BatchShift",
    "GaussianPeak",
    "InteractionTerm",
    "SynthConfig",
    "SynthResult",
    "default_peaks",
    "generate_synthetic",
    "ground_truth_features",
]
