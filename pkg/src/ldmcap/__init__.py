"""Capacity probes for classifiers via labeling distributions over holdout sets."""

from .classifiers import (
    ClassifierSpec,
    fit,
    parse_spec,
    predict,
    predict_proba,
    with_defaults,
)
from .dataset import (
    HoldoutSplit,
    LabeledDataset,
    builtin_iris,
    load_csv,
    permute_labels,
    random_labels,
    split_train_holdout,
)
from .dirichlet import (
    FitReport,
    digamma,
    dirichlet_entropy,
    fit_dirichlet,
    fit_report_json,
    inverse_digamma,
    lgamma,
    sample_dirichlet,
)
from .errors import (
    CapacityLimitError,
    CsvParseError,
    FitNumericalError,
    InvalidDatasetError,
)
from .heatmap import HeatmapConfig, render_pgm
from .ldm import (
    LDMatrix,
    SimplexVector,
    build_ldm,
    index_to_labeling,
    labeling_to_index,
    ldm_column,
    simplex_vector,
    write_ldm_csv,
)
from .recorder import CapacityEstimate, chance_baseline, estimate_capacity, record_trial

__version__ = "0.1.0"

__all__ = [
    "CapacityEstimate",
    "CapacityLimitError",
    "ClassifierSpec",
    "CsvParseError",
    "FitNumericalError",
    "FitReport",
    "HeatmapConfig",
    "HoldoutSplit",
    "InvalidDatasetError",
    "LDMatrix",
    "LabeledDataset",
    "SimplexVector",
    "build_ldm",
    "builtin_iris",
    "chance_baseline",
    "digamma",
    "dirichlet_entropy",
    "estimate_capacity",
    "fit",
    "fit_dirichlet",
    "fit_report_json",
    "index_to_labeling",
    "inverse_digamma",
    "labeling_to_index",
    "ldm_column",
    "lgamma",
    "load_csv",
    "parse_spec",
    "permute_labels",
    "predict",
    "predict_proba",
    "random_labels",
    "record_trial",
    "render_pgm",
    "sample_dirichlet",
    "simplex_vector",
    "split_train_holdout",
    "with_defaults",
    "write_ldm_csv",
]
