"""Spectral latent class analysis for multi-layer polytomous categorical data.

Generate synthetic multi-layer response tensors from a latent class model,
estimate the classes and item parameters with spectral methods on three
aggregation matrices, pick the number of classes by averaged modularity,
and reproduce the simulation experiments with a seeded replication harness.
"""

from .aggregate import (
    AggregationBundle,
    ModularityIngredients,
    build_aggregates,
    build_modularity_ingredients,
)
from .estimators import (
    METHODS,
    EstimationError,
    FitDiagnostics,
    FitResult,
    SparsityReport,
    check_sparsity_regime,
    estimate_theta,
    fit,
    fit_baseline,
    fit_lca_dsog,
    fit_lca_sog,
    fit_lca_sor,
)
from .harness import (
    ExperimentConfig,
    ExperimentRecord,
    ExperimentResult,
    experiment_preset,
    read_results,
    run_experiment,
    summarize,
    write_results,
    write_summary,
)
from .kmeans import KMeansConfig, KMeansResult, kmeans
from .metrics import (
    MetricReport,
    accuracy_rate,
    ari,
    best_label_permutation,
    clustering_error,
    hamming_error,
    nmi,
    relative_l2_error,
    score,
)
from .model import (
    ItemParameterSet,
    ModelParams,
    Partition,
    PopulationResponse,
    ResponseTensor,
    population_response,
    response_layers,
    sample_item_params,
    sample_partition,
    sample_responses,
)
from .modularity import ModularityCurve, averaged_modularity, select_k
from .seeding import derive_seed, stream, substreams
from .spectral import (
    DegenerateSpectrumWarning,
    TruncatedEigen,
    TruncatedSVD,
    top_k_eigen_by_magnitude,
    top_k_svd,
)

__version__ = "0.1.0"

__all__ = [
    "AggregationBundle",
    "DegenerateSpectrumWarning",
    "EstimationError",
    "ExperimentConfig",
    "ExperimentRecord",
    "ExperimentResult",
    "FitDiagnostics",
    "FitResult",
    "ItemParameterSet",
    "KMeansConfig",
    "KMeansResult",
    "METHODS",
    "MetricReport",
    "ModelParams",
    "ModularityCurve",
    "ModularityIngredients",
    "Partition",
    "PopulationResponse",
    "ResponseTensor",
    "SparsityReport",
    "TruncatedEigen",
    "TruncatedSVD",
    "accuracy_rate",
    "ari",
    "averaged_modularity",
    "best_label_permutation",
    "build_aggregates",
    "build_modularity_ingredients",
    "check_sparsity_regime",
    "clustering_error",
    "derive_seed",
    "estimate_theta",
    "experiment_preset",
    "fit",
    "fit_baseline",
    "fit_lca_dsog",
    "fit_lca_sog",
    "fit_lca_sor",
    "hamming_error",
    "kmeans",
    "nmi",
    "population_response",
    "read_results",
    "relative_l2_error",
    "response_layers",
    "run_experiment",
    "sample_item_params",
    "sample_partition",
    "sample_responses",
    "score",
    "select_k",
    "stream",
    "substreams",
    "summarize",
    "top_k_eigen_by_magnitude",
    "top_k_svd",
    "write_results",
    "write_summary",
]
