"""scalemds: classical multidimensional scaling plus three partition-based
algorithms that keep MDS practical for very large data sets."""

from .algorithms import (
    AlgorithmParams,
    GowerContext,
    divide_and_conquer_mds,
    fast_mds,
    gower_context,
    gower_interpolate,
    interpolation_mds,
    run_algorithm,
)
from .classical import (
    GofBreakdown,
    MdsConfiguration,
    classical_mds,
    classical_mds_from_data,
    gof_breakdown,
    goodness_of_fit,
)
from .dataio import (
    IdxImageSet,
    RunManifest,
    pair_images_labels,
    read_csv_matrix,
    read_idx_images,
    read_idx_labels,
    read_manifest,
    write_configuration,
    write_csv_matrix,
    write_idx_images,
    write_idx_labels,
    write_manifest,
)
from .errors import (
    DegenerateRankError,
    FormatError,
    InvalidInputError,
    JoinError,
    MdsError,
    MetricError,
    NumericalError,
    ParamError,
    ShapeError,
    UsageError,
)
from .linalg import (
    EXACT_SIZE_GUARD,
    EigenSystem,
    cross_squared_distances,
    double_center,
    euclidean_distance_matrix,
    symmetric_eigen,
    symmetric_eigen_topk,
    thin_svd,
)
from .partition import (
    DcPlan,
    FastNode,
    FastPlan,
    FastStats,
    InterpPlan,
    fast_stats,
    plan_divide_conquer,
    plan_fast,
    plan_interpolation,
)
from .procrustes import (
    ProcrustesTransform,
    apply_procrustes,
    fit_procrustes,
    fit_procrustes_no_translation,
)
from .simulation import (
    ScenarioMetrics,
    ScenarioSpec,
    aligned_correlations,
    eigenvalue_error_stats,
    generate_scenario,
    gof_sweep,
    run_cell,
    run_study,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmParams",
    "DcPlan",
    "DegenerateRankError",
    "EXACT_SIZE_GUARD",
    "EigenSystem",
    "FastNode",
    "FastPlan",
    "FastStats",
    "FormatError",
    "GofBreakdown",
    "GowerContext",
    "IdxImageSet",
    "InterpPlan",
    "InvalidInputError",
    "JoinError",
    "MdsConfiguration",
    "MdsError",
    "MetricError",
    "NumericalError",
    "ParamError",
    "ProcrustesTransform",
    "RunManifest",
    "ScenarioMetrics",
    "ScenarioSpec",
    "ShapeError",
    "UsageError",
    "aligned_correlations",
    "apply_procrustes",
    "classical_mds",
    "classical_mds_from_data",
    "cross_squared_distances",
    "divide_and_conquer_mds",
    "double_center",
    "eigenvalue_error_stats",
    "euclidean_distance_matrix",
    "fast_mds",
    "fast_stats",
    "fit_procrustes",
    "fit_procrustes_no_translation",
    "generate_scenario",
    "gof_breakdown",
    "gof_sweep",
    "goodness_of_fit",
    "gower_context",
    "gower_interpolate",
    "interpolation_mds",
    "pair_images_labels",
    "plan_divide_conquer",
    "plan_fast",
    "plan_interpolation",
    "read_csv_matrix",
    "read_idx_images",
    "read_idx_labels",
    "read_manifest",
    "run_algorithm",
    "run_cell",
    "run_study",
    "symmetric_eigen",
    "symmetric_eigen_topk",
    "thin_svd",
    "write_configuration",
    "write_csv_matrix",
    "write_idx_images",
    "write_idx_labels",
    "write_manifest",
]
