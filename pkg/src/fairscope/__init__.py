"""fairscope: explore fairness-performance model portfolios through a learned
Mahalanobis metric, archetype clustering, and composite-validated k selection."""

from .cluster import ClusteringResult, KMeansConfig, kmeans
from .constraints import ConstraintConfig, ConstraintSet, build_constraints
from .errors import (
    ConfigError,
    DegenerateClusteringError,
    FairscopeError,
    FormatError,
    InsufficientConstraintsError,
    NumericalError,
    PipelineStageError,
    UndefinedIndexError,
    ValidationError,
)
from .metric import (
    ItmlConfig,
    LearnedMetric,
    identity_metric,
    learn_metric,
    mahalanobis,
    metric_diagnostics,
    transform,
)
from .pipeline import PipelineConfig, PipelineResult, run
from .portfolio import (
    ModelRecord,
    PlaneBounds,
    Portfolio,
    load_portfolio,
    normalize_plane,
    save_portfolio,
)
from .profiles import (
    BoxStats,
    ClusterProfile,
    FeatureSummary,
    HeatmapMatrix,
    compare_fixed_k,
    distance_change_heatmap,
    feature_summaries,
    profile_clusters,
)
from .synth import SynthConfig, generate, planted_labels
from .validity import (
    INFINITY_SENTINEL,
    ValidationRow,
    ValidationTable,
    calinski_harabasz,
    composite_table,
    davies_bouldin,
    dunn,
    silhouette,
)

__version__ = "0.1.0"

__all__ = [
    "BoxStats",
    "ClusteringResult",
    "ClusterProfile",
    "ConfigError",
    "ConstraintConfig",
    "ConstraintSet",
    "DegenerateClusteringError",
    "FairscopeError",
    "FeatureSummary",
    "FormatError",
    "HeatmapMatrix",
    "INFINITY_SENTINEL",
    "InsufficientConstraintsError",
    "ItmlConfig",
    "KMeansConfig",
    "LearnedMetric",
    "ModelRecord",
    "NumericalError",
    "PipelineConfig",
    "PipelineResult",
    "PipelineStageError",
    "PlaneBounds",
    "Portfolio",
    "UndefinedIndexError",
    "ValidationError",
    "ValidationRow",
    "ValidationTable",
    "build_constraints",
    "calinski_harabasz",
    "compare_fixed_k",
    "composite_table",
    "davies_bouldin",
    "distance_change_heatmap",
    "dunn",
    "feature_summaries",
    "generate",
    "identity_metric",
    "kmeans",
    "learn_metric",
    "load_portfolio",
    "mahalanobis",
    "metric_diagnostics",
    "normalize_plane",
    "planted_labels",
    "profile_clusters",
    "run",
    "save_portfolio",
    "silhouette",
    "SynthConfig",
    "transform",
]
