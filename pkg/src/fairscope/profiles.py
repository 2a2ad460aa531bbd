"""Cluster trade-off profiles, feature-attribution summaries, and
transformation diagnostics (distance-change heatmap, raw-vs-transformed
fixed-k comparison)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cluster import KMeansConfig, kmeans
from .errors import ConfigError
from .metric import LearnedMetric, transform
from .portfolio import Portfolio


@dataclass(frozen=True)
class ClusterProfile:
    cluster_id: int
    n_points: int
    total_variance: float
    performance_mean: float
    performance_sd: float
    fairness_mean: float
    fairness_sd: float
    member_ids: tuple[str, ...]


@dataclass(frozen=True)
class BoxStats:
    """Tukey boxplot statistics for one feature within one cluster."""

    cluster_id: int
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]
    mean: float


@dataclass(frozen=True)
class FeatureSummary:
    feature_name: str
    overall_mean_abs: float
    per_cluster: tuple[BoxStats, ...]


@dataclass(frozen=True)
class HeatmapMatrix:
    ordered_ids: tuple[str, ...]
    delta: np.ndarray  # (n, n): d_before - d_after
    ordering: str      # "trade_off_param" or "fairness"


def _sample_sd(values: np.ndarray) -> float:
    return float(values.std(ddof=1)) if len(values) > 1 else 0.0


def profile_clusters(p: Portfolio, labels) -> list[ClusterProfile]:
    """Per-cluster size, importance spread, and outcome means, by cluster id.

    Total variance sums the per-feature sample variances (ddof=1) of the
    cluster's importance vectors; singletons report 0.
    """
    labels = np.asarray(labels)
    if labels.shape[0] != p.n_models:
        raise ConfigError(
            f"labels length {labels.shape[0]} does not match portfolio size {p.n_models}"
        )
    X = p.importance_matrix()
    perf = np.array([m.performance for m in p.models])
    fair = np.array([m.fairness for m in p.models])
    ids = np.array(p.model_ids())
    profiles = []
    for value in np.unique(labels):
        own = np.flatnonzero(labels == value)
        total_var = float(X[own].var(axis=0, ddof=1).sum()) if len(own) > 1 else 0.0
        profiles.append(
            ClusterProfile(
                cluster_id=int(value),
                n_points=len(own),
                total_variance=total_var,
                performance_mean=float(perf[own].mean()),
                performance_sd=_sample_sd(perf[own]),
                fairness_mean=float(fair[own].mean()),
                fairness_sd=_sample_sd(fair[own]),
                member_ids=tuple(ids[own]),
            )
        )
    return profiles


def _box_stats(values: np.ndarray, cluster_id: int) -> BoxStats:
    values = np.sort(values)  # makes every stat invariant to model order
    q1, med, q3 = (float(np.percentile(values, q)) for q in (25, 50, 75))
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = values[(values >= lo_fence) & (values <= hi_fence)]
    outliers = values[(values < lo_fence) | (values > hi_fence)]
    return BoxStats(
        cluster_id=cluster_id,
        median=med,
        q1=q1,
        q3=q3,
        whisker_low=float(inside.min()),
        whisker_high=float(inside.max()),
        outliers=tuple(float(v) for v in np.sort(outliers)),
        mean=float(values.mean()),
    )


def feature_summaries(p: Portfolio, labels, top_n: int = 8) -> list[FeatureSummary]:
    """Boxplot statistics per cluster for the top features.

    Features are ranked by mean absolute importance over all models
    (descending, ties by declaration order); quartiles use linear
    interpolation and whiskers the Tukey 1.5*IQR rule.
    """
    labels = np.asarray(labels)
    if not (1 <= top_n <= p.n_features):
        raise ConfigError(f"top_n must be in [1, {p.n_features}], got {top_n}")
    X = p.importance_matrix()
    mean_abs = np.abs(X).mean(axis=0)
    ranked = np.argsort(-mean_abs, kind="stable")[:top_n]
    cluster_ids = [int(v) for v in np.unique(labels)]
    summaries = []
    for f in ranked:
        per_cluster = tuple(
            _box_stats(X[np.flatnonzero(labels == cid), f], cid) for cid in cluster_ids
        )
        summaries.append(
            FeatureSummary(
                feature_name=p.feature_names[f],
                overall_mean_abs=float(mean_abs[f]),
                per_cluster=per_cluster,
            )
        )
    return summaries


def heatmap_order(p: Portfolio) -> tuple[list[int], str]:
    """Model order for diagnostics: ascending trade-off parameter when every
    model has one, ascending fairness otherwise; ties by fairness then id."""
    if all(m.trade_off_param is not None for m in p.models):
        key = lambda i: (p.models[i].trade_off_param, p.models[i].fairness, p.models[i].id)
        ordering = "trade_off_param"
    else:
        key = lambda i: (p.models[i].fairness, p.models[i].id)
        ordering = "fairness"
    return sorted(range(p.n_models), key=key), ordering


def distance_change_heatmap(p: Portfolio, m: LearnedMetric) -> HeatmapMatrix:
    """delta[i][j] = Euclidean distance on raw importances minus the learned
    Mahalanobis distance, over models in heatmap_order."""
    order, ordering = heatmap_order(p)
    X = p.importance_matrix()[order]
    Z = X @ m.L.T

    def pairwise(rows: np.ndarray) -> np.ndarray:
        diff = rows[:, None, :] - rows[None, :, :]
        return np.sqrt((diff * diff).sum(axis=2))

    delta = pairwise(X) - pairwise(Z)
    delta = (delta + delta.T) / 2.0
    np.fill_diagonal(delta, 0.0)
    ids = p.model_ids()
    return HeatmapMatrix(
        ordered_ids=tuple(ids[i] for i in order),
        delta=delta,
        ordering=ordering,
    )


def compare_fixed_k(
    p: Portfolio, m: LearnedMetric, k: int, cfg: KMeansConfig
) -> dict:
    """Cluster raw and transformed importances with the same k-means config;
    returns both labelings and results for side-by-side plane plots."""
    base = KMeansConfig(
        k=k,
        n_init=cfg.n_init,
        max_lloyd_iter=cfg.max_lloyd_iter,
        rel_tol=cfg.rel_tol,
        seed=cfg.seed,
    )
    raw_result = kmeans(p.importance_matrix(), base)
    transformed_result = kmeans(transform(m.L, p), base)
    return {
        "raw_labels": raw_result.assignments,
        "transformed_labels": transformed_result.assignments,
        "raw_result": raw_result,
        "transformed_result": transformed_result,
    }
