"""End-to-end orchestration and the canonical results artifact.

Stage order: normalize plane -> build constraints -> learn metric (identity
in baseline mode) -> transform -> per-k clustering and validity indices ->
composite table and k* (or override) -> final clustering -> profiles,
feature summaries, heatmap.

Every random draw derives from the master seed: the constraint subsample
uses derive_seed(seed, "constraints") and the k-means run for a given k uses
derive_seed(seed, "kmeans", k), so sub-config seeds are ignored inside a
pipeline run. Results serialize to JSON with shortest round-trip decimals;
stage timings are the only non-deterministic field and are omitted unless
explicitly requested.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field, replace

from .cluster import ClusteringResult, KMeansConfig, kmeans
from .constraints import ConstraintConfig, ConstraintSet, build_constraints
from .errors import (
    ConfigError,
    DegenerateClusteringError,
    FairscopeError,
    PipelineStageError,
    UndefinedIndexError,
)
from .metric import (
    ItmlConfig,
    LearnedMetric,
    identity_metric,
    learn_metric,
    metric_diagnostics,
    transform,
)
from .portfolio import PlaneBounds, Portfolio, normalize_plane
from .profiles import (
    ClusterProfile,
    FeatureSummary,
    HeatmapMatrix,
    distance_change_heatmap,
    feature_summaries,
    profile_clusters,
)
from .seeding import check_seed, derive_seed
from .validity import (
    INFINITY_SENTINEL,
    ValidationTable,
    calinski_harabasz,
    composite_table,
    davies_bouldin,
    dunn,
    silhouette,
)

logger = logging.getLogger(__name__)

RESULTS_SCHEMA_VERSION = 1
DEFAULT_K_GRID = tuple(range(3, 21))
DEFAULT_FEATURE_TOP_N = 8


@dataclass(frozen=True)
class PipelineConfig:
    constraint: ConstraintConfig = ConstraintConfig()
    itml: ItmlConfig = ItmlConfig()
    kmeans: KMeansConfig = KMeansConfig()
    k_grid: tuple[int, ...] = DEFAULT_K_GRID
    k_override: int | None = None
    baseline_mode: bool = False
    seed: int = 42
    plane_bounds: PlaneBounds | None = None


@dataclass(frozen=True)
class PipelineResult:
    portfolio_fingerprint: str
    config: PipelineConfig
    portfolio: Portfolio
    constraints: ConstraintSet | None
    metric: LearnedMetric
    validation: ValidationTable
    chosen_k: int
    k_source: str
    clustering: ClusteringResult
    profiles: tuple[ClusterProfile, ...]
    features: tuple[FeatureSummary, ...]
    heatmap: HeatmapMatrix
    stage_timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self, include_timings: bool = False) -> dict:
        """Results-file dict; see README for the schema."""
        out = {
            "schema_version": RESULTS_SCHEMA_VERSION,
            "portfolio_fingerprint": self.portfolio_fingerprint,
            "config": _config_dict(self.config),
            "portfolio": _portfolio_summary(self.portfolio),
            "constraints": _constraints_dict(self.constraints),
            "metric": _metric_dict(self.metric),
            "validation": _validation_dict(self.validation),
            "chosen_k": self.chosen_k,
            "k_source": self.k_source,
            "clustering": {
                "assignments": [int(v) for v in self.clustering.assignments],
                "inertia": float(self.clustering.inertia),
                "restarts_inertias": [float(v) for v in self.clustering.restarts_inertias],
                "lloyd_iters_of_best": self.clustering.lloyd_iters_of_best,
            },
            "clusters": [_profile_dict(c) for c in self.profiles],
            "features": [_feature_dict(f) for f in self.features],
            "heatmap": {
                "ordering": self.heatmap.ordering,
                "ordered_ids": list(self.heatmap.ordered_ids),
                "delta": [[float(v) for v in row] for row in self.heatmap.delta],
            },
        }
        if include_timings:
            out["stage_timings"] = dict(self.stage_timings)
        return out

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings=include_timings), indent=2) + "\n"


def _config_dict(cfg: PipelineConfig) -> dict:
    out = {
        "constraint": {
            "sim_threshold": cfg.constraint.sim_threshold,
            "dissim_threshold": cfg.constraint.dissim_threshold,
            "max_pairs_per_class": cfg.constraint.max_pairs_per_class,
        },
        "itml": {
            "gamma": cfg.itml.gamma,
            "max_iter": cfg.itml.max_iter,
            "convergence_tol": cfg.itml.convergence_tol,
            "bound_u": cfg.itml.bound_u,
            "bound_l": cfg.itml.bound_l,
            "prior": cfg.itml.prior,
        },
        "kmeans": {
            "n_init": cfg.kmeans.n_init,
            "max_lloyd_iter": cfg.kmeans.max_lloyd_iter,
            "rel_tol": cfg.kmeans.rel_tol,
        },
        "k_grid": list(cfg.k_grid),
        "k_override": cfg.k_override,
        "baseline_mode": cfg.baseline_mode,
        "seed": cfg.seed,
    }
    if cfg.plane_bounds is not None:
        out["plane_bounds"] = {
            "perf_min": cfg.plane_bounds.perf_min,
            "perf_max": cfg.plane_bounds.perf_max,
            "fair_min": cfg.plane_bounds.fair_min,
            "fair_max": cfg.plane_bounds.fair_max,
        }
    return out


def _portfolio_summary(p: Portfolio) -> dict:
    return {
        "dataset": p.dataset_name,
        "method": p.method_name,
        "performance_metric": p.performance_metric_name,
        "fairness_metric": p.fairness_metric_name,
        "feature_names": list(p.feature_names),
        "n_models": p.n_models,
        "n_features": p.n_features,
        "models": [
            {
                "id": m.id,
                "trade_off_param": m.trade_off_param,
                "performance": m.performance,
                "fairness": m.fairness,
            }
            for m in p.models
        ],
    }


def _constraints_dict(c: ConstraintSet | None) -> dict | None:
    if c is None:
        return None
    return {
        "n_similar": len(c.similar),
        "n_dissimilar": len(c.dissimilar),
        "n_similar_candidates": c.n_similar_candidates,
        "n_dissimilar_candidates": c.n_dissimilar_candidates,
        "excluded_zero_distance": c.excluded_zero_distance,
    }


def _metric_dict(m: LearnedMetric) -> dict:
    diag = metric_diagnostics(m)
    return {
        "converged": m.converged,
        "sweeps_run": m.sweeps_run,
        "bound_u": m.bound_u,
        "bound_l": m.bound_l,
        "constraint_satisfaction_before": m.constraint_satisfaction_before,
        "constraint_satisfaction_after": m.constraint_satisfaction_after,
        "frobenius_dist_to_identity": diag["frobenius_dist_to_identity"],
        "offdiag_ratio": diag["offdiag_ratio"],
        "eigenvalues": diag["eigenvalues"],
        "matrix": [[float(v) for v in row] for row in m.M],
    }


def _validation_dict(t: ValidationTable) -> dict:
    return {
        "k_grid": list(t.k_grid),
        "k_star": t.k_star,
        "rows": [
            {
                "k": r.k,
                "silhouette": r.silhouette,
                "calinski_harabasz": r.calinski_harabasz,
                "davies_bouldin": r.davies_bouldin,
                "dunn": r.dunn,
                "z_sil": r.z_sil,
                "z_ch": r.z_ch,
                "z_db": r.z_db,
                "z_dunn": r.z_dunn,
                "composite": r.composite,
            }
            for r in t.rows
        ],
        "flagged": [{"k": k, "reason": reason} for k, reason in t.flagged],
    }


def _profile_dict(c: ClusterProfile) -> dict:
    return {
        "cluster_id": c.cluster_id,
        "n_points": c.n_points,
        "total_variance": c.total_variance,
        "performance_mean": c.performance_mean,
        "performance_sd": c.performance_sd,
        "fairness_mean": c.fairness_mean,
        "fairness_sd": c.fairness_sd,
        "member_ids": list(c.member_ids),
    }


def _feature_dict(f: FeatureSummary) -> dict:
    return {
        "feature_name": f.feature_name,
        "overall_mean_abs": f.overall_mean_abs,
        "per_cluster": [
            {
                "cluster_id": b.cluster_id,
                "median": b.median,
                "q1": b.q1,
                "q3": b.q3,
                "whisker_low": b.whisker_low,
                "whisker_high": b.whisker_high,
                "outliers": list(b.outliers),
                "mean": b.mean,
            }
            for b in f.per_cluster
        ],
    }


def _feasible_grid(k_grid: tuple[int, ...], n: int) -> tuple[int, ...]:
    grid = tuple(sorted({k for k in k_grid if 2 <= k < n}))
    if not grid:
        raise ConfigError(
            f"no feasible k in grid {sorted(set(k_grid))} for a portfolio of {n} models"
        )
    return grid


class _Stage:
    """Context manager: times a stage and tags errors with its name."""

    def __init__(self, name: str, timings: dict[str, float]):
        self.name = name
        self.timings = timings

    def __enter__(self):
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.timings[self.name] = time.perf_counter() - self._start
        if exc is not None and isinstance(exc, FairscopeError):
            if not isinstance(exc, PipelineStageError):
                raise PipelineStageError(self.name, exc) from exc
        return False


def run(p: Portfolio, cfg: PipelineConfig) -> PipelineResult:
    """Execute the full exploration pipeline on a validated portfolio."""
    check_seed(cfg.seed)
    grid = _feasible_grid(cfg.k_grid, p.n_models)
    if cfg.k_override is not None and not (2 <= cfg.k_override < p.n_models):
        raise ConfigError(
            f"k_override {cfg.k_override} outside [2, {p.n_models})"
        )
    timings: dict[str, float] = {}

    with _Stage("normalize", timings):
        plane = normalize_plane(p, cfg.plane_bounds)

    with _Stage("constraints", timings):
        constraint_cfg = replace(
            cfg.constraint, seed=derive_seed(cfg.seed, "constraints")
        )
        constraints = build_constraints(p, constraint_cfg, plane=plane)

    with _Stage("metric", timings):
        if cfg.baseline_mode:
            metric = identity_metric(p.n_features)
        else:
            metric = learn_metric(p, constraints, cfg.itml)

    with _Stage("transform", timings):
        Z = transform(metric.L, p)

    with _Stage("validation", timings):
        rows = []
        flagged = []
        per_k_results: dict[int, ClusteringResult] = {}

        def cluster_at(k: int) -> ClusteringResult:
            kcfg = KMeansConfig(
                k=k,
                n_init=cfg.kmeans.n_init,
                max_lloyd_iter=cfg.kmeans.max_lloyd_iter,
                rel_tol=cfg.kmeans.rel_tol,
                seed=derive_seed(cfg.seed, "kmeans", k),
            )
            return kmeans(Z, kcfg)

        for k in grid:
            result = cluster_at(k)
            per_k_results[k] = result
            try:
                values = (
                    silhouette(Z, result.assignments),
                    calinski_harabasz(Z, result.assignments),
                    davies_bouldin(Z, result.assignments),
                    dunn(Z, result.assignments),
                )
            except (DegenerateClusteringError, UndefinedIndexError) as exc:
                flagged.append((k, str(exc)))
                continue
            if any(v >= INFINITY_SENTINEL for v in values):
                flagged.append((k, "degenerate partition: index hit the infinity sentinel"))
                continue
            rows.append((k, *values))
        table = composite_table(rows, k_grid=grid, flagged=tuple(flagged))

    with _Stage("final_clustering", timings):
        if cfg.k_override is not None:
            chosen_k, k_source = cfg.k_override, "override"
        else:
            chosen_k, k_source = table.k_star, "composite"
        final = per_k_results.get(chosen_k)
        if final is None:
            final = cluster_at(chosen_k)

    with _Stage("profiles", timings):
        profiles = tuple(profile_clusters(p, final.assignments))
        features = tuple(
            feature_summaries(
                p, final.assignments, top_n=min(DEFAULT_FEATURE_TOP_N, p.n_features)
            )
        )

    with _Stage("heatmap", timings):
        heatmap = distance_change_heatmap(p, metric)

    logger.info(
        "pipeline done: n=%d P=%d, k*=%d (chosen %d via %s)",
        p.n_models, p.n_features, table.k_star, chosen_k, k_source,
    )
    return PipelineResult(
        portfolio_fingerprint=p.fingerprint(),
        config=cfg,
        portfolio=p,
        constraints=constraints,
        metric=metric,
        validation=table,
        chosen_k=chosen_k,
        k_source=k_source,
        clustering=final,
        profiles=profiles,
        features=features,
        heatmap=heatmap,
        stage_timings=timings,
    )
