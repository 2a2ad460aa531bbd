/**
 * Payload types mirroring the fairscope results-file schema and the
 * /api endpoints. The UI never recomputes statistics: everything rendered
 * comes verbatim from these fields.
 */

export interface ModelPoint {
  id: string;
  trade_off_param: number | null;
  performance: number;
  fairness: number;
}

export interface PortfolioSummary {
  dataset: string;
  method: string;
  performance_metric: string;
  fairness_metric: string;
  feature_names: string[];
  n_models: number;
  n_features: number;
  models: ModelPoint[];
}

export interface ValidationRow {
  k: number;
  silhouette: number;
  calinski_harabasz: number;
  davies_bouldin: number;
  dunn: number;
  z_sil: number;
  z_ch: number;
  z_db: number;
  z_dunn: number;
  composite: number;
}

export interface ValidationTable {
  k_grid: number[];
  k_star: number;
  rows: ValidationRow[];
  flagged: { k: number; reason: string }[];
}

export interface MetricSummary {
  converged: boolean;
  sweeps_run: number;
  bound_u: number | null;
  bound_l: number | null;
  constraint_satisfaction_before: number | null;
  constraint_satisfaction_after: number | null;
  frobenius_dist_to_identity: number;
  offdiag_ratio: number;
  eigenvalues: number[];
  matrix: number[][];
}

export interface ClusterProfile {
  cluster_id: number;
  n_points: number;
  total_variance: number;
  performance_mean: number;
  performance_sd: number;
  fairness_mean: number;
  fairness_sd: number;
  member_ids: string[];
}

export interface BoxStats {
  cluster_id: number;
  median: number;
  q1: number;
  q3: number;
  whisker_low: number;
  whisker_high: number;
  outliers: number[];
  mean: number;
}

export interface FeatureSummary {
  feature_name: string;
  overall_mean_abs: number;
  per_cluster: BoxStats[];
}

export interface HeatmapPayload {
  ordering: string;
  ordered_ids: string[];
  delta: number[][];
}

export interface RunPayload {
  run_id: string;
  schema_version: number;
  portfolio_fingerprint: string;
  config: Record<string, unknown>;
  portfolio: PortfolioSummary;
  constraints: {
    n_similar: number;
    n_dissimilar: number;
    n_similar_candidates: number;
    n_dissimilar_candidates: number;
    excluded_zero_distance: number;
  } | null;
  metric: MetricSummary;
  validation: ValidationTable;
  chosen_k: number;
  k_source: 'composite' | 'override';
  clustering: {
    assignments: number[];
    inertia: number;
    restarts_inertias: number[];
    lloyd_iters_of_best: number;
  };
  clusters: ClusterProfile[];
  features: FeatureSummary[];
  heatmap: HeatmapPayload;
  stage_timings?: Record<string, number>;
}

/** Body for POST /api/run. */
export interface RunRequest {
  sim_threshold: number;
  dissim_threshold: number;
  k_min?: number;
  k_max?: number;
  k_override?: number | null;
  baseline_mode?: boolean;
  seed: number;
}

export interface RunCreated {
  run_id: string;
  chosen_k: number;
  k_star: number;
}
