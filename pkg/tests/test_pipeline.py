"""End-to-end pipeline orchestration, determinism, and the results artifact."""

from __future__ import annotations

import json

import numpy as np
import pytest

from fairscope import (
    ConfigError,
    ConstraintConfig,
    PipelineConfig,
    PipelineStageError,
    PlaneBounds,
    SynthConfig,
    generate,
    planted_labels,
    run,
)
from fairscope.constraints import _plane_candidates
from fairscope.portfolio import normalize_plane

SMALL_SYNTH = SynthConfig(n_models=60, n_features=6, n_archetypes=3, seed=11)
SMALL_CONFIG = PipelineConfig(k_grid=tuple(range(2, 9)), seed=5)


@pytest.fixture(scope="module")
def small_run():
    p = generate(SMALL_SYNTH)
    return p, run(p, SMALL_CONFIG)


class TestRun:
    def test_recovers_planted_k(self, small_run):
        p, result = small_run
        assert result.validation.k_star == 3
        assert result.chosen_k == 3
        from sklearn.metrics import adjusted_rand_score

        assert adjusted_rand_score(
            planted_labels(p), result.clustering.assignments
        ) >= 0.9

    def test_determinism_bit_identical_apart_from_timings(self, small_run):
        p, first = small_run
        second = run(p, SMALL_CONFIG)
        assert first.to_dict() == second.to_dict()
        assert first.to_json() == second.to_json()

    def test_internal_consistency(self, small_run):
        p, result = small_run
        assert len(result.clustering.assignments) == p.n_models
        assert set(result.clustering.assignments.tolist()) == set(
            range(result.chosen_k)
        )
        assert sum(c.n_points for c in result.profiles) == p.n_models
        member_ids = [mid for c in result.profiles for mid in c.member_ids]
        assert sorted(member_ids) == sorted(p.model_ids())
        assert result.portfolio_fingerprint == p.fingerprint()

    def test_results_dict_is_json_clean(self, small_run):
        _, result = small_run
        payload = json.loads(result.to_json(include_timings=True))
        assert payload["schema_version"] == 1
        assert "stage_timings" in payload
        bare = json.loads(result.to_json())
        assert "stage_timings" not in bare
        assert bare["validation"]["k_star"] == 3
        assert len(bare["heatmap"]["delta"]) == 60

    def test_baseline_mode_identity_metric(self):
        p = generate(SMALL_SYNTH)
        result = run(p, PipelineConfig(
            k_grid=tuple(range(2, 7)), seed=5, baseline_mode=True))
        metric = result.to_dict()["metric"]
        assert metric["frobenius_dist_to_identity"] == 0.0
        assert metric["offdiag_ratio"] == 0.0
        assert np.array_equal(result.heatmap.delta, np.zeros((60, 60)))
        assert metric["bound_u"] is None

    def test_k_override_bypasses_selection_only(self):
        p = generate(SMALL_SYNTH)
        result = run(p, PipelineConfig(
            k_grid=tuple(range(2, 7)), seed=5, k_override=4))
        assert result.chosen_k == 4
        assert result.k_source == "override"
        assert result.validation.k_star == 3  # still computed and reported
        assert set(result.clustering.assignments.tolist()) == {0, 1, 2, 3}

    def test_k_override_outside_grid_is_fine(self):
        # wider thresholds: 20 models space the trade-off grid too coarsely
        # for the default similarity radius
        p = generate(SynthConfig(n_models=20, n_features=4, n_archetypes=2, seed=2))
        cfg = PipelineConfig(
            constraint=ConstraintConfig(sim_threshold=0.15, dissim_threshold=0.4),
            k_grid=(3, 4, 5), seed=1, k_override=2,
        )
        result = run(p, cfg)
        assert result.chosen_k == 2

    def test_infeasible_grid_rejected(self):
        p = generate(SynthConfig(n_models=5, n_features=3, n_archetypes=2, seed=3))
        with pytest.raises(ConfigError):
            run(p, PipelineConfig(k_grid=(10, 12), seed=1))

    def test_grid_clipped_to_portfolio_size(self):
        p = generate(SynthConfig(n_models=8, n_features=3, n_archetypes=2, seed=4))
        cfg = PipelineConfig(
            constraint=ConstraintConfig(sim_threshold=0.25, dissim_threshold=0.5),
            k_grid=tuple(range(2, 30)), seed=1,
        )
        result = run(p, cfg)
        assert max(result.validation.k_grid) < 8

    def test_k_override_out_of_range(self):
        p = generate(SMALL_SYNTH)
        with pytest.raises(ConfigError):
            run(p, PipelineConfig(k_grid=(3, 4), seed=1, k_override=60))

    def test_stage_error_carries_stage_name(self):
        # identical importances: constraint stage must fail, tagged as such
        p = generate(SynthConfig(n_models=12, n_features=3, n_archetypes=1,
                                 noise_sd=0.0, seed=6))
        with pytest.raises(PipelineStageError) as err:
            run(p, PipelineConfig(k_grid=(2, 3), seed=1))
        assert err.value.stage == "constraints"

    def test_master_seed_controls_all_stages(self):
        p = generate(SMALL_SYNTH)
        a = run(p, PipelineConfig(k_grid=(2, 3, 4), seed=1))
        b = run(p, PipelineConfig(k_grid=(2, 3, 4), seed=2))
        # different master seeds change the subsample of the larger class
        assert (a.constraints.similar != b.constraints.similar
                or a.constraints.dissimilar != b.constraints.dissimilar)


class TestFixedPlaneBounds:
    def test_removing_uninvolved_model_preserves_labels(self):
        p = generate(SynthConfig(n_models=30, n_features=4, n_archetypes=2, seed=8))
        bounds = PlaneBounds(perf_min=0.0, perf_max=1.0, fair_min=0.0, fair_max=1.0)
        cfg = ConstraintConfig(seed=0)

        def candidate_labels(portfolio, skip_id=None):
            models = [m for m in portfolio.models if m.id != skip_id]
            from fairscope import Portfolio

            sub = Portfolio(feature_names=portfolio.feature_names, models=tuple(models))
            plane = normalize_plane(sub, bounds)
            sim, dis = _plane_candidates(plane, cfg)
            ids = sub.model_ids()
            sim_ids = {(ids[i], ids[j]) for i, j in sim}
            dis_ids = {(ids[i], ids[j]) for i, j in dis}
            return sim_ids, dis_ids

        full_sim, full_dis = candidate_labels(p)
        removed = p.models[13].id
        sub_sim, sub_dis = candidate_labels(p, skip_id=removed)
        expected_sim = {pair for pair in full_sim if removed not in pair}
        expected_dis = {pair for pair in full_dis if removed not in pair}
        assert sub_sim == expected_sim
        assert sub_dis == expected_dis
