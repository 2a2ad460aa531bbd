"""Cluster profiles, feature attribution summaries, and heatmap diagnostics."""

from __future__ import annotations

import numpy as np
import pytest

from fairscope import (
    ConstraintConfig,
    ItmlConfig,
    KMeansConfig,
    build_constraints,
    compare_fixed_k,
    distance_change_heatmap,
    feature_summaries,
    identity_metric,
    learn_metric,
    mahalanobis,
    profile_clusters,
)

from .conftest import make_portfolio, two_group_portfolio
from .test_metric import metric_with


class TestProfileClusters:
    def test_identical_models_zero_spread(self):
        p = make_portfolio(
            np.array([[0.3, 0.3], [0.3, 0.3], [9.0, 9.0]]),
            performances=[0.5, 0.5, 0.9],
            fairnesses=[0.4, 0.4, 0.1],
        )
        profiles = profile_clusters(p, [0, 0, 1])
        assert profiles[0].total_variance == 0.0
        assert profiles[0].performance_sd == 0.0
        assert profiles[0].fairness_sd == 0.0
        assert profiles[1].n_points == 1
        assert profiles[1].total_variance == 0.0

    def test_hand_variance(self):
        # sample variance of {0, 2} is 2; second feature contributes 0
        p = make_portfolio(np.array([[0.0, 0.0], [2.0, 0.0], [5.0, 5.0]]))
        profiles = profile_clusters(p, [0, 0, 1])
        assert profiles[0].total_variance == pytest.approx(2.0, abs=1e-12)

    def test_partition_and_order(self):
        rng = np.random.default_rng(4)
        p = make_portfolio(rng.normal(size=(9, 3)))
        labels = [2, 0, 1, 2, 0, 1, 2, 0, 1]
        profiles = profile_clusters(p, labels)
        assert [c.cluster_id for c in profiles] == [0, 1, 2]
        assert sum(c.n_points for c in profiles) == 9
        seen = [mid for c in profiles for mid in c.member_ids]
        assert sorted(seen) == sorted(p.model_ids())

    def test_outcome_means(self):
        p = make_portfolio(
            np.zeros((4, 1)),
            performances=[0.2, 0.4, 0.8, 0.8],
            fairnesses=[0.1, 0.3, 0.5, 0.7],
        )
        profiles = profile_clusters(p, [0, 0, 1, 1])
        assert profiles[0].performance_mean == pytest.approx(0.3)
        assert profiles[0].performance_sd == pytest.approx(np.std([0.2, 0.4], ddof=1))
        assert profiles[1].fairness_mean == pytest.approx(0.6)


class TestFeatureSummaries:
    def test_hand_quartiles(self):
        values = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        p = make_portfolio(values.reshape(-1, 1))
        (summary,) = feature_summaries(p, [0] * 5, top_n=1)
        box = summary.per_cluster[0]
        assert (box.median, box.q1, box.q3) == (3.0, 2.0, 4.0)
        assert (box.whisker_low, box.whisker_high) == (1.0, 5.0)
        assert box.outliers == ()
        assert box.mean == 3.0

    def test_outlier_detection(self):
        # q3 of {1,2,3,100} is 27.25 under linear interpolation, so the upper
        # fence is 65.5 and 100 lands outside it
        values = np.array([1.0, 2.0, 3.0, 100.0])
        p = make_portfolio(values.reshape(-1, 1))
        (summary,) = feature_summaries(p, [0] * 4, top_n=1)
        box = summary.per_cluster[0]
        assert box.q3 == pytest.approx(27.25)
        assert box.outliers == (100.0,)
        assert box.whisker_high == 3.0

    def test_all_zero_ties_follow_declaration_order(self):
        p = make_portfolio(np.zeros((3, 4)))
        summaries = feature_summaries(p, [0, 0, 1], top_n=4)
        assert [s.feature_name for s in summaries] == ["f0", "f1", "f2", "f3"]
        for s in summaries:
            for box in s.per_cluster:
                assert (box.median, box.q1, box.q3) == (0.0, 0.0, 0.0)
                assert box.outliers == ()

    def test_ranking_by_mean_absolute_importance(self):
        imps = np.array([[0.1, -5.0, 1.0], [0.2, 5.0, -1.0]])
        p = make_portfolio(imps)
        summaries = feature_summaries(p, [0, 1], top_n=3)
        assert [s.feature_name for s in summaries] == ["f1", "f2", "f0"]

    def test_within_cluster_reordering_invariance(self):
        rng = np.random.default_rng(9)
        imps = rng.normal(size=(8, 2))
        labels = [0, 1, 0, 1, 0, 1, 0, 1]
        p1 = make_portfolio(imps)
        perm = [2, 1, 0, 3, 6, 5, 4, 7]  # swaps within each cluster
        p2 = make_portfolio(imps[perm])
        s1 = feature_summaries(p1, labels, top_n=2)
        s2 = feature_summaries(p2, [labels[i] for i in perm], top_n=2)
        for a, b in zip(s1, s2):
            assert a.feature_name == b.feature_name
            assert a.per_cluster == b.per_cluster


class TestHeatmap:
    def test_identity_metric_zero_delta(self):
        p = make_portfolio(np.arange(8.0).reshape(4, 2))
        hm = distance_change_heatmap(p, identity_metric(2))
        assert np.array_equal(hm.delta, np.zeros((4, 4)))

    def test_four_identity_scaling_law(self):
        p = make_portfolio(np.arange(8.0).reshape(4, 2))
        hm = distance_change_heatmap(p, metric_with(4.0 * np.eye(2)))
        order = hm.ordered_ids
        X = {m.id: np.array(m.importances) for m in p.models}
        for i, a in enumerate(order):
            for j, b in enumerate(order):
                d_before = np.linalg.norm(X[a] - X[b])
                assert hm.delta[i, j] == pytest.approx(-d_before, abs=1e-9)

    def test_matches_direct_recomputation(self):
        p = two_group_portfolio(seed=21, n=12, n_features=3)
        cset = build_constraints(p, ConstraintConfig(seed=21))
        m = learn_metric(p, cset, ItmlConfig())
        hm = distance_change_heatmap(p, m)
        X = {mid: np.array(mod.importances) for mid, mod in zip(p.model_ids(), p.models)}
        n = len(hm.ordered_ids)
        for i in range(n):
            for j in range(n):
                a, b = hm.ordered_ids[i], hm.ordered_ids[j]
                expected = np.linalg.norm(X[a] - X[b]) - mahalanobis(m.M, X[a], X[b])
                assert hm.delta[i, j] == pytest.approx(expected, abs=1e-9)
        assert np.array_equal(hm.delta, hm.delta.T)
        assert np.array_equal(np.diag(hm.delta), np.zeros(n))

    def test_ordering_by_theta_and_fairness_fallback(self):
        imps = np.zeros((3, 1))
        with_theta = make_portfolio(imps, trade_offs=[0.9, 0.1, 0.5])
        hm = distance_change_heatmap(with_theta, identity_metric(1))
        assert hm.ordering == "trade_off_param"
        assert hm.ordered_ids == ("m1", "m2", "m0")
        without = make_portfolio(imps, fairnesses=[0.9, 0.1, 0.5])
        hm2 = distance_change_heatmap(without, identity_metric(1))
        assert hm2.ordering == "fairness"
        assert hm2.ordered_ids == ("m1", "m2", "m0")


class TestCompareFixedK:
    def test_identity_metric_identical_partitions(self):
        from sklearn.metrics import adjusted_rand_score

        p = two_group_portfolio(seed=33, n=10)
        out = compare_fixed_k(p, identity_metric(2), 2, KMeansConfig(seed=11))
        assert adjusted_rand_score(out["raw_labels"], out["transformed_labels"]) == 1.0

    def test_k_one_all_zero(self):
        p = make_portfolio(np.arange(6.0).reshape(3, 2))
        out = compare_fixed_k(p, identity_metric(2), 1, KMeansConfig(seed=1))
        assert out["raw_labels"].tolist() == [0, 0, 0]
        assert out["transformed_labels"].tolist() == [0, 0, 0]

    def test_metric_rescues_low_variance_signal(self):
        from sklearn.metrics import adjusted_rand_score

        from .test_synth import nuisance_portfolio

        p, planted = nuisance_portfolio(seed=5)
        cset = build_constraints(p, ConstraintConfig(seed=5))
        m = learn_metric(p, cset, ItmlConfig())
        out = compare_fixed_k(p, m, 3, KMeansConfig(seed=5))
        ari_raw = adjusted_rand_score(planted, out["raw_labels"])
        ari_tra = adjusted_rand_score(planted, out["transformed_labels"])
        assert ari_tra >= ari_raw
        assert ari_tra >= 0.9
