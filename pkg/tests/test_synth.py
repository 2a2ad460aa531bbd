"""Synthetic portfolio generation with planted archetypes."""

from __future__ import annotations

import numpy as np
import pytest

from fairscope import (
    ConfigError,
    ConstraintConfig,
    InsufficientConstraintsError,
    ModelRecord,
    Portfolio,
    SynthConfig,
    build_constraints,
    generate,
    planted_labels,
)


def nuisance_portfolio(seed: int, n: int = 90, n_archetypes: int = 3,
                       n_signal: int = 3, n_nuisance: int = 5,
                       signal: float = 0.4, nuisance_sd: float = 1.0):
    """Archetypes that differ only on a low-variance signal block while
    high-variance nuisance features dominate raw Euclidean distances; raw
    clustering fails on it, metric-learned clustering should not."""
    rng = np.random.default_rng(seed)
    theta = np.linspace(0.0, 1.0, n)
    arch = np.minimum((theta * n_archetypes).astype(int), n_archetypes - 1)
    perf = 0.5 + 0.4 * (1.0 - theta)
    fair = theta
    imps = np.zeros((n, n_signal + n_nuisance))
    for i in range(n):
        imps[i, arch[i]] = signal + rng.normal(0, 0.02)
        imps[i, n_signal:] = rng.normal(0, nuisance_sd, n_nuisance)
    models = tuple(
        ModelRecord(
            id=f"m{i:03d}",
            trade_off_param=float(theta[i]),
            performance=float(perf[i]),
            fairness=float(fair[i]),
            importances=tuple(float(v) for v in imps[i]),
        )
        for i in range(n)
    )
    p = Portfolio(
        feature_names=tuple(f"f{j}" for j in range(n_signal + n_nuisance)),
        models=models,
    )
    return p, arch


class TestGenerate:
    def test_frontier_endpoints(self):
        p = generate(SynthConfig(n_models=11, n_features=3, n_archetypes=2, seed=1))
        assert p.models[0].performance == pytest.approx(0.9)
        assert p.models[0].fairness == pytest.approx(0.0)
        assert p.models[-1].performance == pytest.approx(0.5)
        assert p.models[-1].fairness == pytest.approx(1.0)

    def test_monotone_frontier(self):
        p = generate(SynthConfig(n_models=40, n_features=4, n_archetypes=3,
                                 exponent_a=2.0, exponent_b=0.5, seed=2))
        perf = [m.performance for m in p.models]
        fair = [m.fairness for m in p.models]
        assert all(a > b for a, b in zip(perf, perf[1:]))
        assert all(a < b for a, b in zip(fair, fair[1:]))

    def test_determinism(self):
        cfg = SynthConfig(n_models=25, n_features=5, n_archetypes=3, seed=9)
        assert generate(cfg) == generate(cfg)
        assert generate(cfg) != generate(SynthConfig(
            n_models=25, n_features=5, n_archetypes=3, seed=10))

    def test_planted_labels_are_valid_partition(self):
        p = generate(SynthConfig(n_models=50, n_features=6, n_archetypes=4, seed=3))
        labels = planted_labels(p)
        assert len(labels) == 50
        assert set(labels.tolist()) == {0, 1, 2, 3}
        # contiguous along the trade-off grid
        assert (np.diff(labels) >= 0).all()

    def test_archetype_zero_is_near_zero_profile(self):
        p = generate(SynthConfig(n_models=40, n_features=6, n_archetypes=4,
                                 noise_sd=0.0, seed=4))
        labels = planted_labels(p)
        X = p.importance_matrix()
        assert np.abs(X[labels == 0]).max() == 0.0
        assert np.abs(X[labels == 1]).max() > 0.5

    def test_disjoint_feature_blocks(self):
        p = generate(SynthConfig(n_models=40, n_features=6, n_archetypes=4,
                                 noise_sd=0.0, seed=5))
        labels = planted_labels(p)
        X = p.importance_matrix()
        supports = [set(np.flatnonzero(np.abs(X[labels == g]).max(axis=0)))
                    for g in range(1, 4)]
        for a in range(len(supports)):
            for b in range(a + 1, len(supports)):
                assert not supports[a] & supports[b]

    def test_degenerate_single_archetype_all_excluded(self):
        p = generate(SynthConfig(n_models=12, n_features=3, n_archetypes=1,
                                 noise_sd=0.0, seed=6))
        X = p.importance_matrix()
        assert np.ptp(X) == 0.0  # all importance vectors identical
        with pytest.raises(InsufficientConstraintsError):
            build_constraints(p, ConstraintConfig(seed=6))

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            SynthConfig(n_models=5, n_archetypes=6).validate()
        with pytest.raises(ConfigError):
            SynthConfig(noise_sd=-0.1).validate()
        with pytest.raises(ConfigError):
            SynthConfig(exponent_a=0.0).validate()


class TestNuisanceFixture:
    def test_planted_signal_is_low_variance(self):
        p, planted = nuisance_portfolio(seed=0)
        X = p.importance_matrix()
        signal_var = X[:, :3].var(axis=0).max()
        nuisance_var = X[:, 3:].var(axis=0).min()
        assert nuisance_var > 5 * signal_var
        assert set(planted.tolist()) == {0, 1, 2}
