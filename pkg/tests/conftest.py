"""Shared fixture builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from fairscope import ModelRecord, Portfolio


def make_portfolio(
    importances: np.ndarray,
    performances=None,
    fairnesses=None,
    trade_offs=None,
    feature_names=None,
    hyperparameters=None,
) -> Portfolio:
    """Assemble a portfolio from arrays, defaulting metrics to a spread grid."""
    importances = np.asarray(importances, dtype=float)
    n, n_features = importances.shape
    if performances is None:
        performances = np.linspace(0.9, 0.5, n)
    if fairnesses is None:
        fairnesses = np.linspace(0.1, 0.95, n)
    if feature_names is None:
        feature_names = [f"f{j}" for j in range(n_features)]
    models = tuple(
        ModelRecord(
            id=f"m{i}",
            trade_off_param=None if trade_offs is None else float(trade_offs[i]),
            performance=float(performances[i]),
            fairness=float(fairnesses[i]),
            importances=tuple(float(v) for v in importances[i]),
            hyperparameters=None if hyperparameters is None else hyperparameters[i],
        )
        for i in range(n)
    )
    return Portfolio(feature_names=tuple(feature_names), models=models)


def two_group_portfolio(seed: int, n: int = 20, n_features: int = 2,
                        separation: float = 1.0, noise: float = 0.8) -> Portfolio:
    """Two plane-separated groups whose importances differ only in coordinate 0;
    the other coordinates carry shared noise of comparable magnitude, so the
    initial constraints are genuinely violated and ITML has work to do."""
    rng = np.random.default_rng(seed)
    imps = np.zeros((n, n_features))
    perf = np.zeros(n)
    fair = np.zeros(n)
    for i in range(n):
        g = i % 2
        perf[i] = (0.88 if g == 0 else 0.22) + rng.uniform(0, 0.02)
        fair[i] = (0.10 if g == 0 else 0.80) + rng.uniform(0, 0.02)
        imps[i, 0] = separation * g + rng.normal(0, 0.05)
        imps[i, 1:] = rng.normal(0, noise, n_features - 1)
    return make_portfolio(imps, performances=perf, fairnesses=fair)


@pytest.fixture
def square_portfolio() -> Portfolio:
    """4 models, 2 features, distinct plane spots; handy for API-level tests."""
    return make_portfolio(np.array([[0.0, 1.0], [1.0, 0.0], [0.5, 0.5], [0.2, 0.9]]))
