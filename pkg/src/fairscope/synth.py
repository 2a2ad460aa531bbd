"""Synthetic portfolios with a planted fairness-performance frontier and
feature-importance archetypes.

Trade-off settings sit on a uniform grid in [0, 1]; performance decays and
fairness grows monotonically along it. Each model belongs to an archetype
(contiguous slice of the grid). Archetype 0 has a near-zero importance
profile; higher archetypes put their mass on disjoint feature blocks, so
portfolios carry well-separated attribution signatures to recover. The
planted label travels in each model's hyperparameters under
"planted_archetype".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .portfolio import ModelRecord, Portfolio
from .seeding import check_seed

PLANTED_KEY = "planted_archetype"
PERFORMANCE_CEILING = 0.9
PERFORMANCE_FLOOR = 0.5


@dataclass(frozen=True)
class SynthConfig:
    n_models: int = 200
    n_features: int = 12
    n_archetypes: int = 5
    noise_sd: float = 0.01
    exponent_a: float = 1.0
    exponent_b: float = 1.0
    seed: int = 7

    def validate(self) -> None:
        if self.n_models < 2:
            raise ConfigError(f"n_models must be at least 2, got {self.n_models}")
        if self.n_features < 1:
            raise ConfigError(f"n_features must be at least 1, got {self.n_features}")
        if not (1 <= self.n_archetypes <= self.n_models):
            raise ConfigError(
                f"n_archetypes must be in [1, n_models], got {self.n_archetypes}"
            )
        if self.noise_sd < 0:
            raise ConfigError(f"noise_sd must be non-negative, got {self.noise_sd}")
        if self.exponent_a <= 0 or self.exponent_b <= 0:
            raise ConfigError("frontier exponents must be positive")
        check_seed(self.seed)


def _archetype_bases(cfg: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """(n_archetypes, n_features) base vectors: archetype 0 all zero, the rest
    with seeded magnitudes on disjoint feature blocks."""
    bases = np.zeros((cfg.n_archetypes, cfg.n_features))
    if cfg.n_archetypes > 1:
        blocks = np.array_split(np.arange(cfg.n_features), cfg.n_archetypes - 1)
        for g in range(1, cfg.n_archetypes):
            block = blocks[g - 1]
            bases[g, block] = rng.uniform(0.8, 1.2, size=len(block))
    return bases


def generate(cfg: SynthConfig) -> Portfolio:
    """Generate a deterministic synthetic portfolio for the given config."""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    theta = np.linspace(0.0, 1.0, cfg.n_models)
    performance = PERFORMANCE_FLOOR + (PERFORMANCE_CEILING - PERFORMANCE_FLOOR) * (
        1.0 - theta**cfg.exponent_a
    )
    fairness = theta**cfg.exponent_b
    archetype = np.minimum(
        (theta * cfg.n_archetypes).astype(int), cfg.n_archetypes - 1
    )
    bases = _archetype_bases(cfg, rng)
    noise = rng.normal(0.0, cfg.noise_sd, size=(cfg.n_models, cfg.n_features))
    importances = bases[archetype] + noise

    width = max(3, len(str(cfg.n_models - 1)))
    models = tuple(
        ModelRecord(
            id=f"m{i:0{width}d}",
            trade_off_param=float(theta[i]),
            performance=float(performance[i]),
            fairness=float(fairness[i]),
            importances=tuple(float(v) for v in importances[i]),
            hyperparameters={PLANTED_KEY: str(int(archetype[i]))},
        )
        for i in range(cfg.n_models)
    )
    return Portfolio(
        feature_names=tuple(f"feature_{j}" for j in range(cfg.n_features)),
        models=models,
        dataset_name="synthetic",
        method_name="synthetic-frontier",
        performance_metric_name="performance",
        fairness_metric_name="fairness",
    )


def planted_labels(p: Portfolio) -> np.ndarray:
    """Recover the planted archetype labels stored by generate()."""
    labels = []
    for m in p.models:
        if not m.hyperparameters or PLANTED_KEY not in m.hyperparameters:
            raise ConfigError(f"model '{m.id}' carries no planted archetype")
        labels.append(int(m.hyperparameters[PLANTED_KEY]))
    return np.array(labels)
