"""Balanced similar/dissimilar pair constraints from the normalized plane.

Pairs closer than the similarity threshold in the normalized
fairness-performance plane become similar candidates, pairs farther than the
dissimilarity threshold become dissimilar candidates (strict inequalities;
the band in between is dropped). Candidates whose raw importance vectors
coincide are excluded, then the larger class is subsampled down to the
smaller one with a seeded uniform draw.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InsufficientConstraintsError
from .portfolio import Portfolio, normalize_plane
from .seeding import check_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstraintConfig:
    sim_threshold: float = 0.05
    dissim_threshold: float = 0.2
    seed: int = 0
    max_pairs_per_class: int | None = None

    def validate(self) -> None:
        if not (0.0 < self.sim_threshold < self.dissim_threshold):
            raise ConfigError(
                "thresholds must satisfy 0 < sim_threshold < dissim_threshold, "
                f"got {self.sim_threshold} / {self.dissim_threshold}"
            )
        check_seed(self.seed)
        if self.max_pairs_per_class is not None and self.max_pairs_per_class < 1:
            raise ConfigError("max_pairs_per_class must be at least 1")


@dataclass(frozen=True)
class ConstraintSet:
    """Balanced index-pair constraints; every pair has i < j."""

    similar: tuple[tuple[int, int], ...]
    dissimilar: tuple[tuple[int, int], ...]
    excluded_zero_distance: int
    config_used: ConstraintConfig
    n_similar_candidates: int = 0
    n_dissimilar_candidates: int = 0


def _plane_candidates(
    plane: np.ndarray, cfg: ConstraintConfig
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Label all i<j pairs by plane distance; middle band dropped."""
    n = plane.shape[0]
    similar, dissimilar = [], []
    for i in range(n):
        d = np.sqrt(((plane[i + 1:] - plane[i]) ** 2).sum(axis=1))
        for off, dist in enumerate(d):
            j = i + 1 + off
            if dist < cfg.sim_threshold:
                similar.append((i, j))
            elif dist > cfg.dissim_threshold:
                dissimilar.append((i, j))
    return similar, dissimilar


def _subsample(
    pairs: list[tuple[int, int]], size: int, rng: np.random.Generator
) -> list[tuple[int, int]]:
    """Seeded uniform draw without replacement, original order preserved."""
    if len(pairs) <= size:
        return pairs
    keep = rng.choice(len(pairs), size=size, replace=False)
    return [pairs[i] for i in sorted(keep)]


def build_constraints(
    p: Portfolio, cfg: ConstraintConfig, plane: np.ndarray | None = None
) -> ConstraintSet:
    """Derive a balanced ConstraintSet from the fairness-performance plane.

    ``plane`` may be precomputed (e.g. under fixed normalization bounds);
    otherwise it is derived from the portfolio. Raises
    InsufficientConstraintsError when either class is empty after filtering.
    """
    cfg.validate()
    if plane is None:
        plane = normalize_plane(p)
    X = p.importance_matrix()
    similar, dissimilar = _plane_candidates(plane, cfg)

    excluded = 0

    def keep_nonzero(pairs: list[tuple[int, int]]) -> list[tuple[int, int]]:
        nonlocal excluded
        kept = []
        for i, j in pairs:
            if np.array_equal(X[i], X[j]):
                excluded += 1
            else:
                kept.append((i, j))
        return kept

    similar = keep_nonzero(similar)
    dissimilar = keep_nonzero(dissimilar)
    n_sim_cand, n_dis_cand = len(similar), len(dissimilar)
    if not similar or not dissimilar:
        raise InsufficientConstraintsError(n_sim_cand, n_dis_cand)

    # Balance first (subsample the larger class), then apply the cap to both.
    # The similar class is always drawn before the dissimilar one.
    rng = np.random.default_rng(cfg.seed)
    target = min(len(similar), len(dissimilar))
    if cfg.max_pairs_per_class is not None:
        target = min(target, cfg.max_pairs_per_class)
    similar = _subsample(similar, target, rng)
    dissimilar = _subsample(dissimilar, target, rng)
    logger.debug(
        "constraints: %d similar / %d dissimilar candidates -> %d per class "
        "(%d zero-distance pairs excluded)",
        n_sim_cand, n_dis_cand, target, excluded,
    )
    return ConstraintSet(
        similar=tuple(similar),
        dissimilar=tuple(dissimilar),
        excluded_zero_distance=excluded,
        config_used=cfg,
        n_similar_candidates=n_sim_cand,
        n_dissimilar_candidates=n_dis_cand,
    )
