"""Seeded k-means with k-means++ initialization and empty-cluster repair.

Randomness comes from numpy's PCG64 generator; each restart r draws from a
generator seeded with derive_seed(cfg.seed, "kmeans-restart", r), so restarts
are independent and the whole run is reproducible for a fixed numpy version.
Assignment ties break to the lowest center index; an emptied cluster is
reseeded with the point farthest from its assigned center.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .seeding import check_seed, derive_seed


@dataclass(frozen=True)
class KMeansConfig:
    k: int = 2
    n_init: int = 10
    max_lloyd_iter: int = 300
    rel_tol: float = 1e-4
    seed: int = 42

    def validate(self) -> None:
        if self.k < 1:
            raise ConfigError(f"k must be at least 1, got {self.k}")
        if self.n_init < 1 or self.max_lloyd_iter < 1:
            raise ConfigError("n_init and max_lloyd_iter must be positive")
        if self.rel_tol < 0:
            raise ConfigError(f"rel_tol must be non-negative, got {self.rel_tol}")
        check_seed(self.seed)


@dataclass(frozen=True)
class ClusteringResult:
    assignments: np.ndarray          # (n,) int labels in [0, k)
    centroids: np.ndarray            # (k, P)
    inertia: float
    restarts_inertias: tuple[float, ...]
    lloyd_iters_of_best: int


def _sq_dist_to_centers(data: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """(n, k) squared Euclidean distances."""
    diff = data[:, None, :] - centers[None, :, :]
    return (diff * diff).sum(axis=2)


def _kmeanspp_init(data: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """First center uniform; each next sampled with weight = squared distance
    to the nearest chosen center (inverse-CDF draw). Zero total weight falls
    back to a uniform draw."""
    n = data.shape[0]
    idx = int(rng.integers(0, n))
    centers = [data[idx]]
    d2 = ((data - data[idx]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            r = rng.random() * total
            idx = int(min(np.searchsorted(np.cumsum(d2), r, side="right"), n - 1))
        else:
            idx = int(rng.integers(0, n))
        centers.append(data[idx])
        d2 = np.minimum(d2, ((data - data[idx]) ** 2).sum(axis=1))
    return np.array(centers)


def _assign_and_repair(
    data: np.ndarray, centers: np.ndarray
) -> tuple[np.ndarray, np.ndarray, float]:
    """Nearest-center assignment (ties to lowest index) with empty-cluster
    repair: the point farthest from its center becomes the empty cluster's
    new center. Returns (labels, centers, inertia)."""
    k = centers.shape[0]
    d2 = _sq_dist_to_centers(data, centers)
    labels = d2.argmin(axis=1)
    present = np.bincount(labels, minlength=k)
    if (present == 0).any():
        centers = centers.copy()
        for cid in np.flatnonzero(present == 0):
            point_d2 = d2[np.arange(len(labels)), labels]
            worst = int(point_d2.argmax())
            centers[cid] = data[worst]
            labels[worst] = cid
            d2[worst, cid] = 0.0
    inertia = float(((data - centers[labels]) ** 2).sum())
    return labels, centers, inertia


def _run_restart(
    data: np.ndarray, k: int, restart_seed: int, max_iter: int, rel_tol: float
) -> tuple[np.ndarray, np.ndarray, float, int, list[float]]:
    """One k-means++ + Lloyd run; returns labels, centers, inertia, iteration
    count, and the per-iteration inertia history (for contract checks)."""
    rng = np.random.default_rng(restart_seed)
    centers = _kmeanspp_init(data, k, rng)
    history: list[float] = []
    labels = None
    inertia = np.inf
    iters = 0
    for it in range(1, max_iter + 1):
        labels, centers, new_inertia = _assign_and_repair(data, centers)
        history.append(new_inertia)
        iters = it
        if np.isfinite(inertia):
            rel = (inertia - new_inertia) / inertia if inertia > 0 else 0.0
            if rel < rel_tol:
                inertia = new_inertia
                break
        inertia = new_inertia
        means = np.empty_like(centers)
        for cid in range(k):
            means[cid] = data[labels == cid].mean(axis=0)
        centers = means
    return labels, centers, inertia, iters, history


def kmeans(data: np.ndarray, cfg: KMeansConfig) -> ClusteringResult:
    """Best-of-n_init seeded k-means; ties between restarts break to the
    lowest restart index."""
    cfg.validate()
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise ConfigError(f"data must be 2-dimensional, got shape {data.shape}")
    if not np.isfinite(data).all():
        raise ConfigError("data contains non-finite values")
    n = data.shape[0]
    if cfg.k > n:
        raise ConfigError(f"k={cfg.k} exceeds number of points n={n}")

    best = None
    inertias = []
    for r in range(cfg.n_init):
        seed_r = derive_seed(cfg.seed, "kmeans-restart", r)
        labels, centers, inertia, iters, _ = _run_restart(
            data, cfg.k, seed_r, cfg.max_lloyd_iter, cfg.rel_tol
        )
        inertias.append(inertia)
        if best is None or inertia < best[2]:
            best = (labels, centers, inertia, iters)
    labels, centers, inertia, iters = best
    return ClusteringResult(
        assignments=labels,
        centroids=centers,
        inertia=inertia,
        restarts_inertias=tuple(inertias),
        lloyd_iters_of_best=iters,
    )
