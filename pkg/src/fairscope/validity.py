"""Internal cluster-validity indices and the z-scored composite for k selection.

All four indices use plain Euclidean distance on the rows they are given
(the pipeline feeds them the clustering space). Degenerate partitions map to
INFINITY_SENTINEL, the largest finite double, which callers must exclude
from z-scoring and flag. The composite is the sum of the four population
z-scores across the k grid, with Davies-Bouldin negated so that higher is
better everywhere; k* is the argmax, ties to the smallest k.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateClusteringError, UndefinedIndexError

INFINITY_SENTINEL = float(np.finfo(np.float64).max)


def _split_clusters(data: np.ndarray, labels) -> list[np.ndarray]:
    labels = np.asarray(labels)
    if labels.shape[0] != data.shape[0]:
        raise ConfigError(
            f"labels length {labels.shape[0]} does not match data rows {data.shape[0]}"
        )
    return [np.flatnonzero(labels == value) for value in np.unique(labels)]


def _pairwise(data: np.ndarray) -> np.ndarray:
    diff = data[:, None, :] - data[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def silhouette(data: np.ndarray, labels) -> float:
    """Mean silhouette coefficient; singleton-cluster points score 0."""
    data = np.asarray(data, dtype=np.float64)
    members = _split_clusters(data, labels)
    if len(members) < 2:
        raise UndefinedIndexError("silhouette requires at least 2 clusters")
    dist = _pairwise(data)
    scores = np.zeros(data.shape[0])
    for ci, own in enumerate(members):
        if len(own) == 1:
            continue  # singleton convention: score stays 0
        for i in own:
            a = dist[i, own].sum() / (len(own) - 1)
            b = min(dist[i, other].mean() for cj, other in enumerate(members) if cj != ci)
            denom = max(a, b)
            scores[i] = (b - a) / denom if denom > 0 else 0.0
    return float(scores.mean())


def calinski_harabasz(data: np.ndarray, labels) -> float:
    """Between/within dispersion ratio; zero within-scatter yields the sentinel."""
    data = np.asarray(data, dtype=np.float64)
    members = _split_clusters(data, labels)
    n, k = data.shape[0], len(members)
    if not (2 <= k < n):
        raise UndefinedIndexError(f"Calinski-Harabasz requires 2 <= k < n, got k={k}, n={n}")
    mu = data.mean(axis=0)
    between = 0.0
    within = 0.0
    for own in members:
        mu_c = data[own].mean(axis=0)
        between += len(own) * float(((mu_c - mu) ** 2).sum())
        within += float(((data[own] - mu_c) ** 2).sum())
    if within == 0.0:
        return INFINITY_SENTINEL
    return (between / (k - 1)) / (within / (n - k))


def davies_bouldin(data: np.ndarray, labels) -> float:
    """Mean worst-case scatter-to-separation ratio over clusters."""
    data = np.asarray(data, dtype=np.float64)
    members = _split_clusters(data, labels)
    k = len(members)
    if k < 2:
        raise UndefinedIndexError(f"Davies-Bouldin requires at least 2 clusters, got k={k}")
    centroids = np.array([data[own].mean(axis=0) for own in members])
    scatter = np.array(
        [float(np.sqrt(((data[own] - centroids[ci]) ** 2).sum(axis=1)).mean())
         for ci, own in enumerate(members)]
    )
    total = 0.0
    for i in range(k):
        worst = 0.0
        for j in range(k):
            if j == i:
                continue
            sep = float(np.sqrt(((centroids[i] - centroids[j]) ** 2).sum()))
            if sep == 0.0:
                raise DegenerateClusteringError(
                    f"clusters {i} and {j} have coincident centroids"
                )
            worst = max(worst, (scatter[i] + scatter[j]) / sep)
        total += worst
    return total / k


def dunn(data: np.ndarray, labels) -> float:
    """Min single-linkage inter-cluster distance over max intra diameter;
    all-singleton partitions (zero diameter) yield the sentinel."""
    data = np.asarray(data, dtype=np.float64)
    members = _split_clusters(data, labels)
    k = len(members)
    if k < 2:
        raise UndefinedIndexError(f"Dunn requires at least 2 clusters, got k={k}")
    dist = _pairwise(data)
    min_inter = np.inf
    for i in range(k):
        for j in range(i + 1, k):
            min_inter = min(min_inter, dist[np.ix_(members[i], members[j])].min())
    max_diameter = 0.0
    for own in members:
        if len(own) > 1:
            max_diameter = max(max_diameter, dist[np.ix_(own, own)].max())
    if max_diameter == 0.0:
        return INFINITY_SENTINEL
    return float(min_inter / max_diameter)


@dataclass(frozen=True)
class ValidationRow:
    k: int
    silhouette: float
    calinski_harabasz: float
    davies_bouldin: float
    dunn: float
    z_sil: float
    z_ch: float
    z_db: float
    z_dunn: float
    composite: float


@dataclass(frozen=True)
class ValidationTable:
    rows: tuple[ValidationRow, ...]
    k_star: int
    k_grid: tuple[int, ...]
    flagged: tuple[tuple[int, str], ...] = field(default=())


def _zscores(values: np.ndarray) -> np.ndarray:
    """Population z-scores; a constant column maps to all zeros.

    The constant check compares values directly: a column of identical floats
    can still produce a tiny nonzero std through the mean round-off, which
    would turn "no signal" into +-1 z-scores.
    """
    if np.all(values == values[0]):
        return np.zeros_like(values)
    sigma = float(values.std())  # population convention: ddof=0
    if sigma == 0.0:
        return np.zeros_like(values)
    return (values - values.mean()) / sigma


def composite_table(
    per_k: list[tuple[int, float, float, float, float]],
    k_grid: tuple[int, ...] | None = None,
    flagged: tuple[tuple[int, str], ...] = (),
) -> ValidationTable:
    """Build the z-scored composite table and select k*.

    ``per_k`` rows are (k, silhouette, calinski_harabasz, davies_bouldin,
    dunn) and must all be finite; degenerate ks belong in ``flagged``, not
    here. Davies-Bouldin is negated before z-scoring. Ties for the best
    composite break to the smallest k.
    """
    if len(per_k) < 2:
        raise ConfigError(f"composite needs at least 2 k values, got {len(per_k)}")
    ks = [row[0] for row in per_k]
    if len(set(ks)) != len(ks):
        raise ConfigError("duplicate k values in composite input")
    order = np.argsort(ks)
    arr = np.array([per_k[i][1:] for i in order], dtype=np.float64)
    if not np.isfinite(arr).all():
        raise ConfigError("composite input contains non-finite values")
    ks_sorted = [ks[i] for i in order]

    z_sil = _zscores(arr[:, 0])
    z_ch = _zscores(arr[:, 1])
    z_db = _zscores(-arr[:, 2])  # inverted so higher is better
    z_dunn = _zscores(arr[:, 3])
    composite = z_sil + z_ch + z_db + z_dunn

    rows = tuple(
        ValidationRow(
            k=int(ks_sorted[i]),
            silhouette=float(arr[i, 0]),
            calinski_harabasz=float(arr[i, 1]),
            davies_bouldin=float(arr[i, 2]),
            dunn=float(arr[i, 3]),
            z_sil=float(z_sil[i]),
            z_ch=float(z_ch[i]),
            z_db=float(z_db[i]),
            z_dunn=float(z_dunn[i]),
            composite=float(composite[i]),
        )
        for i in range(len(ks_sorted))
    )
    best = rows[0]
    for row in rows[1:]:
        if row.composite > best.composite:
            best = row
    return ValidationTable(
        rows=rows,
        k_star=best.k,
        k_grid=tuple(k_grid) if k_grid is not None else tuple(ks_sorted),
        flagged=tuple(flagged),
    )
