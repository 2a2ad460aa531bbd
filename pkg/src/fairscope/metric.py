"""Mahalanobis metric learning via slack ITML, plus distance primitives.

The learner runs cyclic Bregman projections with per-constraint slack: one
sweep visits every stored constraint (similar pairs first, then dissimilar,
each in stored order) and applies a rank-one update to the metric matrix.
Margins default to the 5th / 95th percentiles of the raw-importance
Euclidean distances over the constrained pairs. Constraint satisfaction is
measured on the quadratic form (x_i - x_j)^T M (x_i - x_j), the quantity the
projections bound: similar pairs must stay at or below the upper margin,
dissimilar pairs at or above the lower one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .constraints import ConstraintSet
from .errors import ConfigError, NumericalError
from .portfolio import Portfolio

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ItmlConfig:
    gamma: float = 1.0
    max_iter: int = 600
    convergence_tol: float = 1e-3
    bound_u: float | None = None
    bound_l: float | None = None
    prior: str = "identity"

    def validate(self) -> None:
        if self.gamma <= 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        if self.max_iter < 0:
            raise ConfigError(f"max_iter must be non-negative, got {self.max_iter}")
        if self.convergence_tol <= 0:
            raise ConfigError(f"convergence_tol must be positive, got {self.convergence_tol}")
        if self.prior != "identity":
            raise ConfigError(f"only the identity prior is supported, got {self.prior!r}")
        if self.bound_u is not None and self.bound_l is not None:
            if not (0.0 < self.bound_u < self.bound_l):
                raise ConfigError(
                    f"bounds must satisfy 0 < bound_u < bound_l, "
                    f"got {self.bound_u} / {self.bound_l}"
                )


@dataclass(frozen=True)
class LearnedMetric:
    """PSD matrix M with transform factor L (M = L^T L) and run diagnostics."""

    M: np.ndarray
    L: np.ndarray
    sweeps_run: int
    converged: bool
    bound_u: float | None
    bound_l: float | None
    constraint_satisfaction_before: float | None
    constraint_satisfaction_after: float | None


def identity_metric(n_features: int) -> LearnedMetric:
    """The untrained metric (baseline mode)."""
    eye = np.eye(n_features)
    return LearnedMetric(
        M=eye,
        L=eye.copy(),
        sweeps_run=0,
        converged=True,
        bound_u=None,
        bound_l=None,
        constraint_satisfaction_before=None,
        constraint_satisfaction_after=None,
    )


def _factor_from_metric(M: np.ndarray) -> np.ndarray:
    """L with M = L^T L: Cholesky, falling back to a clipped eigensolve."""
    try:
        return np.linalg.cholesky(M).T
    except np.linalg.LinAlgError:
        logger.warning("Cholesky failed; using eigenvalue-clipped factorization")
        eigvals, eigvecs = np.linalg.eigh(M)
        eigvals = np.clip(eigvals, 1e-10, None)
        return np.sqrt(eigvals)[:, None] * eigvecs.T


def _quadratic_forms(diffs: np.ndarray, M: np.ndarray) -> np.ndarray:
    return np.einsum("ij,jk,ik->i", diffs, M, diffs)


def _satisfaction(
    diffs: np.ndarray, is_similar: np.ndarray, M: np.ndarray, u: float, l: float
) -> float:
    q = _quadratic_forms(diffs, M)
    satisfied = np.where(is_similar, q <= u, q >= l)
    return float(satisfied.sum()) / len(q)


def _project_constraint(
    M: np.ndarray,
    v: np.ndarray,
    lam: float,
    xi: float,
    delta: float,
    gamma: float,
) -> tuple[float, float]:
    """One Bregman projection with slack, applied to M in place.

    ``v`` is the pair difference, ``delta`` +1 for similar / -1 for
    dissimilar, ``xi`` the constraint's current margin. Returns the updated
    (lam, xi); a zero quadratic form is a no-op.
    """
    Mv = M @ v
    quad = float(v @ Mv)
    if quad == 0.0:
        return lam, xi
    alpha = min(lam, (delta / 2.0) * (1.0 / quad - gamma / xi))
    beta = delta * alpha / (1.0 - delta * alpha * quad)
    xi = gamma * xi / (gamma + delta * alpha * xi)
    lam -= alpha
    M += beta * np.outer(Mv, Mv)
    return lam, xi


def learn_metric(p: Portfolio, c: ConstraintSet, cfg: ItmlConfig) -> LearnedMetric:
    """Learn M from a balanced constraint set by cyclic Bregman projections.

    Stops when the relative change of the dual vector between sweeps drops
    below ``convergence_tol``, or after ``max_iter`` sweeps. The final M is
    symmetrized; L comes from its Cholesky factor.
    """
    cfg.validate()
    if not c.similar or not c.dissimilar:
        raise ConfigError("constraint set must contain both similar and dissimilar pairs")
    X = p.importance_matrix()
    pairs = list(c.similar) + list(c.dissimilar)
    is_similar = np.array([True] * len(c.similar) + [False] * len(c.dissimilar))
    diffs = np.array([X[i] - X[j] for i, j in pairs], dtype=np.float64)

    raw_dist = np.linalg.norm(diffs, axis=1)
    u = cfg.bound_u if cfg.bound_u is not None else float(np.percentile(raw_dist, 5.0))
    l = cfg.bound_l if cfg.bound_l is not None else float(np.percentile(raw_dist, 95.0))
    if not u < l:
        raise ConfigError(
            f"margin percentiles collapsed (u={u:.6g} >= l={l:.6g}); "
            "set bound_u and bound_l explicitly"
        )

    n_features = p.n_features
    n_constraints = len(pairs)
    gamma = cfg.gamma
    M = np.eye(n_features)
    lam = np.zeros(n_constraints)
    lam_old = np.zeros(n_constraints)
    xi = np.where(is_similar, u, l).astype(np.float64)
    delta = np.where(is_similar, 1.0, -1.0)

    before = _satisfaction(diffs, is_similar, np.eye(n_features), u, l)

    converged = False
    sweeps = 0
    for sweep in range(cfg.max_iter):
        for idx in range(n_constraints):
            lam[idx], xi[idx] = _project_constraint(
                M, diffs[idx], lam[idx], xi[idx], delta[idx], gamma
            )
        sweeps = sweep + 1
        if not (np.isfinite(M).all() and np.isfinite(lam).all() and np.isfinite(xi).all()):
            raise NumericalError(f"non-finite values during ITML sweep {sweep}")
        norm_sum = float(np.linalg.norm(lam) + np.linalg.norm(lam_old))
        if norm_sum == 0.0:
            converged = True  # no dual movement at all: already a fixed point
            break
        change = float(np.abs(lam - lam_old).sum()) / norm_sum
        if change < cfg.convergence_tol:
            converged = True
            break
        lam_old = lam.copy()

    M = (M + M.T) / 2.0
    after = _satisfaction(diffs, is_similar, M, u, l)
    logger.info(
        "ITML: %d sweeps (converged=%s), satisfaction %.3f -> %.3f",
        sweeps, converged, before, after,
    )
    return LearnedMetric(
        M=M,
        L=_factor_from_metric(M),
        sweeps_run=sweeps,
        converged=converged,
        bound_u=u,
        bound_l=l,
        constraint_satisfaction_before=before,
        constraint_satisfaction_after=after,
    )


def mahalanobis(M: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """sqrt((x-y)^T M (x-y)), with tiny negative quadratic forms clamped to 0."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or M.shape != (x.size, x.size):
        raise ConfigError(
            f"dimension mismatch: M is {M.shape}, vectors are {x.shape} / {y.shape}"
        )
    v = x - y
    quad = float(v @ M @ v)
    if quad < 0.0:
        if quad < -1e-12:
            raise NumericalError(f"quadratic form {quad} too negative; M is not PSD")
        quad = 0.0
    return float(np.sqrt(quad))


def transform(L: np.ndarray, p: Portfolio) -> np.ndarray:
    """Apply the metric factor to every importance vector: row m is L @ x_m."""
    X = p.importance_matrix()
    if L.shape != (p.n_features, p.n_features):
        raise ConfigError(
            f"dimension mismatch: L is {L.shape}, expected "
            f"({p.n_features}, {p.n_features})"
        )
    return X @ L.T


def metric_diagnostics(m: LearnedMetric) -> dict:
    """Departure-from-identity summary: Frobenius distance, off-diagonal mass, spectrum."""
    M = m.M
    eye = np.eye(M.shape[0])
    off_mask = ~eye.astype(bool)
    diag_abs = float(np.abs(np.diag(M)).sum())
    off_abs = float(np.abs(M[off_mask]).sum())
    eigenvalues = np.linalg.eigvalsh(M)[::-1]
    return {
        "frobenius_dist_to_identity": float(np.linalg.norm(M - eye)),
        "offdiag_ratio": off_abs / diag_abs if diag_abs > 0 else 0.0,
        "eigenvalues": [float(v) for v in eigenvalues],
    }
