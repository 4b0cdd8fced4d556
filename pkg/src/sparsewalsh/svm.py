"""l1-restricted linear hinge-loss training by projected subgradient descent.

Solves

    min_z  sum_i (1 - y_i (A z)_i)_+    s.t.  ||z||_1 <= tau

over a design matrix A of +/-1 parity columns. No intercept: the constant
parity (empty mask) plays that role when it is selected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TrainConfig:
    tau: float = 1000.0
    max_epochs: int = 2000
    tolerance: float = 1e-6
    step_scale: float = 1.0
    seed: int = 0
    patience: int = 200

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be at least 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not self.step_scale > 0:
            raise ValueError("step_scale must be positive")
        if self.patience < 1:
            raise ValueError("patience must be at least 1")


@dataclass(frozen=True)
class TrainResult:
    weights: np.ndarray
    objective: float
    epochs_used: int
    converged: bool


def _check_shapes(z, columns, labels):
    if columns.ndim != 2:
        raise ValueError("columns must be a 2-D matrix")
    if columns.shape[0] != labels.shape[0]:
        raise ValueError(
            f"design has {columns.shape[0]} rows but there are {labels.shape[0]} labels"
        )
    if z is not None and z.shape != (columns.shape[1],):
        raise ValueError(f"weights have shape {z.shape}, expected ({columns.shape[1]},)")


def hinge_objective(z, columns, labels) -> float:
    z = np.asarray(z, dtype=np.float64).reshape(-1)
    columns = np.asarray(columns)
    labels = np.asarray(labels, dtype=np.float64).reshape(-1)
    _check_shapes(z, columns, labels)
    margins = labels * (columns @ z)
    return float(np.maximum(0.0, 1.0 - margins).sum())


def project_l1(v, tau: float) -> np.ndarray:
    """Euclidean projection of ``v`` onto {w : ||w||_1 <= tau}.

    Sort-based soft thresholding (Duchi et al., 2008), O(k log k).
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    v = np.asarray(v, dtype=np.float64)
    u = np.abs(v)
    if u.sum() <= tau:
        return v.copy()
    s = np.sort(u)[::-1]
    css = np.cumsum(s)
    idx = np.arange(1, s.size + 1)
    rho = np.nonzero(s * idx > css - tau)[0][-1]
    theta = (css[rho] - tau) / (rho + 1.0)
    return np.sign(v) * np.maximum(u - theta, 0.0)


def train(features, labels, config: TrainConfig = TrainConfig()) -> TrainResult:
    """Projected subgradient descent on the hinge sum.

    Each epoch moves a distance step_scale / sqrt(t) along the normalized
    subgradient, then projects onto the tau-ball. Normalizing keeps the
    step independent of the sample size and of how many margins are active.
    Returns the best iterate seen (never worse than z = 0).

    ``features`` is a ``SelectedFeatures`` or a bare (l, k) design matrix.
    The method is deterministic; ``config.seed`` is carried for provenance.
    """
    A = np.asarray(getattr(features, "design_columns", features), dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64).reshape(-1)
    _check_shapes(None, A, y)
    ell, k = A.shape

    z = np.zeros(k)
    best_z = z.copy()
    best_obj = float(ell)
    history = [best_obj]
    converged = False
    epoch = 0
    for epoch in range(1, config.max_epochs + 1):
        margins = y * (A @ z)
        if not np.all(np.isfinite(margins)):
            raise FloatingPointError(f"non-finite margins at epoch {epoch}")
        active = margins < 1.0
        grad = -(A[active].T @ y[active])
        norm = float(np.linalg.norm(grad))
        if norm == 0.0:
            # zero subgradient: z is a minimizer
            converged = True
            break
        step = config.step_scale / math.sqrt(epoch) / norm
        z = project_l1(z - step * grad, config.tau)
        if not np.all(np.isfinite(z)):
            raise FloatingPointError(f"non-finite weights at epoch {epoch}")

        obj = float(np.maximum(0.0, 1.0 - y * (A @ z)).sum())
        if not math.isfinite(obj):
            raise FloatingPointError(f"non-finite objective at epoch {epoch}")
        if obj < best_obj:
            best_obj, best_z = obj, z.copy()
        history.append(best_obj)

        if best_obj == 0.0:
            converged = True
            break
        if epoch >= config.patience:
            before = history[epoch - config.patience]
            if before - best_obj <= config.tolerance * before:
                converged = True
                break

    return TrainResult(best_z, best_obj, epoch, converged)
