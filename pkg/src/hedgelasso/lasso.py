"""Batch penalized lasso by cyclic coordinate descent, with k-fold CV.

Solves min_b 0.5 * ||y - X b||^2 + lambda * ||b||_1 by soft-thresholded
coordinate updates with a maintained residual.  The cross-validation path
is warm-started along a decreasing lambda grid, mirroring standard CV
implementations so wall-time comparisons against the online method are
fair.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LambdaGrid:
    """Strictly decreasing positive penalty levels."""

    lambdas: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=np.float64)
        if lam.ndim != 1 or lam.size == 0:
            raise ValueError("lambdas must be a nonempty 1-d vector")
        if not np.all(np.isfinite(lam)):
            raise ValueError("lambdas contain non-finite entries")
        if lam[-1] <= 0:
            raise ValueError("all lambdas must be positive")
        if np.any(np.diff(lam) >= 0):
            raise ValueError("lambdas must be strictly decreasing")
        lam = lam.copy()
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)

    @property
    def size(self) -> int:
        return self.lambdas.shape[0]


@dataclass(frozen=True)
class CvResult:
    """Best penalty, the CV curve, and the full-data refit at the best penalty.

    cv_curve has one row (lambda, mean validation MSE, std of fold MSEs)
    per grid point, in grid order; rows where every fold failed carry NaN.
    """

    best_lambda: float
    cv_curve: np.ndarray
    final_beta: np.ndarray


def soft_threshold(v: float, threshold: float) -> float:
    """sign(v) * max(|v| - threshold, 0)."""
    if threshold < 0:
        raise ValueError(f"threshold must be nonnegative, got {threshold}")
    if v > threshold:
        return v - threshold
    if v < -threshold:
        return v + threshold
    return 0.0


@njit(cache=True, nogil=True)
def _cd_sweeps(X, y, lam, b, col_sq, tol, max_iter):
    """Cyclic coordinate descent on 0.5||y-Xb||^2 + lam||b||_1, in place.

    Returns (sweeps_used, last_max_change).  Convergence: the largest
    coordinate change in a full sweep falls below tol.
    """
    n, p = X.shape
    r = y - X @ b
    last = np.inf
    sweeps = 0
    for it in range(max_iter):
        mx = 0.0
        for j in range(p):
            if col_sq[j] == 0.0:
                b[j] = 0.0  # zero column: penalty pins the coordinate
                continue
            bj = b[j]
            rho = bj * col_sq[j]
            for i in range(n):
                rho += X[i, j] * r[i]
            if rho > lam:
                nb = (rho - lam) / col_sq[j]
            elif rho < -lam:
                nb = (rho + lam) / col_sq[j]
            else:
                nb = 0.0
            d = nb - bj
            if d != 0.0:
                for i in range(n):
                    r[i] -= d * X[i, j]
                if d < 0.0:
                    d = -d
                if d > mx:
                    mx = d
            b[j] = nb
        sweeps = it + 1
        last = mx
        if mx < tol:
            break
    return sweeps, last


def _solve_cd(X, y, lam, warm_start, tol, max_iter):
    """Run the kernel from a warm start; returns (beta, converged)."""
    p = X.shape[1]
    if warm_start is None:
        b = np.zeros(p)
    else:
        b = np.array(warm_start, dtype=np.float64).copy()
        if b.shape != (p,):
            raise ValueError(f"warm_start must have length {p}")
    col_sq = np.ascontiguousarray((X ** 2).sum(axis=0))
    Xc = np.ascontiguousarray(X)
    yc = np.ascontiguousarray(y)
    sweeps, last = _cd_sweeps(Xc, yc, lam, b, col_sq, tol, max_iter)
    converged = last < tol
    return b, converged


def lasso_cd(instance, lam: float, warm_start=None, tol: float = 1e-7,
             max_iter: int = 10000) -> np.ndarray:
    """Penalized lasso solution at one lambda.

    Emits a ConvergenceWarning and returns the best iterate if max_iter
    sweeps pass without the coordinate changes dropping below tol.
    """
    if not (lam > 0):
        raise ValueError(f"lambda must be positive, got {lam}")
    if not (tol > 0) or max_iter < 1:
        raise ValueError("tol must be positive and max_iter at least 1")
    b, converged = _solve_cd(instance.x, instance.y, lam, warm_start, tol, max_iter)
    if not converged:
        warnings.warn(
            f"coordinate descent did not converge at lambda={lam:g} "
            f"after {max_iter} sweeps",
            ConvergenceWarning,
        )
    return b


def lasso_objective(instance, b, lam: float) -> float:
    r = instance.y - instance.x @ b
    return 0.5 * float(r @ r) + lam * float(np.abs(b).sum())


def lambda_path(instance, size: int) -> LambdaGrid:
    """Geometric grid from lambda_max = ||X^T y||_inf down three decades."""
    if size < 2:
        raise ValueError(f"path size must be at least 2, got {size}")
    lam_max = float(np.abs(instance.x.T @ instance.y).max())
    if lam_max <= 0:
        raise ValueError("degenerate design: X^T y is identically zero")
    return LambdaGrid(np.geomspace(lam_max, lam_max * 1e-3, size))


def kfold_split(n: int, k: int, seed: int) -> list[np.ndarray]:
    """Seeded partition of range(n) into k folds with sizes differing by <= 1."""
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if k > n:
        raise ValueError(f"cannot split {n} observations into {k} folds")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    return list(np.array_split(perm, k))


def cv_lasso(instance, grid: LambdaGrid, k: int, seed: int,
             tol: float = 1e-7, max_iter: int = 10000) -> CvResult:
    """k-fold cross-validation along the lambda path, then a full refit.

    Within each fold the path is warm-started from large to small lambda.
    A (fold, lambda) fit that fails to converge is skipped with a warning;
    a lambda with no surviving fold is excluded from the argmin.  Among
    mean-MSE ties within 1e-12 the smallest lambda wins.
    """
    n = instance.n
    if k > n:
        raise ValueError(f"cv folds ({k}) exceed observations ({n})")
    lambdas = grid.lambdas
    folds = kfold_split(n, k, seed)
    fold_mse = np.full((k, grid.size), np.nan)
    for f, val_idx in enumerate(folds):
        mask = np.ones(n, dtype=bool)
        mask[val_idx] = False
        X_tr, y_tr = instance.x[mask], instance.y[mask]
        X_val, y_val = instance.x[val_idx], instance.y[val_idx]
        b = None
        for li, lam in enumerate(lambdas):
            b, converged = _solve_cd(X_tr, y_tr, lam, b, tol, max_iter)
            if not converged:
                warnings.warn(
                    f"fold {f} skipped at lambda={lam:g}: no convergence",
                    ConvergenceWarning,
                )
                continue
            resid = y_val - X_val @ b
            fold_mse[f, li] = float(resid @ resid) / val_idx.shape[0]

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)  # all-NaN columns
        mean_mse = np.nanmean(fold_mse, axis=0)
        counts = np.sum(~np.isnan(fold_mse), axis=0)
        std_mse = np.full(grid.size, np.nan)
        for li in range(grid.size):
            vals = fold_mse[~np.isnan(fold_mse[:, li]), li]
            if vals.size:
                std_mse[li] = vals.std(ddof=1) if vals.size > 1 else 0.0
    valid = counts > 0
    if not np.any(valid):
        raise RuntimeError("cross-validation failed at every lambda")
    best_mean = np.nanmin(mean_mse[valid])
    tied = valid & (mean_mse <= best_mean + 1e-12)
    best_lambda = float(lambdas[tied].min())

    b = None
    for lam in lambdas:
        b, _ = _solve_cd(instance.x, instance.y, lam, b, tol, max_iter)
        if lam <= best_lambda:
            break
    curve = np.column_stack([lambdas, mean_mse, std_mse])
    return CvResult(best_lambda=best_lambda, cv_curve=curve, final_beta=b)


def equivalent_radius(beta_hat) -> float:
    """l1 norm of a penalized solution: the ball radius sharing that solution."""
    b = np.asarray(beta_hat, dtype=np.float64)
    if not np.all(np.isfinite(b)):
        raise ValueError("non-finite coefficients")
    return float(np.abs(b).sum())
