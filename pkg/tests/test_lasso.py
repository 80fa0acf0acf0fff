import warnings

import numpy as np
import pytest

from hedgelasso.core import validate_instance
from hedgelasso.fw import run_batch_fw
from hedgelasso.lasso import (
    ConvergenceWarning,
    CvResult,
    LambdaGrid,
    cv_lasso,
    equivalent_radius,
    kfold_split,
    lambda_path,
    lasso_cd,
    lasso_objective,
    soft_threshold,
)


def brute_force_lasso_3d(X, y, lam, span=3.0):
    """Grid search for argmin 0.5||y-Xb||^2 + lam||b||_1 over [-span, span]^3.

    Coarse-to-fine refinement; each pass restricts a convex objective to a
    box around the previous argmin, so the refinement cannot lose the
    minimizer.  Final resolution 2.5e-3 per coordinate.
    """
    G = X.T @ X
    c = X.T @ y
    const = 0.5 * float(y @ y)
    center = np.zeros(3)
    half = span
    step = span / 30
    for _ in range(3):
        axes = [np.arange(center[k] - half, center[k] + half + step / 2, step)
                for k in range(3)]
        b1, b2, b3 = np.meshgrid(*axes, indexing="ij", sparse=True)
        quad = (0.5 * (G[0, 0] * b1 ** 2 + G[1, 1] * b2 ** 2 + G[2, 2] * b3 ** 2)
                + G[0, 1] * b1 * b2 + G[0, 2] * b1 * b3 + G[1, 2] * b2 * b3)
        lin = c[0] * b1 + c[1] * b2 + c[2] * b3
        pen = lam * (np.abs(b1) + np.abs(b2) + np.abs(b3))
        obj = quad - lin + const + pen
        idx = np.unravel_index(np.argmin(obj), obj.shape)
        center = np.array([axes[k][idx[k]] for k in range(3)])
        half = 2 * step
        step = half / 40
    return center


def kkt_residuals(X, y, b, lam):
    grad = X.T @ (y - X @ b)
    on = np.abs(b) > 0
    r_on = np.abs(grad[on] - lam * np.sign(b[on])).max(initial=0.0)
    r_off = np.maximum(np.abs(grad[~on]) - lam, 0.0).max(initial=0.0)
    return r_on, r_off


def assert_kkt(inst, b, lam, tol):
    scale = np.abs(inst.x.T @ inst.y).max()
    r_on, r_off = kkt_residuals(inst.x, inst.y, b, lam)
    assert r_on <= 10 * tol * scale
    assert r_off <= 10 * tol * scale


def test_soft_threshold():
    assert soft_threshold(3.0, 1.0) == 2.0
    assert soft_threshold(-0.5, 1.0) == 0.0
    assert soft_threshold(-3.0, 1.0) == -2.0
    with pytest.raises(ValueError):
        soft_threshold(1.0, -0.1)


def test_lasso_cd_orthonormal_closed_form():
    inst = validate_instance(np.eye(2), [3.0, 0.5])
    b = lasso_cd(inst, 1.0)
    assert np.allclose(b, [2.0, 0.0], atol=1e-12)


def test_lasso_cd_zero_above_lambda_max():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(10, 6))
    y = rng.normal(size=10)
    inst = validate_instance(X, y)
    lam_max = np.abs(X.T @ y).max()
    assert np.array_equal(lasso_cd(inst, lam_max * 1.0001), np.zeros(6))


def test_lasso_cd_matches_brute_force_oracle():
    rng = np.random.default_rng(70)
    for _ in range(3):
        X = rng.normal(size=(6, 3))
        y = rng.normal(size=6)
        inst = validate_instance(X, y)
        b = lasso_cd(inst, 0.1, tol=1e-10)
        oracle = brute_force_lasso_3d(X, y, 0.1)
        assert np.abs(b - oracle).max() <= 1e-2
        assert_kkt(inst, b, 0.1, 1e-10)


def test_lasso_cd_zero_column_fixed_at_zero():
    rng = np.random.default_rng(8)
    X = rng.normal(size=(8, 3))
    X[:, 1] = 0.0
    inst = validate_instance(X, rng.normal(size=8))
    b = lasso_cd(inst, 0.5, warm_start=np.array([0.0, 5.0, 0.0]))
    assert b[1] == 0.0


def test_lasso_cd_objective_decreases_across_sweeps():
    rng = np.random.default_rng(12)
    X = rng.normal(size=(15, 10))
    y = rng.normal(size=15)
    inst = validate_instance(X, y)
    lam = 0.05 * np.abs(X.T @ y).max()
    prev = lasso_objective(inst, np.zeros(10), lam)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        for sweeps in range(1, 8):
            b = lasso_cd(inst, lam, max_iter=sweeps, tol=1e-14)
            obj = lasso_objective(inst, b, lam)
            assert obj <= prev + 1e-12
            prev = obj


def test_lasso_cd_warns_when_not_converged():
    rng = np.random.default_rng(14)
    X = rng.normal(size=(20, 30))
    y = rng.normal(size=20)
    inst = validate_instance(X, y)
    with pytest.warns(ConvergenceWarning):
        lasso_cd(inst, 1e-6 * np.abs(X.T @ y).max(), max_iter=1)


def test_lambda_path_endpoints_and_spacing():
    rng = np.random.default_rng(6)
    inst = validate_instance(rng.normal(size=(12, 5)), rng.normal(size=12))
    lam_max = np.abs(inst.x.T @ inst.y).max()
    g2 = lambda_path(inst, 2)
    assert np.allclose(g2.lambdas, [lam_max, lam_max * 1e-3], rtol=1e-12)
    g4 = lambda_path(inst, 4)
    ratios = g4.lambdas[1:] / g4.lambdas[:-1]
    assert np.abs(ratios - 0.1).max() <= 1e-9
    # at lambda_max the solution is exactly zero
    assert np.array_equal(lasso_cd(inst, float(g4.lambdas[0])), np.zeros(5))
    with pytest.raises(ValueError, match="degenerate"):
        lambda_path(validate_instance(np.zeros((3, 2)), np.ones(3)), 4)


def test_lambda_grid_rejects_duplicates_and_increasing():
    with pytest.raises(ValueError):
        LambdaGrid(np.array([1.0, 1.0, 0.1]))
    with pytest.raises(ValueError):
        LambdaGrid(np.array([0.1, 1.0]))
    with pytest.raises(ValueError):
        LambdaGrid(np.array([1.0, -0.5]))
    assert LambdaGrid(np.array([2.0])).size == 1


def test_kfold_split_shapes():
    folds = kfold_split(10, 5, seed=3)
    assert sorted(len(f) for f in folds) == [2, 2, 2, 2, 2]
    folds = kfold_split(11, 5, seed=3)
    assert sorted(len(f) for f in folds) == [2, 2, 2, 2, 3]
    joined = np.sort(np.concatenate(folds))
    assert np.array_equal(joined, np.arange(11))
    again = kfold_split(11, 5, seed=3)
    assert all(np.array_equal(a, b) for a, b in zip(folds, again))
    assert not all(
        np.array_equal(a, b) for a, b in zip(folds, kfold_split(11, 5, seed=4))
    )
    with pytest.raises(ValueError):
        kfold_split(5, 6, seed=0)
    with pytest.raises(ValueError):
        kfold_split(5, 1, seed=0)


def test_cv_lasso_recovers_noiseless_signal():
    rng = np.random.default_rng(15)
    X = rng.normal(size=(60, 10))
    beta = np.zeros(10)
    beta[[1, 4, 7]] = [1.5, -2.0, 0.8]
    inst = validate_instance(X, X @ beta)
    cv = cv_lasso(inst, lambda_path(inst, 30), k=5, seed=2)
    assert np.abs(cv.final_beta - beta).max() < 0.05
    assert isinstance(cv, CvResult)
    assert cv.cv_curve.shape == (30, 3)


def test_cv_lasso_single_lambda_grid():
    rng = np.random.default_rng(16)
    inst = validate_instance(rng.normal(size=(20, 4)), rng.normal(size=20))
    grid = LambdaGrid(np.array([0.7]))
    cv = cv_lasso(inst, grid, k=4, seed=1)
    assert cv.best_lambda == 0.7


def test_cv_lasso_best_lambda_minimizes_curve():
    rng = np.random.default_rng(17)
    X = rng.normal(size=(40, 8))
    beta = np.zeros(8)
    beta[:2] = [2.0, -1.0]
    inst = validate_instance(X, X @ beta + 0.1 * rng.normal(size=40))
    cv = cv_lasso(inst, lambda_path(inst, 15), k=5, seed=5)
    curve = cv.cv_curve
    best_mean = np.nanmin(curve[:, 1])
    chosen = curve[curve[:, 0] == cv.best_lambda][0]
    assert chosen[1] <= best_mean + 1e-12


def test_equivalent_radius():
    assert equivalent_radius(np.zeros(3)) == 0.0
    assert equivalent_radius([2.0, -1.0]) == 3.0
    with pytest.raises(ValueError):
        equivalent_radius([np.nan])


def test_penalized_constrained_equivalence():
    # constrained solve at r = ||b_lambda||_1 reaches the same LS objective
    rng = np.random.default_rng(40)
    X = rng.normal(size=(20, 10))
    y = X @ (0.4 * rng.normal(size=10)) + 0.5 * rng.normal(size=20)
    inst = validate_instance(X, y)
    lam = 0.1 * np.abs(X.T @ y).max()
    b_cd = lasso_cd(inst, lam, tol=1e-10)
    r = equivalent_radius(b_cd)
    b_fw = run_batch_fw(inst, r, num_steps=10_000)
    f_cd = lasso_objective(inst, b_cd, 0.0)
    f_fw = lasso_objective(inst, b_fw, 0.0)
    assert abs(f_fw - f_cd) <= 1e-3
