"""Online stochastic Frank-Wolfe for least squares on an l1 ball.

One observation (x_i, y_i) per step.  Shared running sufficient statistics

    alpha_bar = (1/i) * sum_k x_k x_k^T,   beta_bar = (1/i) * sum_k x_k y_k

give the gradient estimate alpha_bar @ b - beta_bar of the quadratic
f(b) = (1/2i) ||y - X b||^2.  The linear minimization oracle over the ball
||b||_1 <= r is a signed scaled coordinate vertex, and the iterate moves by
the open-loop convex combination with step gamma_t = K / (t + K - 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FEASIBILITY_SLACK = 1e-9


@dataclass(frozen=True)
class SufficientStats:
    """Running averages of x x^T and x y over the observations seen so far."""

    alpha_bar: np.ndarray
    beta_bar: np.ndarray
    count: int = 0

    def __post_init__(self):
        a = np.asarray(self.alpha_bar, dtype=np.float64)
        b = np.asarray(self.beta_bar, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("alpha_bar must be a square matrix")
        if b.ndim != 1 or b.shape[0] != a.shape[0]:
            raise ValueError("beta_bar length must match alpha_bar dimension")
        if np.abs(a - a.T).max(initial=0.0) > 1e-12:
            raise ValueError("alpha_bar must be symmetric")
        if self.count < 0:
            raise ValueError("count must be nonnegative")
        if self.count == 0 and (np.any(a != 0) or np.any(b != 0)):
            raise ValueError("count 0 requires zero statistics")
        for arr in (a, b):
            arr.setflags(write=False)
        object.__setattr__(self, "alpha_bar", a)
        object.__setattr__(self, "beta_bar", b)

    @property
    def p(self) -> int:
        return self.beta_bar.shape[0]


def stats_init(p: int) -> SufficientStats:
    return SufficientStats(np.zeros((p, p)), np.zeros(p), 0)


def stats_update(stats: SufficientStats, x_row, y_i: float) -> SufficientStats:
    """Absorb one observation: running-average update of alpha_bar and beta_bar."""
    x = np.asarray(x_row, dtype=np.float64)
    if x.shape != (stats.p,):
        raise ValueError(f"x_row must have length {stats.p}, got shape {x.shape}")
    if not (np.all(np.isfinite(x)) and np.isfinite(y_i)):
        raise ValueError("non-finite observation")
    i = stats.count + 1
    w = 1.0 / i
    alpha = (1.0 - w) * stats.alpha_bar + w * np.outer(x, x)
    # guard the symmetry invariant against floating-point drift
    alpha = 0.5 * (alpha + alpha.T)
    beta = (1.0 - w) * stats.beta_bar + w * (x * y_i)
    return SufficientStats(alpha, beta, i)


def gradient_estimate(stats: SufficientStats, b) -> np.ndarray:
    """alpha_bar @ b - beta_bar; requires at least one absorbed observation."""
    if stats.count < 1:
        raise ValueError("gradient estimate undefined before any observation")
    b = np.asarray(b, dtype=np.float64)
    return stats.alpha_bar @ b - stats.beta_bar


def l1_lmo(gradient, radius: float) -> np.ndarray:
    """Linear minimization oracle over the l1 ball of the given radius.

    Returns d = -radius * sign(g_jmax) * e_jmax where jmax is the smallest
    index attaining max |g_j|, so <d, g> = -radius * ||g||_inf.  An exactly
    zero gradient returns the zero vector.
    """
    g = np.asarray(gradient, dtype=np.float64)
    if not np.all(np.isfinite(g)):
        raise ValueError("non-finite gradient")
    if not (radius > 0):
        raise ValueError(f"radius must be positive, got {radius}")
    j = int(np.argmax(np.abs(g)))
    d = np.zeros_like(g)
    if g[j] != 0.0:
        d[j] = -radius * np.sign(g[j])
    return d


@dataclass(frozen=True)
class FwIterate:
    """Current iterate, its ball radius, and the number of steps taken."""

    b: np.ndarray
    radius: float
    step_index: int = 0

    def __post_init__(self):
        b = np.asarray(self.b, dtype=np.float64)
        if b.ndim != 1:
            raise ValueError("b must be a 1-d vector")
        if not (self.radius > 0):
            raise ValueError(f"radius must be positive, got {self.radius}")
        if np.abs(b).sum() > self.radius + FEASIBILITY_SLACK:
            raise ValueError("iterate lies outside the l1 ball")
        if self.step_index < 0:
            raise ValueError("step_index must be nonnegative")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "b", b)


def fw_init(p: int, radius: float) -> FwIterate:
    return FwIterate(np.zeros(p), radius, 0)


def fw_step(iterate: FwIterate, direction, k_step: float) -> FwIterate:
    """Move to the convex combination (1-gamma) b + gamma d.

    gamma = min(1, K/(t+K-1)) with t the 1-based index of this step; the
    clamp keeps feasibility unconditional even for exotic K.
    """
    d = np.asarray(direction, dtype=np.float64)
    if d.shape != iterate.b.shape:
        raise ValueError("direction dimension mismatch")
    if np.abs(d).sum() > iterate.radius + FEASIBILITY_SLACK:
        raise ValueError("direction lies outside the l1 ball")
    t = iterate.step_index + 1
    gamma = min(1.0, k_step / (t + k_step - 1.0))
    b = (1.0 - gamma) * iterate.b + gamma * d
    return FwIterate(b, iterate.radius, t)


def predict(b, x_row) -> float:
    """Inner product <x_row, b>, the one-step-ahead prediction."""
    b = np.asarray(b, dtype=np.float64)
    x = np.asarray(x_row, dtype=np.float64)
    if b.shape != x.shape:
        raise ValueError("dimension mismatch between coefficients and row")
    if not (np.all(np.isfinite(b)) and np.all(np.isfinite(x))):
        raise ValueError("non-finite inputs")
    return float(x @ b)


def run_batch_fw(instance, radius: float, num_steps: int, k_step: float = 2.0) -> np.ndarray:
    """Frank-Wolfe with exact full-batch gradients (stats frozen at count=n).

    Used as the long-run constrained solver in equivalence checks; the
    online driver never calls this.
    """
    stats = stats_init(instance.p)
    for i in range(instance.n):
        stats = stats_update(stats, instance.x[i], instance.y[i])
    it = fw_init(instance.p, radius)
    for _ in range(num_steps):
        g = gradient_estimate(stats, it.b)
        d = l1_lmo(g, radius)
        it = fw_step(it, d, k_step)
    return it.b
