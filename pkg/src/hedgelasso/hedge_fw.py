"""End-to-end online driver: per-radius Frank-Wolfe learners under Hedge.

For each observation i (in stream order):

  1. every expert r predicts y_i from its current iterate b_r and is charged
     the squared error (prequential: b_r has never seen observation i);
  2. the shared sufficient statistics absorb the observation;
  3. every expert takes one Frank-Wolfe step from the updated gradient
     estimate;
  4. the Hedge weights absorb the per-expert squared errors, with a single
     normalization per observation.

The per-expert inner loop is evaluated as matrix operations over all
experts at once (the experts share no state, so the columnwise evaluation
is exactly the per-expert recursion; see tests for the equivalence check).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CandidateGrid, FwConfig, HedgeConfig, RegressionInstance
from .fw import FEASIBILITY_SLACK, stats_init, stats_update
from .hedge import HedgeState, hedge_init, hedge_update, is_dirac


@dataclass(frozen=True)
class RunTrace:
    """Per-step diagnostics: Hedge weights and per-expert squared errors."""

    weights: np.ndarray        # (n, G), weights after processing step i
    squared_errors: np.ndarray  # (n, G), prequential squared errors at step i


@dataclass(frozen=True)
class HedgeFwOutput:
    """Final weights and iterates of a full online run."""

    radii: np.ndarray
    weights: np.ndarray
    iterates: np.ndarray  # (G, p), row r is the final iterate of expert r
    per_expert_cumulative_loss: np.ndarray
    trace: RunTrace | None = None

    def __post_init__(self):
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        l1 = np.abs(self.iterates).sum(axis=1)
        if np.any(l1 > self.radii + FEASIBILITY_SLACK):
            raise ValueError("an iterate lies outside its expert's l1 ball")

    @property
    def num_experts(self) -> int:
        return self.radii.shape[0]


@dataclass(frozen=True)
class SelectedExpert:
    """Result of single-expert selection from the final weight vector."""

    index: int
    coefficients: np.ndarray
    is_dirac: bool


def run_hedge_fw(
    instance: RegressionInstance,
    grid: CandidateGrid,
    hedge_cfg: HedgeConfig,
    fw_cfg: FwConfig,
    record_trace: bool = False,
) -> HedgeFwOutput:
    """Stream the n observations once and return final weights and iterates."""
    X, y = instance.x, instance.y
    n, p = instance.n, instance.p
    radii = grid.radii
    G = grid.size
    cols = np.arange(G)
    K = fw_cfg.k_step

    B = np.zeros((p, G))  # column g is expert g's iterate
    state = hedge_init(G)
    stats = stats_init(p)
    cum_loss = np.zeros(G)
    trace_w = np.empty((n, G)) if record_trace else None
    trace_e = np.empty((n, G)) if record_trace else None

    for i in range(1, n + 1):
        x = X[i - 1]
        errs = (y[i - 1] - x @ B) ** 2  # uses b_r^(i-1): prediction before update
        if not np.all(np.isfinite(errs)):
            raise FloatingPointError(
                f"non-finite prediction error at observation {i - 1}"
            )
        cum_loss += errs
        losses = errs if hedge_cfg.loss_cap is None else np.minimum(errs, hedge_cfg.loss_cap)

        stats = stats_update(stats, x, y[i - 1])

        grads = stats.alpha_bar @ B - stats.beta_bar[:, None]
        jmax = np.abs(grads).argmax(axis=0)  # smallest index wins ties
        signs = np.sign(grads[jmax, cols])   # 0 only for an all-zero gradient
        gamma = min(1.0, K / (i + K - 1.0))
        B *= 1.0 - gamma
        B[jmax, cols] += gamma * (-radii * signs)
        assert np.all(np.abs(B).sum(axis=0) <= radii + FEASIBILITY_SLACK)

        state = hedge_update(state, losses, hedge_cfg.eta)
        if record_trace:
            trace_w[i - 1] = state.weights
            trace_e[i - 1] = errs

    trace = None
    if record_trace:
        trace = RunTrace(weights=trace_w, squared_errors=trace_e)
    return HedgeFwOutput(
        radii=radii.copy(),
        weights=state.weights.copy(),
        iterates=B.T.copy(),
        per_expert_cumulative_loss=cum_loss,
        trace=trace,
    )


def aggregate_estimator(output: HedgeFwOutput) -> np.ndarray:
    """Weight-averaged coefficient vector sum_r h_r b_r."""
    return output.weights @ output.iterates


def select_estimator(output: HedgeFwOutput, tolerance: float) -> SelectedExpert:
    """Single-expert pick: the Dirac expert if one exists, else the argmax weight.

    Ties in the argmax break toward the smallest index; the flag records
    whether the weight vector was a Dirac at the given tolerance.
    """
    state = HedgeState(output.weights, 0)
    idx = is_dirac(state, tolerance)
    dirac = idx is not None
    if idx is None:
        idx = int(np.argmax(output.weights))
    return SelectedExpert(index=idx, coefficients=output.iterates[idx].copy(), is_dirac=dirac)


def default_grid(instance: RegressionInstance, size: int) -> CandidateGrid:
    """Geometric radius grid spanning three decades below a data-driven cap.

    The cap r_max = ||X^T y||_inf / (min_j ||X_j||^2 / n) is the l1 norm a
    single-feature least-squares fit would need, so the grid is scale
    consistent with the data.
    """
    if size < 2:
        raise ValueError(f"grid size must be at least 2, got {size}")
    col_sq = (instance.x ** 2).sum(axis=0)
    min_col = col_sq.min() / instance.n
    top = np.abs(instance.x.T @ instance.y).max()
    if min_col <= 0 or top <= 0:
        raise ValueError("degenerate design: cannot derive a radius grid")
    r_max = top / min_col
    return CandidateGrid(np.geomspace(r_max * 1e-3, r_max, size))
