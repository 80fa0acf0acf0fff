"""Multiplicative-weights (Hedge) updates over a finite expert set.

The state is a probability vector; each update multiplies every weight by
exp(-eta * loss) and renormalizes.  Losses are shifted by their minimum
before exponentiation, which leaves the normalized result unchanged (shift
invariance) but prevents underflow when eta * loss is large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Smallest weight kept alive before normalization.  An exact zero would be
# unrecoverable under multiplicative updates.
WEIGHT_FLOOR = 1e-300


@dataclass(frozen=True)
class HedgeState:
    """Probability vector over experts plus the number of updates applied."""

    weights: np.ndarray
    step_count: int = 0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a nonempty 1-d vector")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def num_experts(self) -> int:
        return self.weights.shape[0]


def hedge_init(num_experts: int) -> HedgeState:
    """Uniform initial state over ``num_experts`` experts.

    The all-ones initialization normalizes to the uniform vector after the
    first update, so the uniform vector is stored from the start and the
    probability-vector invariant holds at all times.
    """
    if num_experts < 1:
        raise ValueError(f"need at least one expert, got {num_experts}")
    return HedgeState(np.full(num_experts, 1.0 / num_experts), 0)


def hedge_update(state: HedgeState, losses, eta: float) -> HedgeState:
    """One exponential reweighting round: w_r <- w_r * exp(-eta * loss_r), renormalized."""
    losses = np.asarray(losses, dtype=np.float64)
    if losses.shape != state.weights.shape:
        raise ValueError(
            f"losses length {losses.shape} does not match {state.num_experts} experts"
        )
    if not np.all(np.isfinite(losses)):
        raise ValueError("losses contain non-finite entries")
    if not (eta > 0 and np.isfinite(eta)):
        raise ValueError(f"eta must be a positive finite real, got {eta}")
    shifted = losses - losses.min()
    w = state.weights * np.exp(-eta * shifted)
    w = np.maximum(w, WEIGHT_FLOOR)
    w = w / w.sum()
    return HedgeState(w, state.step_count + 1)


def is_dirac(state: HedgeState, tolerance: float) -> int | None:
    """Index of the dominant expert if its weight is >= 1 - tolerance, else None."""
    if not (0 < tolerance < 0.5):
        raise ValueError(f"tolerance must lie in (0, 0.5), got {tolerance}")
    idx = int(np.argmax(state.weights))
    if state.weights[idx] >= 1.0 - tolerance:
        return idx
    return None


def default_learning_rate(num_experts: int, horizon: int) -> float:
    """Standard Hedge tuning sqrt(8 ln G / n) for a known horizon.

    Tuned for losses in [0, 1]; squared prediction errors are unbounded, so
    this is a default, not a guarantee, and callers may override it.
    """
    if num_experts < 1 or horizon < 1:
        raise ValueError("num_experts and horizon must be positive")
    if num_experts == 1:
        return 1.0
    return math.sqrt(8.0 * math.log(num_experts) / horizon)
