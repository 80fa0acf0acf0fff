"""Error and timing metrics for the benchmark.

The headline quantity is the root-mean-square prediction error against the
true signal, (1/sqrt(n)) * ||X (b_hat - beta)||_2.  The residual-based
variant against the noisy observations is reported in a separate column:
at small noise levels it is noise-floor dominated and would mask method
differences.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import GroundTruth, RegressionInstance

SUPPORT_THRESHOLD = 1e-6


@dataclass(frozen=True)
class TrialMetrics:
    pred_error: float
    resid_error: float
    est_error: float
    support_f1: float
    wall_time_s: float

    def __post_init__(self):
        for name in ("pred_error", "resid_error", "est_error", "wall_time_s"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and nonnegative, got {v}")
        if not (0 <= self.support_f1 <= 1):
            raise ValueError(f"support_f1 must lie in [0, 1], got {self.support_f1}")


def prediction_error(instance: RegressionInstance, truth: GroundTruth, b_hat) -> float:
    """(1/sqrt(n)) * ||X (b_hat - beta)||_2, in-sample design vs the true signal."""
    b = np.asarray(b_hat, dtype=np.float64)
    if b.shape != truth.beta.shape or truth.beta.shape[0] != instance.p:
        raise ValueError("dimension mismatch between estimate, truth and design")
    diff = instance.x @ (b - truth.beta)
    return float(np.linalg.norm(diff)) / np.sqrt(instance.n)


def residual_error(instance: RegressionInstance, b_hat) -> float:
    """(1/sqrt(n)) * ||y - X b_hat||_2, against the noisy observations."""
    b = np.asarray(b_hat, dtype=np.float64)
    if b.shape[0] != instance.p:
        raise ValueError("dimension mismatch between estimate and design")
    return float(np.linalg.norm(instance.y - instance.x @ b)) / np.sqrt(instance.n)


def estimation_error(truth: GroundTruth, b_hat) -> float:
    """||b_hat - beta||_2."""
    b = np.asarray(b_hat, dtype=np.float64)
    if b.shape != truth.beta.shape:
        raise ValueError("dimension mismatch between estimate and truth")
    return float(np.linalg.norm(b - truth.beta))


def support_f1(truth: GroundTruth, b_hat, threshold: float = SUPPORT_THRESHOLD) -> float:
    """F1 score of the recovered support, |b_hat_j| > threshold vs beta_j != 0."""
    b = np.asarray(b_hat, dtype=np.float64)
    if b.shape != truth.beta.shape:
        raise ValueError("dimension mismatch between estimate and truth")
    pred = np.abs(b) > threshold
    true = truth.beta != 0
    tp = int(np.sum(pred & true))
    if not pred.any() and not true.any():
        return 1.0
    if tp == 0:
        return 0.0
    precision = tp / pred.sum()
    recall = tp / true.sum()
    return float(2 * precision * recall / (precision + recall))


def time_block(action):
    """Run a no-argument callable and return (result, wall seconds)."""
    t0 = time.perf_counter()
    result = action()
    return result, time.perf_counter() - t0


def trial_metrics(instance: RegressionInstance, truth: GroundTruth, b_hat,
                  wall_time_s: float) -> TrialMetrics:
    return TrialMetrics(
        pred_error=prediction_error(instance, truth, b_hat),
        resid_error=residual_error(instance, b_hat),
        est_error=estimation_error(truth, b_hat),
        support_f1=support_f1(truth, b_hat),
        wall_time_s=wall_time_s,
    )
