"""Shared domain types: validated regression data, candidate grids, configs.

Everything here is a plain value object.  All arrays are float64 and are
frozen (non-writeable) after construction so instances can be shared across
threads without copying.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

METHOD_AGGREGATE = "hedge_fw_aggregate"
METHOD_SELECT = "hedge_fw_select"
METHOD_CV = "cv_lasso"
METHODS = (METHOD_AGGREGATE, METHOD_SELECT, METHOD_CV)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class RegressionInstance:
    """Design matrix ``x`` (n rows, one per observation) and response ``y``.

    Row i of ``x`` and entry ``y[i]`` are always consumed together; the
    online learner sees one (row, response) pair per step.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if x.ndim != 2:
            raise ValueError(f"x must be a 2-d matrix, got ndim={x.ndim}")
        if y.ndim != 1:
            raise ValueError(f"y must be a 1-d vector, got ndim={y.ndim}")
        if x.size == 0:
            raise ValueError("x is empty: need at least one row and one column")
        if x.shape[0] != y.shape[0]:
            raise ValueError(
                f"dimension mismatch: x has {x.shape[0]} rows but y has length {y.shape[0]}"
            )
        bad = np.argwhere(~np.isfinite(x))
        if bad.size:
            i, j = bad[0]
            raise ValueError(f"non-finite entry in x at ({i}, {j})")
        bad = np.flatnonzero(~np.isfinite(y))
        if bad.size:
            raise ValueError(f"non-finite entry in y at index {bad[0]}")
        object.__setattr__(self, "x", _freeze(x.copy()))
        object.__setattr__(self, "y", _freeze(y.copy()))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]


def validate_instance(x, y) -> RegressionInstance:
    """Validate raw arrays and return a RegressionInstance.

    Rejects (rather than coerces) dimension mismatches, empty designs and
    non-finite entries; the error message reports the offending position.
    """
    return RegressionInstance(x, y)


@dataclass(frozen=True)
class GroundTruth:
    """True sparse coefficient vector, its support size and the noise level.

    Known only for synthetic instances; used by metrics, never by learners.
    """

    beta: np.ndarray
    s0: int
    sigma: float

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=np.float64)
        if beta.ndim != 1:
            raise ValueError("beta must be a 1-d vector")
        if not np.all(np.isfinite(beta)):
            raise ValueError("beta contains non-finite entries")
        nnz = int(np.count_nonzero(beta))
        if nnz != self.s0:
            raise ValueError(f"beta has {nnz} nonzero entries but s0={self.s0}")
        if self.s0 > beta.shape[0]:
            raise ValueError(f"s0={self.s0} exceeds dimension p={beta.shape[0]}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        object.__setattr__(self, "beta", _freeze(beta.copy()))

    @property
    def p(self) -> int:
        return self.beta.shape[0]


@dataclass(frozen=True)
class CandidateGrid:
    """Ordered finite set of l1-ball radii, one online learner per radius."""

    radii: np.ndarray

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=np.float64)
        if radii.ndim != 1 or radii.size == 0:
            raise ValueError("radii must be a nonempty 1-d vector")
        if not np.all(np.isfinite(radii)):
            raise ValueError("radii contains non-finite entries")
        if radii[0] <= 0:
            raise ValueError("all radii must be positive")
        if np.any(np.diff(radii) <= 0):
            raise ValueError("radii must be strictly increasing")
        object.__setattr__(self, "radii", _freeze(radii.copy()))

    @property
    def size(self) -> int:
        return self.radii.shape[0]


@dataclass(frozen=True)
class HedgeConfig:
    """Exponential-weights parameters.

    eta: learning rate of the multiplicative update (must be positive).
    dirac_tolerance: a weight vector counts as a Dirac when its maximum
        weight is at least 1 - dirac_tolerance; must lie in (0, 0.5).
    loss_cap: optional upper clip on the per-step squared error fed to the
        weight update (off by default; raw squared errors are used).
    """

    eta: float
    dirac_tolerance: float = 0.01
    loss_cap: float | None = None

    def __post_init__(self):
        if not (self.eta > 0 and np.isfinite(self.eta)):
            raise ValueError(f"eta must be a positive finite real, got {self.eta}")
        if not (0 < self.dirac_tolerance < 0.5):
            raise ValueError(
                f"dirac_tolerance must lie in (0, 0.5), got {self.dirac_tolerance}"
            )
        if self.loss_cap is not None and not (self.loss_cap > 0):
            raise ValueError(f"loss_cap must be positive when set, got {self.loss_cap}")


@dataclass(frozen=True)
class FwConfig:
    """Frank-Wolfe step schedule gamma_t = K / (t + K - 1), K >= 1."""

    k_step: float = 2.0

    def __post_init__(self):
        if not (self.k_step >= 1 and np.isfinite(self.k_step)):
            raise ValueError(f"k_step must be >= 1, got {self.k_step}")


@dataclass(frozen=True)
class ExperimentRecord:
    """One benchmark outcome row: a (trial, method) pair with its metrics.

    ``error`` is empty for successful trials; on a per-trial failure it
    carries the message and the metric fields are NaN.
    """

    trial: int
    method: str
    pred_error: float
    resid_error: float
    est_error: float
    support_f1: float
    wall_time_s: float
    seed: int
    config_digest: str = ""
    error: str = ""

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method label {self.method!r}")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")
        if not self.error:
            if not (self.pred_error >= 0):
                raise ValueError(f"pred_error must be nonnegative, got {self.pred_error}")
            if not (self.wall_time_s >= 0):
                raise ValueError(f"wall_time_s must be nonnegative, got {self.wall_time_s}")
