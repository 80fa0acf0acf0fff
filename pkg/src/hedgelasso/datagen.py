"""Seeded synthetic regression instances.

Designs: i.i.d. standard Gaussian entries, or rows drawn from a zero-mean
Gaussian with Toeplitz covariance rho^|j-k| (a stand-in for highly
correlated measured designs).  Signals have exactly s0 nonzero entries,
each a Rademacher sign times (1 + standard normal).

Randomness uses the counter-based Philox generator keyed as
(seed, 0), so an instance is a pure function of its spec.  Monte Carlo
sweeps derive one child seed per trial with ``trial_seed(master, index)``
and never share generator state across trials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GroundTruth, RegressionInstance

DESIGN_GAUSSIAN = "gaussian_iid"
DESIGN_TOEPLITZ = "toeplitz_correlated"
DESIGNS = (DESIGN_GAUSSIAN, DESIGN_TOEPLITZ)

_MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class SyntheticSpec:
    """Everything needed to regenerate one instance bit for bit."""

    n: int
    p: int
    s0: int
    sigma: float
    design: str = DESIGN_GAUSSIAN
    rho: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be positive")
        if not (0 <= self.s0 <= self.p):
            raise ValueError(f"s0 must lie in [0, p], got s0={self.s0}, p={self.p}")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if self.design not in DESIGNS:
            raise ValueError(f"unknown design {self.design!r}; choose from {DESIGNS}")
        if not (0 <= self.rho < 1):
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        if not (0 <= self.seed <= _MAX_SEED):
            raise ValueError("seed must fit in an unsigned 64-bit integer")


def rng_for_seed(seed: int) -> np.random.Generator:
    """Philox stream for one instance; key = (seed, 0)."""
    return np.random.Generator(np.random.Philox(key=[seed, 0]))


def trial_seed(master_seed: int, trial_index: int) -> int:
    """Child seed for one Monte Carlo trial, derived from (master, index)."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index,))
    return int(ss.generate_state(1, np.uint64)[0])


def gen_signal(p: int, s0: int, rng: np.random.Generator) -> np.ndarray:
    """Sparse signal: s0 uniform positions, values +-1 * (1 + N(0,1)).

    A value that lands on exactly 0.0 in floating point is redrawn so the
    support size is exactly s0.
    """
    if not (0 <= s0 <= p):
        raise ValueError(f"s0 must lie in [0, p], got s0={s0}, p={p}")
    beta = np.zeros(p)
    if s0 == 0:
        return beta
    support = rng.choice(p, size=s0, replace=False)
    signs = rng.integers(0, 2, size=s0) * 2 - 1
    values = signs * (1.0 + rng.standard_normal(s0))
    for k in range(s0):
        while values[k] == 0.0:
            sgn = rng.integers(0, 2) * 2 - 1
            values[k] = sgn * (1.0 + rng.standard_normal())
    beta[support] = values
    return beta


def _toeplitz_cholesky(p: int, rho: float) -> np.ndarray:
    idx = np.arange(p)
    cov = rho ** np.abs(idx[:, None] - idx[None, :])
    return np.linalg.cholesky(cov)


def gen_instance(spec: SyntheticSpec) -> tuple[RegressionInstance, GroundTruth]:
    """Instance plus ground truth, fully determined by the spec.

    Draw order is fixed: signal, then design, then noise.
    """
    rng = rng_for_seed(spec.seed)
    beta = gen_signal(spec.p, spec.s0, rng)
    z = rng.standard_normal((spec.n, spec.p))
    if spec.design == DESIGN_GAUSSIAN:
        X = z
    else:
        L = _toeplitz_cholesky(spec.p, spec.rho)
        X = z @ L.T
    y = X @ beta + spec.sigma * rng.standard_normal(spec.n)
    instance = RegressionInstance(X, y)
    truth = GroundTruth(beta=beta, s0=int(np.count_nonzero(beta)), sigma=spec.sigma)
    return instance, truth


def write_instance(path, instance: RegressionInstance, truth: GroundTruth, seed: int) -> None:
    """Text export: header ``n p s0 sigma seed``, then X rows, then y, then beta.

    Floats are printed with shortest round-trip representation, so reading
    the file back reproduces the arrays exactly.
    """
    with open(path, "w") as fh:
        fh.write(f"{instance.n} {instance.p} {truth.s0} {float(truth.sigma)!r} {seed}\n")
        for row in instance.x:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")
        fh.write(" ".join(repr(float(v)) for v in instance.y) + "\n")
        fh.write(" ".join(repr(float(v)) for v in truth.beta) + "\n")


def read_instance(path) -> tuple[RegressionInstance, GroundTruth, int]:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 5:
            raise ValueError(f"malformed instance header in {path}")
        n, p, s0 = int(header[0]), int(header[1]), int(header[2])
        sigma, seed = float(header[3]), int(header[4])
        X = np.empty((n, p))
        for i in range(n):
            row = np.array(fh.readline().split(), dtype=np.float64)
            if row.shape[0] != p:
                raise ValueError(f"row {i} has {row.shape[0]} entries, expected {p}")
            X[i] = row
        y = np.array(fh.readline().split(), dtype=np.float64)
        beta = np.array(fh.readline().split(), dtype=np.float64)
    if y.shape[0] != n or beta.shape[0] != p:
        raise ValueError(f"malformed instance body in {path}")
    instance = RegressionInstance(X, y)
    truth = GroundTruth(beta=beta, s0=s0, sigma=sigma)
    return instance, truth, seed
