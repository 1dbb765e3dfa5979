"""Synthetic SVAR benchmarks: random ER DAGs, decaying lag matrices, forward simulation."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .model import DagWeights, LaggedWeights, TimeSeries, is_dag

MAX_ATTEMPTS = 20
STABILITY_BOUND = 0.99


class UnstableProcessError(RuntimeError):
    pass


@dataclass(frozen=True)
class SvarmSpec:
    n: int = 50
    p: int = 2
    t: int = 5000
    avg_degree_w: float = 4.0
    avg_degree_a: float = 1.0
    weight_low: float = 0.1
    weight_high: float = 0.5
    decay_rate: float = 1.5
    noise_sigma: float = 1.0
    burn_in: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two nodes")
        if self.p < 0:
            raise ValueError("lag order must be non-negative")
        if self.t < self.p + 1:
            raise ValueError("need t >= p + 1 samples")
        if not 0 < self.weight_low <= self.weight_high:
            raise ValueError("need 0 < weight_low <= weight_high")
        if self.noise_sigma < 0 or self.burn_in < 0:
            raise ValueError("noise_sigma and burn_in must be non-negative")

    def replace(self, **kw) -> "SvarmSpec":
        return SvarmSpec(**{**asdict(self), **kw})


@dataclass(frozen=True, eq=False)
class GroundTruth:
    w_true: DagWeights
    a_true: LaggedWeights
    x: TimeSeries
    z: np.ndarray  # noise realisation aligned with x
    companion_radius: float


def gen_er_dag(n: int, avg_degree: float, weight_range: tuple[float, float],
               rng: np.random.Generator) -> DagWeights:
    """Lower-triangular ER graph with edge probability d/(n-1), relabelled by a random permutation."""
    if avg_degree < 0 or avg_degree > n - 1:
        raise ValueError(f"average degree {avg_degree} too large for {n} nodes")
    prob = avg_degree / (n - 1)
    mask = np.tril(rng.random((n, n)) < prob, k=-1)
    weights = rng.uniform(weight_range[0], weight_range[1], size=(n, n))
    w = np.where(mask, weights, 0.0)
    perm = rng.permutation(n)
    w = w[np.ix_(perm, perm)]
    return DagWeights(w)


def gen_lagged(n: int, p: int, avg_degree: float, weight_range: tuple[float, float],
               decay_rate: float, rng: np.random.Generator) -> LaggedWeights:
    """p ER matrices (self-lags allowed) with edge probability d/(2n), scaled by exp(-decay*q)."""
    prob = min(avg_degree / (2 * n), 1.0)
    mats = []
    for q in range(1, p + 1):
        mask = rng.random((n, n)) < prob
        weights = rng.uniform(weight_range[0], weight_range[1], size=(n, n))
        mats.append(np.where(mask, weights, 0.0) * np.exp(-decay_rate * q))
    return LaggedWeights(tuple(mats), n)


def companion_radius(w: np.ndarray, lags: LaggedWeights) -> float:
    """Spectral radius of the lag-1 companion form of the reduced-form VAR."""
    n, p = w.shape[0], lags.p
    if p == 0:
        return 0.0
    inv = np.linalg.inv(np.eye(n) - w.T)
    comp = np.zeros((n * p, n * p))
    for q, a in enumerate(lags.mats):
        comp[:n, q * n:(q + 1) * n] = inv @ a.T
    comp[n:, :-n] = np.eye(n * (p - 1))
    return float(np.max(np.abs(np.linalg.eigvals(comp))))


def forward(w: np.ndarray, lags: LaggedWeights, z: np.ndarray) -> np.ndarray:
    """Run ``x_t = (I - W^T)^{-1} (sum_q A_q^T x_{t-q} + z_t)`` from zero initial lags."""
    n, total = z.shape
    p = lags.p
    lu = lu_factor(np.eye(n) - w.T)
    x = np.zeros((n, total + p))
    a_t = [a.T for a in lags.mats]
    for t in range(total):
        rhs = z[:, t].copy()
        for q in range(p):
            rhs += a_t[q] @ x[:, p + t - q - 1]
        x[:, p + t] = lu_solve(lu, rhs)
    return x[:, p:]


def simulate_svarm(spec: SvarmSpec) -> GroundTruth:
    rng = np.random.default_rng(spec.seed)
    wr = (spec.weight_low, spec.weight_high)
    for _ in range(MAX_ATTEMPTS):
        w = gen_er_dag(spec.n, spec.avg_degree_w, wr, rng)
        lags = gen_lagged(spec.n, spec.p, spec.avg_degree_a, wr, spec.decay_rate, rng)
        rad = companion_radius(w.w, lags)
        if rad < STABILITY_BOUND:
            break
    else:
        raise UnstableProcessError("unstable process specification")
    assert is_dag(w.w != 0)
    total = spec.t + spec.burn_in
    z = spec.noise_sigma * rng.standard_normal((spec.n, total))
    x = forward(w.w, lags, z)
    return GroundTruth(w, lags, TimeSeries(x[:, spec.burn_in:]), z[:, spec.burn_in:], rad)
