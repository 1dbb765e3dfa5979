"""Matrix containers, lag-design construction and an exact DAG check."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class DagWeights:
    """Non-negative instantaneous weights; ``w[i, j]`` is the edge i -> j."""

    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"DagWeights must be square, got shape {w.shape}")
        if np.any(w < 0):
            raise ValueError("DagWeights entries must be non-negative")
        if np.any(np.diag(w) != 0):
            raise ValueError("DagWeights diagonal must be zero")
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.w.shape[0]


@dataclass(frozen=True, eq=False)
class LaggedWeights:
    """Lag matrices A_1..A_p, with the stacked (n*p, n) view in ``stacked``."""

    mats: tuple
    n: int

    def __post_init__(self):
        mats = tuple(np.asarray(m, dtype=float) for m in self.mats)
        for m in mats:
            if m.shape != (self.n, self.n):
                raise ValueError(f"lag matrix has shape {m.shape}, expected {(self.n, self.n)}")
        object.__setattr__(self, "mats", mats)

    @property
    def p(self) -> int:
        return len(self.mats)

    @property
    def stacked(self) -> np.ndarray:
        if not self.mats:
            return np.zeros((0, self.n))
        return np.vstack(self.mats)

    @classmethod
    def from_stacked(cls, a: np.ndarray, n: int) -> "LaggedWeights":
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[1] != n or a.shape[0] % n:
            raise ValueError(f"stacked lag matrix has shape {a.shape}, incompatible with n={n}")
        p = a.shape[0] // n
        return cls(tuple(a[q * n:(q + 1) * n] for q in range(p)), n)


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Observations stored node-by-time: column ``t`` of ``x`` is the signal at time t."""

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 2 or x.shape[1] < 1:
            raise ValueError(f"time series must be (n, t) with t >= 1, got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("time series contains non-finite values")
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def t(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True, eq=False)
class LaggedDesign:
    """Lag-aligned pair: current samples ``x_eff`` (n, m) and stacked lags ``y`` (n*p, m)."""

    x_eff: np.ndarray
    y: np.ndarray
    _gram: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.x_eff.shape[0]

    @property
    def m(self) -> int:
        return self.x_eff.shape[1]

    @property
    def p(self) -> int:
        return self.y.shape[0] // self.n

    def gram(self) -> tuple[np.ndarray, np.ndarray, float]:
        """Second moments used by the solvers.

        Returns ``(szz, szx, sxx)`` where ``z = [x_eff; y]``, ``szz = z z^T / m``,
        ``szx = z x_eff^T / m`` and ``sxx = ||x_eff||_F^2 / m``. Cached.
        """
        if "v" not in self._gram:
            z = np.vstack([self.x_eff, self.y])
            m = self.m
            self._gram["v"] = (z @ z.T / m, z @ self.x_eff.T / m, float(np.sum(self.x_eff**2)) / m)
        return self._gram["v"]


def build_lagged_design(x: TimeSeries | np.ndarray, p: int) -> LaggedDesign:
    """Drop the first ``p`` columns of X and stack the ``p`` shifted copies below each other.

    Row block q of ``y`` (0-based) holds the signal lagged by q + 1 steps.
    """
    xs = x.x if isinstance(x, TimeSeries) else np.asarray(x, dtype=float)
    if p < 0:
        raise ValueError("lag order must be non-negative")
    n, t = xs.shape
    if t <= p:
        raise ValueError(f"insufficient samples for lag order: t={t}, p={p}")
    m = t - p
    x_eff = xs[:, p:].copy()
    y = np.empty((n * p, m))
    for q in range(p):
        y[q * n:(q + 1) * n] = xs[:, p - q - 1:p - q - 1 + m]
    return LaggedDesign(x_eff, y)


def is_dag(support: np.ndarray) -> bool:
    """Kahn's algorithm on the boolean adjacency ``support`` (edge i -> j when support[i, j])."""
    s = np.asarray(support, dtype=bool)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("support must be a square matrix")
    n = s.shape[0]
    indeg = s.sum(axis=0).astype(int)
    queue = deque(np.flatnonzero(indeg == 0).tolist())
    seen = 0
    while queue:
        i = queue.popleft()
        seen += 1
        for j in np.flatnonzero(s[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(int(j))
    return seen == n


def threshold_support(w: np.ndarray, tau: float) -> np.ndarray:
    if tau < 0:
        raise ValueError("threshold must be non-negative")
    return np.abs(np.asarray(w)) > tau
