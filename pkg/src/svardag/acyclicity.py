"""Log-det acyclicity function for non-negative weight matrices.

For ``W >= 0`` and ``rho(W) < s`` the matrix ``sI - W`` is a nonsingular
M-matrix. All quantities here come from one LU factorization of it: the
domain test (all pivots positive), ``h`` (sum of log pivots) and the gradient
``(sI - W)^{-T}`` (triangular solves against the factors).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve


class DomainError(ValueError):
    """Raised when ``rho(W) >= s`` or W has negative entries."""


@dataclass(frozen=True)
class AcyclicityParams:
    s: float = 1.0

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError("spectral bound s must be positive")


@dataclass(frozen=True, eq=False)
class MMatrixLU:
    """LU factors of ``sI - W`` in scipy's ``lu_factor`` layout."""

    lu: np.ndarray
    piv: np.ndarray
    s: float

    @property
    def pivots(self) -> np.ndarray:
        return np.diag(self.lu)

    def h(self) -> float:
        n = self.lu.shape[0]
        return max(n * np.log(self.s) - float(np.sum(np.log(self.pivots))), 0.0)

    def grad(self) -> np.ndarray:
        n = self.lu.shape[0]
        return lu_solve((self.lu, self.piv), np.eye(n), trans=1, check_finite=False)


def _lu_nopivot(m: np.ndarray) -> np.ndarray | None:
    """Doolittle LU without row exchanges; None as soon as a pivot is not positive."""
    a = m.copy()
    n = a.shape[0]
    for k in range(n):
        pivot = a[k, k]
        if not pivot > 0:
            return None
        if k + 1 < n:
            a[k + 1:, k] /= pivot
            a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a


def factor(w: np.ndarray, s: float = 1.0) -> MMatrixLU | None:
    """Factor ``sI - W``; returns None when ``rho(W) >= s``.

    A Z-matrix is a nonsingular M-matrix iff its unpivoted LU has only positive
    pivots. LAPACK's partially pivoted factorization is tried first; if it
    performed no row exchange its pivots are the unpivoted ones. Otherwise the
    unpivoted factorization is computed directly.
    """
    w = np.asarray(w, dtype=float)
    n = w.shape[0]
    m = s * np.eye(n) - w
    lu, piv = lu_factor(m, check_finite=False)
    identity = np.arange(n)
    if not np.array_equal(piv, identity):
        lu = _lu_nopivot(m)
        if lu is None:
            return None
        piv = identity
    if not (np.all(np.isfinite(lu)) and np.all(np.diag(lu) > 0)):
        return None
    return MMatrixLU(lu, piv, s)


def _checked(w, s) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {w.shape}")
    if not s > 0:
        raise ValueError("spectral bound s must be positive")
    if np.any(w < 0):
        raise DomainError("domain requires non-negative weights")
    return w


def in_domain(w: np.ndarray, s: float = 1.0) -> bool:
    """True iff ``rho(w) < s`` for non-negative ``w``."""
    return factor(_checked(w, s), s) is not None


def _factor_or_raise(w, s) -> MMatrixLU:
    f = factor(_checked(w, s), s)
    if f is None:
        raise DomainError("spectral radius not below s")
    return f


def h_value(w: np.ndarray, s: float = 1.0) -> float:
    """``n log s - log det(sI - W)``; zero exactly on DAG supports."""
    return _factor_or_raise(w, s).h()


def h_gradient(w: np.ndarray, s: float = 1.0) -> np.ndarray:
    return _factor_or_raise(w, s).grad()


def h_value_and_gradient(w: np.ndarray, s: float = 1.0) -> tuple[float, np.ndarray]:
    f = _factor_or_raise(w, s)
    return f.h(), f.grad()
