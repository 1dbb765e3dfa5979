"""DYNOTEARS-style comparison method.

Same least-squares score, l1 penalties and multiplier loop as :mod:`svardag.solver`,
but with signed weights and the non-convex constraint ``tr(exp(W o W)) - n``.
The inner problem is solved with the same accelerated proximal-gradient routine
(soft-thresholding instead of the non-negative projection); this is not a
port of the reference implementation and its L-BFGS-B optimiser.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .model import LaggedDesign
from .objective import LeastSquaresFit
from .solver import SolverConfig, SolverResult, _Lagrangian, method_of_multipliers

_TAYLOR_TOL = 1e-17
_MAX_TERMS = 40


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a truncated Taylor series."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    norm = np.linalg.norm(a, 1)
    squarings = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    b = a / 2.0**squarings
    term = np.eye(n)
    total = np.eye(n)
    for k in range(1, _MAX_TERMS):
        term = term @ b / k
        total += term
        if np.linalg.norm(term, 1) <= _TAYLOR_TOL * np.linalg.norm(total, 1):
            break
    for _ in range(squarings):
        total = total @ total
    return total


def h_notears(w: np.ndarray) -> float:
    w = np.asarray(w, dtype=float)
    return max(float(np.trace(expm(w * w))) - w.shape[0], 0.0)


def h_notears_gradient(w: np.ndarray) -> np.ndarray:
    """``exp(W o W)^T o 2W``; identically zero on every DAG-supported W."""
    w = np.asarray(w, dtype=float)
    return expm(w * w).T * (2.0 * w)


@dataclass(frozen=True)
class BaselineConfig:
    lambda_w: float = 0.01
    lambda_a: float = 0.01
    alpha0: float = 0.0
    c0: float = 1.0
    beta: float = 10.0
    gamma: float = 0.25
    max_outer: int = 20
    h_tol: float = 1e-8
    inner_tol: float = 1e-7
    max_inner: int = 5000
    tau: float = 0.05
    seed: int = 0
    accelerate: bool = True
    init_step: float = 1.0
    backtrack: float = 0.5
    armijo: float = 1e-4

    def __post_init__(self):
        # reuse the solver's validation
        SolverConfig(**asdict(self))

    @classmethod
    def from_solver(cls, cfg: SolverConfig) -> "BaselineConfig":
        fields = asdict(cfg)
        fields.pop("s")
        fields.pop("signed_a")
        return cls(**fields)


def _notears_acyc(w):
    # far-off line-search trials may overflow; they are rejected as infeasible
    with np.errstate(over="ignore", invalid="ignore"):
        e = expm(w * w)
        h = float(np.trace(e)) - w.shape[0]
    if not np.isfinite(h):
        return None
    return max(h, 0.0), e.T * (2.0 * w)


def _soft_prox(n: int, lam_w: float, lam_a: float):
    def prox(v, t):
        thr = np.empty_like(v)
        thr[:n] = t * lam_w
        thr[n:] = t * lam_a
        out = np.sign(v) * np.maximum(np.abs(v) - thr, 0.0)
        np.fill_diagonal(out[:n], 0.0)
        return out
    return prox


def _l1(n: int, lam_w: float, lam_a: float):
    def penalty(theta):
        return lam_w * float(np.abs(theta[:n]).sum()) + lam_a * float(np.abs(theta[n:]).sum())
    return penalty


def learn_baseline(design: LaggedDesign, cfg: BaselineConfig | SolverConfig | None = None) -> SolverResult:
    """Fit signed (W, A) under the trace-exponential constraint; output is thresholded like ``learn``."""
    if cfg is None:
        cfg = BaselineConfig()
    elif isinstance(cfg, SolverConfig):
        cfg = BaselineConfig.from_solver(cfg)
    n = design.n
    fit = LeastSquaresFit(design)
    prox = _soft_prox(n, cfg.lambda_w, cfg.lambda_a)
    penalty = _l1(n, cfg.lambda_w, cfg.lambda_a)

    def make(alpha, c):
        return _Lagrangian(fit, _notears_acyc, penalty, prox, alpha, c)

    return method_of_multipliers(design, cfg, make, h_notears)
