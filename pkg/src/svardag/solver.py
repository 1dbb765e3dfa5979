"""Method of multipliers around an accelerated projected-gradient inner solver.

The outer loop follows the usual augmented-Lagrangian recipe::

    (W, A) <- argmin_{W >= 0, A >= 0} L_c(W, A, alpha)
    alpha  <- alpha + c * h(W)
    c      <- beta * c   if h(W_new) > gamma * h(W_old)

after which small weights are thresholded and any surviving cycle in the
support is broken by deleting its lightest edge.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import acyclicity
from .model import DagWeights, LaggedDesign, LaggedWeights, is_dag, threshold_support
from .objective import LeastSquaresFit, MultiplierState, Penalties

log = logging.getLogger(__name__)

CONVERGED = "converged"
MAX_OUTER_REACHED = "max_outer_reached"


@dataclass(frozen=True)
class SolverConfig:
    s: float = 1.0
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
    signed_a: bool = False
    seed: int = 0
    accelerate: bool = True
    init_step: float = 1.0
    backtrack: float = 0.5
    armijo: float = 1e-4

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError("s must be positive")
        if self.lambda_w < 0 or self.lambda_a < 0:
            raise ValueError("penalties must be non-negative")
        if not self.beta > 1:
            raise ValueError("beta must exceed 1")
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must lie in (0, 1)")
        if not (self.h_tol > 0 and self.inner_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.tau < 0:
            raise ValueError("tau must be non-negative")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration budgets must be positive")
        if self.alpha0 < 0 or not self.c0 > 0:
            raise ValueError("need alpha0 >= 0 and c0 > 0")
        if not (0 < self.backtrack < 1 and self.init_step > 0 and 0 < self.armijo < 1):
            raise ValueError("invalid line-search parameters")

    @property
    def penalties(self) -> Penalties:
        return Penalties(self.lambda_w, self.lambda_a)

    def replace(self, **kw) -> "SolverConfig":
        return SolverConfig(**{**asdict(self), **kw})


@dataclass(frozen=True)
class OuterRecord:
    score: float
    h: float
    alpha: float
    c: float
    inner_iterations: int


@dataclass(eq=False)
class SolverResult:
    """Thresholded DAG estimate ``w_hat``, stacked lag estimate ``a_hat`` and diagnostics.

    ``h_final`` is the acyclicity value of ``w_raw``, i.e. before thresholding.
    """

    w_hat: np.ndarray
    a_hat: np.ndarray
    h_final: float
    objective_trace: list[OuterRecord]
    termination: str
    w_raw: np.ndarray | None = None
    removed_edges: list[tuple[int, int]] = field(default_factory=list)

    @property
    def outer_iterations(self) -> int:
        return len(self.objective_trace)

    @property
    def dag_weights(self) -> DagWeights:
        return DagWeights(self.w_hat)

    @property
    def lagged_weights(self) -> LaggedWeights:
        return LaggedWeights.from_stacked(self.a_hat, self.w_hat.shape[0])


# --- inner solver ---------------------------------------------------------

Acyc = Callable[[np.ndarray], "tuple[float, np.ndarray] | None"]
Prox = Callable[[np.ndarray, float], np.ndarray]


class _Lagrangian:
    """Smooth part ``LS + alpha h + c/2 h^2`` plus a separable penalty with a prox."""

    def __init__(self, fit: LeastSquaresFit, acyc: Acyc, penalty: Callable, prox: Prox,
                 alpha: float, c: float):
        self.fit, self.acyc, self.penalty, self.prox = fit, acyc, penalty, prox
        self.alpha, self.c, self.n = alpha, c, fit.n

    def evaluate(self, theta):
        """Return (h, grad_h, ls_grad) at theta, or None outside the domain."""
        hg = self.acyc(theta[:self.n])
        if hg is None:
            return None
        return hg[0], hg[1], self.fit.grad(theta)

    def total(self, ls, h, theta):
        return ls + self.penalty(theta) + self.alpha * h + 0.5 * self.c * h * h

    def smooth_grad(self, h, gh, gls):
        g = gls.copy()
        g[:self.n] += (self.alpha + self.c * h) * gh
        return g


def proximal_descent(lag: _Lagrangian, theta0: np.ndarray, cfg: SolverConfig,
                     trace: list | None = None) -> tuple[np.ndarray, int]:
    """Minimise ``lag`` from ``theta0`` with backtracking (accelerated) proximal gradient.

    Every accepted iterate satisfies ``F(x+) <= F(y) - (armijo / t) ||x+ - y||^2``
    at the extrapolated point y, and momentum is restarted whenever the
    objective would increase, so ``F`` is non-increasing along the returned path.
    Trial points outside the domain of the acyclicity term count as failed
    line-search steps.
    """
    fit = lag.fit
    x = theta0.copy()
    ev = lag.evaluate(x)
    if ev is None:
        raise acyclicity.DomainError("infeasible warm start")
    h_x, gh_x, gls_x = ev
    ls_x = fit.value(x)
    f_x = lag.total(ls_x, h_x, x)
    if trace is not None:
        trace.append(f_x)
    x_prev = x
    k_mom = 1
    t = cfg.init_step
    it = 0
    while it < cfg.max_inner:
        it += 1
        # extrapolated point, projected back onto the feasible set
        y, h_y, gh_y, gls_y, ls_y = x, h_x, gh_x, gls_x, ls_x
        if cfg.accelerate and k_mom > 1:
            mom = (k_mom - 1) / (k_mom + 2)
            y_try = lag.prox(x + mom * (x - x_prev), 0.0)
            ev = lag.evaluate(y_try)
            if ev is not None:
                y = y_try
                h_y, gh_y, gls_y = ev
                ls_y = ls_x + fit.change(y, x, gls_x)
        f_y = lag.total(ls_y, h_y, y)
        g_y = lag.smooth_grad(h_y, gh_y, gls_y)

        t = min(cfg.init_step, t / cfg.backtrack)
        while True:
            x_new = lag.prox(y - t * g_y, t)
            d2 = float(np.sum((x_new - y) ** 2))
            if d2 == 0.0:
                break
            ev = lag.evaluate(x_new)
            if ev is not None:
                ls_new = ls_y + fit.change(x_new, y, gls_y)
                f_new = lag.total(ls_new, ev[0], x_new)
                if f_new <= f_y - cfg.armijo / t * d2:
                    break
            t *= cfg.backtrack
            if t < 1e-30:
                d2 = 0.0
                break

        if d2 == 0.0 or f_new > f_x:
            if y is not x:
                # non-monotone or stalled extrapolation: restart momentum from x
                k_mom = 1
                x_prev = x
                it -= 1
                continue
            break

        decrease = f_x - f_new
        x_prev, x = x, x_new
        h_x, gh_x, gls_x = ev
        ls_x, f_x = ls_new, f_new
        k_mom += 1
        if trace is not None:
            trace.append(f_x)
        # per unit step, so stiff late subproblems (tiny t) are not mistaken for converged ones
        if decrease / t <= cfg.inner_tol * max(abs(f_x), 1e-300):
            break
    return x, it


def _nonneg_prox(n: int, lam_w: float, lam_a: float, signed_a: bool) -> Prox:
    def prox(v, t):
        out = np.empty_like(v)
        np.maximum(v[:n] - t * lam_w, 0.0, out=out[:n])
        np.fill_diagonal(out[:n], 0.0)
        lag = v[n:]
        if signed_a:
            out[n:] = np.sign(lag) * np.maximum(np.abs(lag) - t * lam_a, 0.0)
        else:
            np.maximum(lag - t * lam_a, 0.0, out=out[n:])
        return out
    return prox


def _nonneg_penalty(n: int, lam_w: float, lam_a: float, signed_a: bool):
    def penalty(theta):
        a = theta[n:]
        return lam_w * float(theta[:n].sum()) + lam_a * float(np.abs(a).sum() if signed_a else a.sum())
    return penalty


def _logdet_acyc(s: float) -> Acyc:
    def acyc(w):
        f = acyclicity.factor(w, s)
        if f is None:
            return None
        return f.h(), f.grad()
    return acyc


def _build_lagrangian(design: LaggedDesign, pen: Penalties, mult: MultiplierState, cfg: SolverConfig):
    n = design.n
    return _Lagrangian(
        LeastSquaresFit(design),
        _logdet_acyc(cfg.s),
        _nonneg_penalty(n, pen.lambda_w, pen.lambda_a, cfg.signed_a),
        _nonneg_prox(n, pen.lambda_w, pen.lambda_a, cfg.signed_a),
        mult.alpha,
        mult.c,
    )


def inner_minimize(w0, a0, design: LaggedDesign, pen: Penalties, mult: MultiplierState,
                   cfg: SolverConfig, trace: list | None = None):
    """Approximately minimise the augmented Lagrangian over ``W >= 0`` (and ``A >= 0``).

    Returns ``(w, a, iterations)``. Pass a list as ``trace`` to collect the
    objective value after every accepted step.
    """
    n = design.n
    w0 = np.asarray(w0, dtype=float)
    a0 = np.asarray(a0, dtype=float).reshape(-1, n)
    if np.any(w0 < 0) or (not cfg.signed_a and np.any(a0 < 0)):
        raise acyclicity.DomainError("infeasible warm start")
    if acyclicity.factor(w0, cfg.s) is None:
        raise acyclicity.DomainError("infeasible warm start")
    lag = _build_lagrangian(design, pen, mult, cfg)
    theta, it = proximal_descent(lag, np.vstack([w0, a0]), cfg, trace)
    return theta[:n].copy(), theta[n:].copy(), it


# --- outer loop -------------------------------------------------------------

def multiplier_update(alpha: float, c: float, h_new: float) -> float:
    return alpha + c * h_new


def penalty_update(c: float, h_new: float, h_old: float, beta: float, gamma: float) -> float:
    return beta * c if h_new > gamma * h_old else c


def _find_cycle(support: np.ndarray) -> list[int] | None:
    """Return the nodes of some directed cycle, or None."""
    n = support.shape[0]
    color = np.zeros(n, dtype=int)  # 0 new, 1 on stack, 2 done
    parent = [-1] * n
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(np.flatnonzero(support[root])))]
        color[root] = 1
        while stack:
            node, children = stack[-1]
            for ch in children:
                ch = int(ch)
                if color[ch] == 0:
                    color[ch] = 1
                    parent[ch] = node
                    stack.append((ch, iter(np.flatnonzero(support[ch]))))
                    break
                if color[ch] == 1:
                    cycle = [node]
                    while cycle[-1] != ch:
                        cycle.append(parent[cycle[-1]])
                    return cycle[::-1]
            else:
                color[node] = 2
                stack.pop()
    return None


def break_cycles(w: np.ndarray) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Delete the lightest edge of a remaining cycle until the support is acyclic."""
    w = w.copy()
    removed = []
    while True:
        cycle = _find_cycle(w != 0)
        if cycle is None:
            return w, removed
        edges = list(zip(cycle, cycle[1:] + cycle[:1]))
        i, j = min(edges, key=lambda e: abs(w[e]))
        w[i, j] = 0.0
        removed.append((i, j))


def finalize(w: np.ndarray, a: np.ndarray, h_final: float, trace, termination, tau) -> SolverResult:
    w_thr = np.where(threshold_support(w, tau), w, 0.0)
    np.fill_diagonal(w_thr, 0.0)
    w_dag, removed = break_cycles(w_thr)
    if removed:
        log.info("removed %d edge(s) to break residual cycles", len(removed))
    assert is_dag(w_dag != 0)
    return SolverResult(
        w_hat=w_dag,
        a_hat=a.copy(),
        h_final=h_final,
        objective_trace=trace,
        termination=termination,
        w_raw=w,
        removed_edges=removed,
    )


def method_of_multipliers(design: LaggedDesign, cfg: SolverConfig, make_lagrangian, h_of) -> SolverResult:
    """Shared outer loop; ``make_lagrangian(alpha, c)`` builds each subproblem."""
    n = design.n
    theta = np.zeros((n + design.y.shape[0], n))
    alpha, c = cfg.alpha0, cfg.c0
    # the starting point is not a subproblem solution, so the first update never grows c
    h_old = np.inf
    trace: list[OuterRecord] = []
    termination = MAX_OUTER_REACHED
    h_new = h_of(theta[:n])
    for k in range(cfg.max_outer):
        lag = make_lagrangian(alpha, c)
        theta, inner_its = proximal_descent(lag, theta, cfg)
        h_new = h_of(theta[:n])
        sc = lag.fit.value(theta) + lag.penalty(theta)
        trace.append(OuterRecord(sc, h_new, alpha, c, inner_its))
        log.debug("outer %d: score=%.6g h=%.3e alpha=%.3g c=%.3g inner=%d", k, sc, h_new, alpha, c, inner_its)
        if h_new <= cfg.h_tol:
            termination = CONVERGED
            break
        alpha = multiplier_update(alpha, c, h_new)
        c = penalty_update(c, h_new, h_old, cfg.beta, cfg.gamma)
        h_old = h_new
    return finalize(theta[:n], theta[n:], h_new, trace, termination, cfg.tau)


def learn(design: LaggedDesign, cfg: SolverConfig | None = None) -> SolverResult:
    """Estimate non-negative instantaneous DAG weights and lag matrices from ``design``."""
    cfg = cfg or SolverConfig()
    pen = cfg.penalties

    def make(alpha, c):
        return _build_lagrangian(design, pen, MultiplierState(alpha, c), cfg)

    return method_of_multipliers(design, cfg, make, lambda w: acyclicity.h_value(w, cfg.s))
