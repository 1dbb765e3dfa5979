"""Least-squares score, augmented Lagrangian and their gradients in (W, A).

``a`` is always the stacked ``(n*p, n)`` lag matrix. The data-fit divisor is
the effective sample count ``m = T - p`` of the lagged design.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .acyclicity import h_value_and_gradient
from .model import LaggedDesign


@dataclass(frozen=True)
class Penalties:
    lambda_w: float = 0.0
    lambda_a: float = 0.0

    def __post_init__(self):
        if self.lambda_w < 0 or self.lambda_a < 0:
            raise ValueError("penalties must be non-negative")


@dataclass(frozen=True)
class MultiplierState:
    alpha: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("multiplier alpha must be non-negative")
        if self.c < 0:
            raise ValueError("penalty parameter c must be non-negative")


def _check_shapes(w, a, design: LaggedDesign):
    n = design.n
    w = np.asarray(w, dtype=float)
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        a = a.reshape(0, n)
    if w.shape != (n, n):
        raise ValueError(f"shape mismatch: w is {w.shape}, expected {(n, n)}")
    if a.shape != (design.y.shape[0], n):
        raise ValueError(f"shape mismatch: a is {a.shape}, expected {(design.y.shape[0], n)}")
    return w, a


def residual(w, a, design: LaggedDesign) -> np.ndarray:
    """``X_eff - W^T X_eff - A^T Y``."""
    w, a = _check_shapes(w, a, design)
    return design.x_eff - w.T @ design.x_eff - a.T @ design.y


def l1_penalty(w, a, pen: Penalties, signed_a: bool = False) -> float:
    a_sum = np.abs(a).sum() if signed_a else a.sum()
    return pen.lambda_w * float(w.sum()) + pen.lambda_a * float(a_sum)


def score(w, a, design: LaggedDesign, pen: Penalties, signed_a: bool = False) -> float:
    w, a = _check_shapes(w, a, design)
    r = residual(w, a, design)
    return 0.5 * float(np.sum(r * r)) / design.m + l1_penalty(w, a, pen, signed_a)


def lagrangian_value(w, a, design: LaggedDesign, pen: Penalties, mult: MultiplierState,
                     s: float = 1.0, signed_a: bool = False) -> float:
    """score + alpha * h(W) + (c / 2) * h(W)^2."""
    h, _ = h_value_and_gradient(w, s)
    return score(w, a, design, pen, signed_a) + mult.alpha * h + 0.5 * mult.c * h * h


def lagrangian_gradients(w, a, design: LaggedDesign, pen: Penalties, mult: MultiplierState,
                         s: float = 1.0, signed_a: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Gradients of :func:`lagrangian_value` with respect to W and the stacked A.

    In signed mode the subgradient of ``|A_kl|`` at zero is taken as 0.
    """
    w, a = _check_shapes(w, a, design)
    r = residual(w, a, design)
    m = design.m
    h, gh = h_value_and_gradient(w, s)
    grad_w = -(design.x_eff @ r.T) / m + pen.lambda_w + (mult.alpha + mult.c * h) * gh
    lag_pen = pen.lambda_a * np.sign(a) if signed_a else pen.lambda_a
    grad_a = -(design.y @ r.T) / m + lag_pen
    return grad_w, grad_a


class LeastSquaresFit:
    """Gram-matrix form of ``||X_eff - theta^T Z||^2 / (2m)`` with ``theta = [W; A]``.

    The cost of an evaluation does not depend on m. ``change`` returns the exact
    difference between two points given the gradient at the first, which avoids
    cancellation when the fit is nearly perfect.
    """

    def __init__(self, design: LaggedDesign):
        self.szz, self.szx, self.sxx = design.gram()
        self.n = design.n

    def grad(self, theta: np.ndarray) -> np.ndarray:
        return self.szz @ theta - self.szx

    def value(self, theta: np.ndarray) -> float:
        return 0.5 * self.sxx - float(np.sum(theta * self.szx)) + 0.5 * float(np.sum(theta * (self.szz @ theta)))

    def change(self, theta_new: np.ndarray, theta_old: np.ndarray, grad_old: np.ndarray) -> float:
        d = theta_new - theta_old
        return float(np.sum(d * grad_old)) + 0.5 * float(np.sum(d * (self.szz @ d)))
