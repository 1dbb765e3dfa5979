"""Normalized Frobenius error, support F1 and percentile summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import threshold_support


@dataclass(frozen=True)
class MetricsReport:
    nfe_w: float
    nfe_a: float
    f1_w: float
    f1_a: float
    precision_w: float
    recall_w: float
    precision_a: float
    recall_a: float

    def as_dict(self) -> dict[str, float]:
        return dict(self.__dict__)


def nfe(estimate, truth) -> float:
    """``||truth - estimate||_F^2 / ||truth||_F^2``."""
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise ValueError(f"shape mismatch: {estimate.shape} vs {truth.shape}")
    ref = float(np.sum(truth**2))
    if ref == 0:
        raise ValueError("NFE undefined for zero reference")
    return float(np.sum((truth - estimate) ** 2)) / ref


def support_f1(estimate, truth, tau: float = 0.0, offdiag: bool = False) -> tuple[float, float, float]:
    """(f1, precision, recall) of the thresholded supports.

    ``offdiag=True`` ignores diagonal positions (self-loops cannot occur in W).
    Empty denominators give 0.
    """
    est = threshold_support(estimate, tau)
    tru = threshold_support(truth, tau)
    if est.shape != tru.shape:
        raise ValueError(f"shape mismatch: {est.shape} vs {tru.shape}")
    if offdiag:
        keep = ~np.eye(est.shape[0], dtype=bool)
        est, tru = est[keep], tru[keep]
    tp = int(np.sum(est & tru))
    fp = int(np.sum(est & ~tru))
    fn = int(np.sum(~est & tru))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return f1, precision, recall


def evaluate(w_hat, a_hat, w_true, a_true, tau: float = 0.05) -> MetricsReport:
    """All metrics for one estimate; lag matrices are compared in stacked form, lags pooled."""
    f1_w, p_w, r_w = support_f1(w_hat, w_true, tau, offdiag=True)
    a_hat = np.asarray(a_hat, dtype=float)
    a_true = np.asarray(a_true, dtype=float)
    if a_true.size:
        f1_a, p_a, r_a = support_f1(a_hat, a_true, tau)
        nfe_a = nfe(a_hat, a_true) if np.any(a_true) else float("nan")
    else:
        f1_a = p_a = r_a = nfe_a = float("nan")
    return MetricsReport(nfe(w_hat, w_true), nfe_a, f1_w, f1_a, p_w, r_w, p_a, r_a)


def aggregate(values) -> tuple[float, float, float]:
    """(median, 25th, 75th percentile) with linear interpolation between order statistics."""
    v = np.asarray(list(values), dtype=float)
    if v.size == 0:
        raise ValueError("cannot aggregate an empty list")
    p25, med, p75 = np.percentile(v, [25, 50, 75], method="linear")
    return float(med), float(p25), float(p75)
