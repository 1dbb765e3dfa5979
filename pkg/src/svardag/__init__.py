"""Non-negative DAG and lag-matrix estimation for structural VAR time series."""

from .acyclicity import DomainError, h_gradient, h_value, in_domain
from .baseline import BaselineConfig, h_notears, h_notears_gradient, learn_baseline
from .metrics import MetricsReport, aggregate, evaluate, nfe, support_f1
from .model import (DagWeights, LaggedDesign, LaggedWeights, TimeSeries, build_lagged_design, is_dag,
                    threshold_support)
from .objective import MultiplierState, Penalties, lagrangian_gradients, lagrangian_value, residual, score
from .simulate import GroundTruth, SvarmSpec, simulate_svarm
from .solver import SolverConfig, SolverResult, inner_minimize, learn, multiplier_update, penalty_update

__all__ = [
    "DomainError", "h_gradient", "h_value", "in_domain",
    "BaselineConfig", "h_notears", "h_notears_gradient", "learn_baseline",
    "MetricsReport", "aggregate", "evaluate", "nfe", "support_f1",
    "DagWeights", "LaggedDesign", "LaggedWeights", "TimeSeries", "build_lagged_design", "is_dag",
    "threshold_support",
    "MultiplierState", "Penalties", "lagrangian_gradients", "lagrangian_value", "residual", "score",
    "GroundTruth", "SvarmSpec", "simulate_svarm",
    "SolverConfig", "SolverResult", "inner_minimize", "learn", "multiplier_update", "penalty_update",
]
