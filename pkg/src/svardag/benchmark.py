"""Paired-seed benchmark sweeps over sample size, node count or lag order."""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baseline import BaselineConfig, learn_baseline
from .metrics import MetricsReport, aggregate, evaluate
from .model import build_lagged_design, is_dag
from .simulate import SvarmSpec, simulate_svarm
from .solver import SolverConfig, learn

log = logging.getLogger(__name__)

HEADER = ("value", "method", "metric", "median", "p25", "p75", "mean_runtime_s")
SWEEP_FIELDS = {"samples": "t", "nodes": "n", "lags": "p"}
METHODS = ("cvx", "baseline")
METRICS = tuple(MetricsReport.__dataclass_fields__)


@dataclass(frozen=True)
class BenchmarkPlan:
    sweep_variable: str
    sweep_values: tuple
    realizations: int = 10
    spec: SvarmSpec = field(default_factory=SvarmSpec)
    solver: SolverConfig = field(default_factory=SolverConfig)
    methods: tuple = ("cvx",)

    def __post_init__(self):
        if self.sweep_variable not in SWEEP_FIELDS:
            raise ValueError(f"sweep variable must be one of {sorted(SWEEP_FIELDS)}")
        vals = tuple(int(v) for v in self.sweep_values)
        if not vals or any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("sweep values must be non-empty and strictly increasing")
        object.__setattr__(self, "sweep_values", vals)
        if self.realizations < 1:
            raise ValueError("need at least one realization")
        if not self.methods or any(m not in METHODS for m in self.methods):
            raise ValueError(f"methods must be a non-empty subset of {METHODS}")

    def spec_for(self, value: int, realization: int) -> SvarmSpec:
        return self.spec.replace(**{SWEEP_FIELDS[self.sweep_variable]: value},
                                 seed=self.spec.seed + realization)


@dataclass
class RunRecord:
    value: int
    method: str
    realization: int
    metrics: MetricsReport | None
    runtime_s: float
    h_final: float = float("nan")
    termination: str = ""
    dag_ok: bool = False
    error: str = ""


def run_method(method: str, design, cfg: SolverConfig):
    if method == "cvx":
        return learn(design, cfg)
    return learn_baseline(design, BaselineConfig.from_solver(cfg))


def _run_one(plan: BenchmarkPlan, value: int, i: int) -> list[RunRecord]:
    out = []
    try:
        gt = simulate_svarm(plan.spec_for(value, i))
        design = build_lagged_design(gt.x, gt.a_true.p)
    except Exception as exc:  # recorded and skipped
        return [RunRecord(value, m, i, None, float("nan"), error=repr(exc)) for m in plan.methods]
    for method in plan.methods:
        try:
            t0 = time.perf_counter()
            res = run_method(method, design, plan.solver)
            dt = time.perf_counter() - t0
            rep = evaluate(res.w_hat, res.a_hat, gt.w_true.w, gt.a_true.stacked, plan.solver.tau)
            out.append(RunRecord(value, method, i, rep, dt, res.h_final, res.termination,
                                 is_dag(res.w_hat != 0)))
        except Exception as exc:
            log.warning("realization %d (%s=%s, %s) failed: %r", i, plan.sweep_variable, value, method, exc)
            out.append(RunRecord(value, method, i, None, float("nan"), error=repr(exc)))
    return out


def _run_one_star(args):
    return _run_one(*args)


def run_records(plan: BenchmarkPlan, jobs: int = 1) -> list[RunRecord]:
    tasks = [(plan, v, i) for v in plan.sweep_values for i in range(plan.realizations)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_one_star, tasks))
    else:
        chunks = [_run_one(*t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (r.value, r.method, r.realization))
    return records


def summarize(plan: BenchmarkPlan, records: list[RunRecord], record_runtime: bool = True) -> list[tuple]:
    """One row per (value, method, metric), sorted by (metric, method, value).

    Cells where at least half the realizations failed are reported as NaN.
    """
    rows = []
    for value in plan.sweep_values:
        for method in plan.methods:
            cell = [r for r in records if r.value == value and r.method == method]
            ok = [r for r in cell if r.metrics is not None]
            valid = len(ok) > 0 and 2 * (len(cell) - len(ok)) < len(cell)
            runtime = float(np.mean([r.runtime_s for r in ok])) if ok and record_runtime else float("nan")
            for metric in METRICS:
                if valid:
                    vals = [getattr(r.metrics, metric) for r in ok]
                    med, p25, p75 = aggregate(vals)
                else:
                    med = p25 = p75 = float("nan")
                rows.append((value, method, metric, med, p25, p75, runtime))
    rows.sort(key=lambda r: (r[2], r[1], r[0]))
    return rows


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def rows_to_csv(rows: list[tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def run_benchmark(plan: BenchmarkPlan, jobs: int = 1, record_runtime: bool = True):
    """Run every cell of ``plan``; returns ``(csv_text, records)``."""
    records = run_records(plan, jobs)
    return rows_to_csv(summarize(plan, records, record_runtime)), records
