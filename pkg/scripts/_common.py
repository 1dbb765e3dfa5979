"""Shared driver for the sweep scripts."""

import argparse
import sys
import time

from svardag.benchmark import BenchmarkPlan, run_benchmark
from svardag.metrics import aggregate
from svardag.simulate import SvarmSpec
from svardag.solver import SolverConfig


def run(sweep, values, spec, description, show=("nfe_w", "nfe_a", "f1_w")):
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--values", default=",".join(map(str, values)))
    ap.add_argument("--realizations", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--methods", default="cvx")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=f"{sweep}_sweep.csv")
    args = ap.parse_args()
    plan = BenchmarkPlan(sweep, tuple(int(v) for v in args.values.split(",")), args.realizations,
                         spec.replace(seed=args.seed), SolverConfig(), tuple(args.methods.split(",")))
    t0 = time.perf_counter()
    text, records = run_benchmark(plan, jobs=args.jobs)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    for method in plan.methods:
        for value in plan.sweep_values:
            ok = [r for r in records if r.method == method and r.value == value and r.metrics]
            cells = []
            for metric in show:
                med, p25, p75 = aggregate(getattr(r.metrics, metric) for r in ok) if ok else (float("nan"),) * 3
                cells.append(f"{metric}={med:.4f} [{p25:.4f}, {p75:.4f}]")
            print(f"{method:8s} {sweep}={value:<6d} " + "  ".join(cells))
    print(f"wrote {args.out} in {time.perf_counter() - t0:.0f}s", file=sys.stderr)
