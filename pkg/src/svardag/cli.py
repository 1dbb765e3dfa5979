"""Command-line entry point: ``svardag simulate | learn | benchmark``.

File formats (comma separated, UTF-8, LF line endings, no header on output):

* time series: T rows x N columns; an optional single header row is skipped on input
* instantaneous weights: N rows x N columns
* stacked lag weights: (N*P) rows x N columns, lag blocks in order A_1, ..., A_P
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import asdict, fields
from pathlib import Path

import numpy as np

from .baseline import BaselineConfig, learn_baseline
from .benchmark import SWEEP_FIELDS, BenchmarkPlan, run_benchmark
from .metrics import evaluate
from .model import build_lagged_design
from .simulate import SvarmSpec, UnstableProcessError, simulate_svarm
from .solver import SolverConfig, learn

log = logging.getLogger("svardag")

# flag / config-file names that differ from dataclass field names
ALIASES = {"nodes": "n", "lags": "p", "samples": "t"}


class CsvFormatError(ValueError):
    pass


# --- CSV ------------------------------------------------------------------

def read_matrix(path, ncols: int | None = None, allow_header: bool = False) -> np.ndarray:
    """Read a numeric CSV. Errors carry the 1-based line number."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    rows = []
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                vals = [float(c) for c in row]
            except ValueError:
                if allow_header and lineno == 1:
                    continue
                bad = next(c for c in row if not _is_float(c))
                raise CsvFormatError(f"{path}:{lineno}: non-numeric cell {bad!r}") from None
            if ncols is None:
                ncols = len(vals)
            if len(vals) != ncols:
                raise CsvFormatError(f"{path}:{lineno}: expected {ncols} columns, found {len(vals)}")
            if not all(np.isfinite(vals)):
                raise CsvFormatError(f"{path}:{lineno}: non-finite value")
            rows.append(vals)
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    return np.array(rows, dtype=float)


def _is_float(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def write_matrix(path, m: np.ndarray) -> None:
    m = np.atleast_2d(np.asarray(m, dtype=float))
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        for row in m:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_time_series(path) -> np.ndarray:
    """Return the (N, T) data matrix stored as T rows x N columns."""
    return read_matrix(path, allow_header=True).T


# --- configuration ----------------------------------------------------------

def read_config_file(path) -> dict[str, str]:
    """Flat ``key = value`` file; blank lines and ``#`` comments are ignored."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        out[ALIASES.get(key, key)] = value
    return out


def _coerce(kind, raw):
    if kind is bool or kind == "bool":
        if isinstance(raw, bool):
            return raw
        return str(raw).strip().lower() in ("1", "true", "yes", "on")
    if kind is int or kind == "int":
        return int(raw)
    return float(raw)


def build_dataclass(cls, file_cfg: dict, args: argparse.Namespace):
    """defaults < config file < command-line flags."""
    kw = {}
    for f in fields(cls):
        if f.name in file_cfg:
            kw[f.name] = _coerce(f.type, file_cfg[f.name])
        val = getattr(args, f.name, None)
        if val is not None:
            kw[f.name] = _coerce(f.type, val)
    return cls(**kw)


def _add_dataclass_flags(parser, cls, skip=()):
    rev = {v: k for k, v in ALIASES.items()}
    for f in fields(cls):
        if f.name in skip:
            continue
        flag = "--" + rev.get(f.name, f.name).replace("_", "-")
        if f.type in (bool, "bool"):
            parser.add_argument(flag, dest=f.name, action="store_const", const=True, default=None)
            parser.add_argument("--no-" + flag[2:], dest=f.name, action="store_const", const=False)
        else:
            typ = int if f.type in (int, "int") else float
            parser.add_argument(flag, dest=f.name, type=typ, default=None, help=f"default {f.default}")


def _file_cfg(args) -> dict:
    return read_config_file(args.config) if getattr(args, "config", None) else {}


# --- commands ---------------------------------------------------------------

def cmd_simulate(args) -> int:
    spec = build_dataclass(SvarmSpec, _file_cfg(args), args)
    gt = simulate_svarm(spec)
    write_matrix(args.out_x, gt.x.x.T)
    write_matrix(args.out_w, gt.w_true.w)
    if args.out_a:
        write_matrix(args.out_a, gt.a_true.stacked if gt.a_true.p else np.zeros((0, spec.n)))
    print(f"companion spectral radius: {gt.companion_radius:.6f}")
    return 0


def cmd_learn(args) -> int:
    file_cfg = _file_cfg(args)
    cfg = build_dataclass(SolverConfig, file_cfg, args)
    p = int(args.lags if args.lags is not None else file_cfg.get("p", 0))
    x = read_time_series(args.x_path)
    design = build_lagged_design(x, p)
    t0 = time.perf_counter()
    if args.method == "baseline":
        res = learn_baseline(design, BaselineConfig.from_solver(cfg))
    else:
        res = learn(design, cfg)
    runtime = time.perf_counter() - t0
    write_matrix(args.out_w, res.w_hat)
    if args.out_a:
        write_matrix(args.out_a, res.a_hat)
    summary = {
        "method": "cvx" if args.method == "cvx" else "dynotears-style",
        "h_final": res.h_final,
        "termination": res.termination,
        "outer_iterations": res.outer_iterations,
        "removed_edges": [list(e) for e in res.removed_edges],
        "runtime_s": runtime,
        "objective_trace": [asdict(r) for r in res.objective_trace],
    }
    if args.true_w:
        n = design.n
        w_true = read_matrix(args.true_w, ncols=n)
        a_true = read_matrix(args.true_a, ncols=n) if args.true_a else np.zeros((n * p, n))
        report = evaluate(res.w_hat, res.a_hat, w_true, a_true, cfg.tau)
        summary["metrics"] = report.as_dict()
        for k, v in report.as_dict().items():
            print(f"{k}: {v:.6g}")
    text = json.dumps(summary, indent=2, default=float)
    if args.summary:
        Path(args.summary).write_text(text + "\n", encoding="utf-8")
    print(f"h_final: {res.h_final:.3e}  outer iterations: {res.outer_iterations}  termination: {res.termination}")
    return 0


def cmd_benchmark(args) -> int:
    file_cfg = _file_cfg(args)
    spec = build_dataclass(SvarmSpec, file_cfg, args)
    cfg = build_dataclass(SolverConfig, file_cfg, args)
    values = [int(v) for v in args.values.split(",")]
    plan = BenchmarkPlan(args.sweep, tuple(values), args.realizations, spec, cfg,
                         tuple(m.strip() for m in args.methods.split(",")))
    text, records = run_benchmark(plan, jobs=args.jobs, record_runtime=not args.no_runtime)
    Path(args.out).write_text(text, encoding="utf-8")
    failed = sum(1 for r in records if r.error)
    print(f"wrote {args.out} ({len(records)} runs, {failed} failed)")
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="svardag", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a synthetic SVAR dataset")
    sim.add_argument("--config")
    _add_dataclass_flags(sim, SvarmSpec)
    sim.add_argument("--out-x", required=True, help="time series CSV (T x N)")
    sim.add_argument("--out-w", required=True, help="true instantaneous weights (N x N)")
    sim.add_argument("--out-a", help="true stacked lag weights (N*P x N)")
    sim.set_defaults(func=cmd_simulate)

    lrn = sub.add_parser("learn", help="estimate W and A from a time-series CSV")
    lrn.add_argument("x_path")
    lrn.add_argument("--config")
    lrn.add_argument("--lags", type=int, default=None)
    lrn.add_argument("--method", choices=("cvx", "baseline"), default="cvx")
    _add_dataclass_flags(lrn, SolverConfig)
    lrn.add_argument("--out-w", required=True)
    lrn.add_argument("--out-a")
    lrn.add_argument("--summary", help="write a JSON run summary here")
    lrn.add_argument("--true-w", help="ground-truth W, enables metrics")
    lrn.add_argument("--true-a", help="ground-truth stacked A")
    lrn.set_defaults(func=cmd_learn)

    bench = sub.add_parser("benchmark", help="run a paired-seed sweep and write a summary CSV")
    bench.add_argument("--config")
    bench.add_argument("--sweep", choices=sorted(SWEEP_FIELDS), required=True)
    bench.add_argument("--values", required=True, help="comma-separated, strictly increasing")
    bench.add_argument("--realizations", type=int, default=10)
    bench.add_argument("--methods", default="cvx", help="comma-separated subset of cvx,baseline")
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--no-runtime", action="store_true",
                       help="write NaN runtimes so the CSV is reproducible byte for byte")
    _add_dataclass_flags(bench, SvarmSpec)
    _add_dataclass_flags(bench, SolverConfig, skip=("seed",))
    bench.add_argument("--out", required=True)
    bench.set_defaults(func=cmd_benchmark)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (FileNotFoundError, CsvFormatError, UnstableProcessError, ValueError, OSError) as exc:
        print(f"svardag {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
