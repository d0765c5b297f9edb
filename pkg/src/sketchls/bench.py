"""Benchmark sweeps: metrics, runner, CSV schema, and log-log plots.

One record per (m, trial, method, sketch) cell.  All methods in a cell
share the same generated problem instance, so differences isolate the
solver.  Timing covers the full solve path including sketch construction.
Failed solves are recorded with termination="failed" and sentinel metric
value -1.0 rather than aborting the sweep.
"""

from __future__ import annotations

import math
import os
import statistics
import time
from dataclasses import dataclass, fields
from typing import Callable

import numpy as np

from .errors import SketchlsError, SpecError, UndefinedMetricError
from .linalg import Matrix, SparseMatrix, Vector
from .probgen import ProblemSpec, generate_problem
from .rng import derive_seed
from .sketch import KINDS, SketchSpec, default_embed_dim
from .solvers import SolverOptions, solve

CSV_HEADER = (
    "method,sketch,m,n,d,kappa,beta,trial,wall_time_s,"
    "forward_error,residual_error,iterations,termination"
)

FAILED_METRIC = -1.0


@dataclass(frozen=True)
class BenchConfig:
    m_list: tuple[int, ...]
    n: int
    kappa: float = 1e10
    beta: float = 1e-10
    methods: tuple[str, ...] = ("lsqr", "saa", "sap")
    sketches: tuple[str, ...] = ("countsketch",)
    d_factor: float = 4.0
    repeats: int = 3
    seed: int = 0
    out_dir: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "m_list", tuple(int(m) for m in self.m_list))
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "sketches", tuple(self.sketches))
        if not self.m_list:
            raise SpecError("m_list must be nonempty")
        if any(m < self.n for m in self.m_list):
            raise SpecError(f"every m in m_list must be >= n={self.n}")
        if self.repeats < 1:
            raise SpecError("repeats must be >= 1")
        bad = [meth for meth in self.methods if meth not in ("lsqr", "saa", "sap")]
        if bad or not self.methods:
            raise SpecError(f"methods must be a nonempty subset of lsqr/saa/sap, got {self.methods}")
        bad = [k for k in self.sketches if k not in KINDS]
        if bad:
            raise SpecError(f"unknown sketch kinds {bad}")
        needs_sketch = any(meth in ("saa", "sap") for meth in self.methods)
        if needs_sketch and not self.sketches:
            raise SpecError("saa/sap requested but no sketches given")


@dataclass(frozen=True)
class BenchRecord:
    method: str
    sketch: str | None
    m: int
    n: int
    d: int | None
    kappa: float
    beta: float
    trial: int
    wall_time_s: float
    forward_error: float
    residual_error: float
    iterations: int
    termination: str


def forward_error(x_hat: Vector, x_star: Vector) -> float:
    """||x_hat - x_star|| / ||x_star||."""
    if x_hat.len != x_star.len:
        raise SpecError(f"length mismatch: {x_hat.len} vs {x_star.len}")
    denom = float(np.linalg.norm(x_star.data))
    if denom == 0.0:
        raise UndefinedMetricError("forward error undefined for ||x_star|| = 0")
    return float(np.linalg.norm(x_hat.data - x_star.data)) / denom


def residual_error(A: Matrix, b: Vector, x_hat: Vector, beta: float) -> float:
    """Relative residual suboptimality (||A x_hat - b|| - beta) / ||b||,
    clamped at zero against floating-point noise.  beta is the known optimal
    residual norm of the instance."""
    bnorm = float(np.linalg.norm(b.data))
    if bnorm == 0.0:
        raise UndefinedMetricError("residual error undefined for ||b|| = 0")
    if isinstance(A, SparseMatrix):
        r = A.to_scipy() @ x_hat.data - b.data
    else:
        r = A.data @ x_hat.data - b.data
    return max(0.0, (float(np.linalg.norm(r)) - beta) / bnorm)


def run_benchmark(
    config: BenchConfig,
    progress: Callable[[BenchRecord], None] | None = None,
) -> list[BenchRecord]:
    """Run the sweep, emitting records in (m, trial, method, sketch) order."""
    records: list[BenchRecord] = []
    opts = SolverOptions(d_factor=config.d_factor)
    for m in config.m_list:
        for trial in range(config.repeats):
            prob_seed = derive_seed(config.seed, "problem", m, trial)
            problem = generate_problem(
                ProblemSpec(m=m, n=config.n, kappa=config.kappa, beta=config.beta, seed=prob_seed)
            )
            for method in config.methods:
                sketch_kinds = (None,) if method == "lsqr" else config.sketches
                for kind in sketch_kinds:
                    record = _run_cell(config, problem, m, trial, method, kind, opts)
                    records.append(record)
                    if progress is not None:
                        progress(record)
    return records


def _run_cell(config, problem, m, trial, method, kind, opts) -> BenchRecord:
    spec = None
    if kind is not None:
        spec = SketchSpec(
            kind=kind,
            embed_dim=default_embed_dim(m, config.n, config.d_factor),
            seed=derive_seed(config.seed, "sketch", m, trial),
        )
    t0 = time.perf_counter()
    try:
        result = solve(problem, method=method, spec=spec, opts=opts)
    except SketchlsError:
        return BenchRecord(
            method=method,
            sketch=kind,
            m=m,
            n=config.n,
            d=None,
            kappa=config.kappa,
            beta=config.beta,
            trial=trial,
            wall_time_s=time.perf_counter() - t0,
            forward_error=FAILED_METRIC,
            residual_error=FAILED_METRIC,
            iterations=0,
            termination="failed",
        )
    return BenchRecord(
        method=method,
        sketch=result.sketch,
        m=m,
        n=config.n,
        d=result.d,
        kappa=config.kappa,
        beta=config.beta,
        trial=trial,
        wall_time_s=result.wall_time_s,
        forward_error=forward_error(result.x, problem.x_star),
        residual_error=residual_error(problem.A, problem.b, result.x, config.beta),
        iterations=result.iterations,
        termination=result.termination,
    )


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(records: list[BenchRecord], path: str) -> None:
    """Write the fixed schema; floats use shortest round-trip formatting."""
    lines = [CSV_HEADER]
    for rec in records:
        lines.append(
            ",".join(
                _cell(getattr(rec, f.name))
                for f in fields(BenchRecord)
            )
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_csv(path: str) -> list[BenchRecord]:
    """Inverse of write_csv, bit-exact for round trips."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: unexpected CSV header")
    records = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 13:
            raise ValueError(f"{path}: expected 13 fields, got {len(parts)}: {ln!r}")
        records.append(
            BenchRecord(
                method=parts[0],
                sketch=parts[1] or None,
                m=int(parts[2]),
                n=int(parts[3]),
                d=int(parts[4]) if parts[4] else None,
                kappa=float(parts[5]),
                beta=float(parts[6]),
                trial=int(parts[7]),
                wall_time_s=float(parts[8]),
                forward_error=float(parts[9]),
                residual_error=float(parts[10]),
                iterations=int(parts[11]),
                termination=parts[12],
            )
        )
    return records


def write_meta(config: BenchConfig, path: str) -> None:
    """Echo the full sweep configuration as key=value lines."""
    with open(path, "w") as fh:
        fh.write(f"m_list={','.join(str(m) for m in config.m_list)}\n")
        fh.write(f"n={config.n}\n")
        fh.write(f"kappa={repr(float(config.kappa))}\n")
        fh.write(f"beta={repr(float(config.beta))}\n")
        fh.write(f"methods={','.join(config.methods)}\n")
        fh.write(f"sketches={','.join(config.sketches)}\n")
        fh.write(f"d_factor={repr(float(config.d_factor))}\n")
        fh.write(f"repeats={config.repeats}\n")
        fh.write(f"seed={config.seed}\n")


METRICS = ("wall_time_s", "forward_error", "residual_error")


def median_series(records: list[BenchRecord], metric: str) -> dict[tuple[str, str | None], tuple[list[int], list[float]]]:
    """Per-(method, sketch) series of median-over-trials metric vs m.

    Failed cells (sentinel metrics) are dropped before taking medians.
    """
    if metric not in METRICS:
        raise SpecError(f"unknown metric {metric!r}")
    buckets: dict[tuple[str, str | None], dict[int, list[float]]] = {}
    for rec in records:
        if rec.termination == "failed":
            continue
        key = (rec.method, rec.sketch)
        buckets.setdefault(key, {}).setdefault(rec.m, []).append(getattr(rec, metric))
    series = {}
    for key, by_m in buckets.items():
        ms = sorted(by_m)
        series[key] = (ms, [statistics.median(by_m[m]) for m in ms])
    return series


_PLOT_LABELS = {
    "wall_time_s": ("time", "wall time [s]"),
    "forward_error": ("forward_error", "forward error"),
    "residual_error": ("residual_error", "relative residual suboptimality"),
}


def render_plots(records: list[BenchRecord], out_dir: str) -> list[str]:
    """Three standalone SVG log-log charts (time, forward_error,
    residual_error), one series per (method, sketch), median over trials.
    Nonpositive values cannot appear on log axes and are masked."""
    if not records:
        raise SpecError("render_plots needs at least one record")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # keep labels as selectable text in the SVG instead of glyph paths
    plt.rcParams["svg.fonttype"] = "none"
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for metric in METRICS:
        stem, ylabel = _PLOT_LABELS[metric]
        fig, ax = plt.subplots(figsize=(6.0, 4.2))
        for (method, kind), (ms, meds) in sorted(
            median_series(records, metric).items(), key=lambda kv: (kv[0][0], kv[0][1] or "")
        ):
            ys = [y if y > 0 else math.nan for y in meds]
            label = method if kind is None else f"{method} ({kind})"
            ax.plot(ms, ys, marker="o", label=label)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("rows m")
        ax.set_ylabel(ylabel)
        ax.legend()
        ax.grid(True, which="both", alpha=0.3)
        fig.tight_layout()
        path = os.path.join(out_dir, f"{stem}.svg")
        fig.savefig(path, format="svg")
        plt.close(fig)
        written.append(path)
    return written
