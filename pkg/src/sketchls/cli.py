"""Command-line front end: generate problems, solve instances, run sweeps.

Exit codes: 0 success, 2 usage or configuration error, 3 I/O error,
4 numerical failure.  Data goes to files or standard output only; progress
and diagnostics go to standard error.  The environment variable
SKETCHLS_SEED provides the default seed; an explicit --seed flag wins.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bench import BenchConfig, run_benchmark, render_plots, write_csv, write_meta
from .errors import (
    NumericalBreakdownError,
    SingularFactorError,
    SketchlsError,
    SpecError,
)
from .mmio import read_matrix, read_vector, write_vector
from .probgen import ProblemSpec, generate_problem, write_problem_dir
from .sketch import KINDS, DEFAULT_KIND, SketchSpec
from .solvers import LeastSquaresProblem, METHODS, SolverOptions, solve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


def _default_seed() -> int:
    env = os.environ.get("SKETCHLS_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SpecError(f"SKETCHLS_SEED must be an integer, got {env!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sketchls",
        description="Randomized sketching for overdetermined least squares.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic problem directory")
    gen.add_argument("--m", type=int, required=True, help="number of rows")
    gen.add_argument("--n", type=int, required=True, help="number of columns")
    gen.add_argument("--cond", type=float, default=1e10, help="condition number (default 1e10)")
    gen.add_argument("--beta", type=float, default=1e-10, help="optimal residual norm (default 1e-10)")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out", required=True, metavar="DIR")

    slv = sub.add_parser("solve", help="solve a problem from Matrix Market files")
    slv.add_argument("--A", required=True, metavar="FILE")
    slv.add_argument("--b", required=True, metavar="FILE")
    slv.add_argument("--method", choices=METHODS, default="lsqr")
    slv.add_argument("--sketch", choices=KINDS, default=DEFAULT_KIND)
    slv.add_argument("--d-factor", type=float, default=4.0)
    slv.add_argument("--atol", type=float, default=1e-10)
    slv.add_argument("--btol", type=float, default=1e-10)
    slv.add_argument("--max-iter", type=int, default=None)
    slv.add_argument("--seed", type=int, default=None)
    slv.add_argument("--out", default=None, metavar="FILE", help="write x as Matrix Market")
    slv.add_argument("--json", action="store_true", help="emit one JSON object instead of key=value lines")

    ben = sub.add_parser("bench", help="run a benchmark sweep")
    ben.add_argument("--m-list", required=True, help="comma-separated row counts")
    ben.add_argument("--n", type=int, required=True)
    ben.add_argument("--cond", type=float, default=1e10)
    ben.add_argument("--beta", type=float, default=1e-10)
    ben.add_argument("--methods", default="lsqr,saa,sap")
    ben.add_argument("--sketches", default=DEFAULT_KIND)
    ben.add_argument("--d-factor", type=float, default=4.0)
    ben.add_argument("--repeats", type=int, default=3)
    ben.add_argument("--seed", type=int, default=None)
    ben.add_argument("--out", required=True, metavar="DIR")
    ben.add_argument("--plot", action="store_true", help="also render SVG charts")
    return parser


def _split_csv(text: str) -> list[str]:
    return [tok for tok in (t.strip() for t in text.split(",")) if tok]


def _cmd_gen(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    spec = ProblemSpec(m=args.m, n=args.n, kappa=args.cond, beta=args.beta, seed=seed)
    problem = generate_problem(spec)
    write_problem_dir(spec, problem, args.out)
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    a_mat = read_matrix(args.A)
    b_vec = read_vector(args.b)
    problem = LeastSquaresProblem(A=a_mat, b=b_vec)
    opts = SolverOptions(
        atol=args.atol, btol=args.btol, max_iter=args.max_iter, d_factor=args.d_factor
    )
    spec = SketchSpec(kind=args.sketch, embed_dim=1, seed=seed)
    result = solve(problem, method=args.method, spec=spec, opts=opts)
    if args.out:
        write_vector(args.out, result.x)
    summary = {
        "method": result.method,
        "sketch": result.sketch,
        "d": result.d,
        "iterations": result.iterations,
        "residual_norm": result.residual_norm,
        "termination": result.termination,
        "wall_time_s": result.wall_time_s,
    }
    if args.json:
        print(json.dumps(summary))
    else:
        for key, val in summary.items():
            if val is None:
                continue
            print(f"{key}={repr(val) if isinstance(val, float) else val}")
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    m_list = [int(tok) for tok in _split_csv(args.m_list)]
    config = BenchConfig(
        m_list=tuple(m_list),
        n=args.n,
        kappa=args.cond,
        beta=args.beta,
        methods=tuple(_split_csv(args.methods)),
        sketches=tuple(_split_csv(args.sketches)),
        d_factor=args.d_factor,
        repeats=args.repeats,
        seed=seed,
        out_dir=args.out,
    )
    os.makedirs(args.out, exist_ok=True)

    def progress(rec):
        sketch = rec.sketch or "-"
        print(
            f"m={rec.m} trial={rec.trial} {rec.method}/{sketch}: "
            f"{rec.wall_time_s:.3g}s fwd={rec.forward_error:.3g} "
            f"res={rec.residual_error:.3g} it={rec.iterations} {rec.termination}",
            file=sys.stderr,
        )

    records = run_benchmark(config, progress=progress)
    write_csv(records, os.path.join(args.out, "results.csv"))
    write_meta(config, os.path.join(args.out, "bench_meta.txt"))
    if args.plot:
        render_plots(records, args.out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"gen": _cmd_gen, "solve": _cmd_solve, "bench": _cmd_bench}
    try:
        return handlers[args.subcommand](args)
    except (SingularFactorError, NumericalBreakdownError) as exc:
        print(f"sketchls: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SpecError as exc:
        print(f"sketchls: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SketchlsError as exc:
        print(f"sketchls: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"sketchls: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
