#!/usr/bin/env python3
"""Desk-scale runtime/accuracy sweep with plots.

Runs all three methods on ill-conditioned instances across a range of row
counts and writes results.csv, bench_meta.txt, and the three log-log SVG
charts into --out.  With the defaults this takes a few minutes: the LSQR
baseline runs to its 4n iteration cap on every instance.
"""

import argparse
import sys

from sketchls import BenchConfig, render_plots, run_benchmark, write_csv, write_meta


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m-list", default="5000,10000,20000,50000")
    parser.add_argument("--n", type=int, default=200)
    parser.add_argument("--cond", type=float, default=1e8)
    parser.add_argument("--beta", type=float, default=1e-10)
    parser.add_argument("--sketches", default="countsketch")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="bench_out")
    args = parser.parse_args()

    config = BenchConfig(
        m_list=tuple(int(tok) for tok in args.m_list.split(",") if tok),
        n=args.n,
        kappa=args.cond,
        beta=args.beta,
        methods=("lsqr", "saa", "sap"),
        sketches=tuple(tok for tok in args.sketches.split(",") if tok),
        repeats=args.repeats,
        seed=args.seed,
        out_dir=args.out,
    )

    import os

    os.makedirs(args.out, exist_ok=True)

    def progress(rec):
        print(
            f"m={rec.m} trial={rec.trial} {rec.method}/{rec.sketch or '-'}: "
            f"{rec.wall_time_s:.3g}s fwd={rec.forward_error:.3g} it={rec.iterations}",
            file=sys.stderr,
        )

    records = run_benchmark(config, progress=progress)
    write_csv(records, os.path.join(args.out, "results.csv"))
    write_meta(config, os.path.join(args.out, "bench_meta.txt"))
    render_plots(records, args.out)
    print(f"wrote {len(records)} records and plots to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
