"""Command-line entry point for the benchmark harness.

``lmqn-bench`` runs the Levy regression benchmark with one optimizer or all
three, writes traces/curves/summary under ``--out``, and prints the
aggregate table. ``--quadratic-smoke`` instead runs a fast self-check on a
random convex quadratic: all three optimizers must converge and the
look-ahead and momentum-approximated drivers must produce matching iterates.

Exit status: 0 on success; 1 if any trial diverged (unless
``--allow-diverged``) or the smoke check fails; 2 on bad arguments (from
argparse).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .harness import RunConfig, run_benchmark
from .optim import OptimizerKind, QuadraticObjective, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmqn-bench",
        description="Benchmark limited-memory quasi-Newton optimizers on the Levy regression task.",
    )
    parser.add_argument(
        "--optimizer",
        choices=["lbfgs", "lnaq", "lmoq", "all"],
        default="all",
        help="which optimizer to run (default: all three, paired on identical data and starts)",
    )
    parser.add_argument("--memory", type=int, default=16, metavar="M",
                        help="curvature pairs kept (default 16)")
    parser.add_argument("--kmax", type=int, default=10000, metavar="K",
                        help="iteration budget per run (default 10000)")
    parser.add_argument("--eps", type=float, default=1e-6, metavar="EPS",
                        help="gradient-norm stopping tolerance (default 1e-6)")
    parser.add_argument("--trials", type=int, default=50, metavar="T",
                        help="independent trials (default 50)")
    parser.add_argument("--seed", type=int, default=0, metavar="S",
                        help="base seed; trial seeds derive from it (default 0)")
    parser.add_argument("--samples", type=int, default=1000, metavar="N",
                        help="training samples per dataset (default 1000)")
    parser.add_argument("--hidden", type=int, default=50, metavar="H",
                        help="hidden-layer width (default 50)")
    parser.add_argument("--out", default="runs", metavar="DIR",
                        help="output directory for traces, curves, summary.json (default runs/)")
    parser.add_argument("--literal-theta", action="store_true",
                        help="use the alternate momentum recurrence variant (degenerates mu to 0)")
    parser.add_argument("--quadratic-smoke", action="store_true",
                        help="run the fast quadratic self-check instead of the benchmark")
    parser.add_argument("--allow-diverged", action="store_true",
                        help="exit 0 even when some trials diverge")
    parser.add_argument("--dump-datasets", action="store_true",
                        help="also write each trial's dataset as CSV")
    parser.add_argument("--raw-targets", action="store_true",
                        help="train on unscaled target values instead of min-max scaling them to [0, 1]")
    return parser


def _print_table(summary: dict) -> None:
    columns = summary["columns"]
    header = f"{'optimizer':<10}" + "".join(f"{c:>14}" for c in columns) + f"{'diverged':>10}"
    print(header)
    print("-" * len(header))
    for row in summary["rows"]:
        cells = []
        for c in columns:
            v = row[c]
            cells.append(f"{'-':>14}" if v is None else f"{v:>14.6g}")
        print(f"{row['optimizer']:<10}" + "".join(cells) + f"{row['diverged']:>10}")


def _quadratic_smoke(args: argparse.Namespace) -> int:
    objective = QuadraticObjective.random(dim=20, seed=args.seed, condition=10.0)
    w0 = np.random.default_rng(args.seed + 1).standard_normal(20)
    records = {}
    for kind in OptimizerKind:
        records[kind] = run(
            kind, objective, w0, m=args.memory, k_max=200, epsilon=args.eps,
            literal_theta=args.literal_theta, keep_params=True,
        )
    for kind, record in records.items():
        status = "converged" if record.converged else "NOT CONVERGED"
        print(
            f"{kind.value:<6} {status:<14} iters={record.iterations:<4d} "
            f"E={record.final_loss:.3e} fev={record.fev} gev={record.gev}"
        )
    lnaq = records[OptimizerKind.LNAQ].iterates
    lmoq = records[OptimizerKind.LMOQ].iterates
    n_compare = min(len(lnaq), len(lmoq), 21)
    deviation = max(
        float(np.max(np.abs(a - b))) for a, b in zip(lnaq[:n_compare], lmoq[:n_compare])
    )
    print(f"max |lnaq - lmoq| over first {n_compare - 1} iterations: {deviation:.3e}")
    ok = deviation <= 1e-10 and all(r.converged for r in records.values())
    print("smoke check:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.quadratic_smoke:
        return _quadratic_smoke(args)
    config = RunConfig(
        optimizer=args.optimizer,
        memory=args.memory,
        k_max=args.kmax,
        epsilon=args.eps,
        trials=args.trials,
        base_seed=args.seed,
        n_samples=args.samples,
        hidden_units=args.hidden,
        out_dir=args.out,
        literal_theta=args.literal_theta,
        dump_datasets=args.dump_datasets,
        normalize_targets=not args.raw_targets,
    )
    result = run_benchmark(config)
    _print_table(result.summary)
    print(f"traces and summary written to {result.out_dir}/")
    diverged = sum(row["diverged"] for row in result.summary["rows"])
    if diverged and not args.allow_diverged:
        print(f"error: {diverged} run(s) diverged", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
