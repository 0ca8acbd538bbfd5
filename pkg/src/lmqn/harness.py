"""Benchmark harness: paired trials, trace files, aggregation, curve export.

One benchmark run executes ``trials`` independent trials. Within a trial
every requested optimizer sees the identical dataset and identical initial
weights (the paired design that makes the comparison fair); across trials
both are redrawn from seeds derived deterministically from the base seed.
Each (optimizer, trial) run writes one trace CSV; the run as a whole writes
an aggregate ``summary.json`` and one mean-loss curve file per optimizer.

Targets are min-max scaled onto [0, 1] before training by default
(``normalize_targets``); each record's ``meta`` carries the flag and the
(low, high) pair so the mapping is reproducible. Dataset dumps written by
``dump_datasets`` always contain the as-generated, unscaled targets.

Trace CSV schema (one row per iteration, row 0 is the entry state)::

    k,E,grad_norm,fev,gev,elapsed_ms

Floats are written with 17 significant digits so parsing the file back
reproduces the exact binary values. Reruns with the same configuration
produce byte-identical traces except for the elapsed_ms column.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .estimator import QuasiNewtonMLPRegressor
from .levy import LevySpec, generate_dataset, save_dataset_csv
from .mlp import Dataset, Network, init_params
from .optim import (
    DEFAULT_EPSILON,
    DEFAULT_KMAX,
    DEFAULT_MEMORY,
    CostModel,
    DivergenceError,
    OptimizerKind,
    RunRecord,
    TraceRow,
    theoretical_cost,
)

TRACE_HEADER = "k,E,grad_norm,fev,gev,elapsed_ms"


@dataclass
class RunConfig:
    """Everything one benchmark invocation depends on."""

    optimizer: str = "all"
    memory: int = DEFAULT_MEMORY
    k_max: int = DEFAULT_KMAX
    epsilon: float = DEFAULT_EPSILON
    trials: int = 50
    base_seed: int = 0
    n_samples: int = 1000
    n_dims: int = 5
    hidden_units: int = 50
    out_dir: str = "runs"
    literal_theta: bool = False
    dump_datasets: bool = False
    normalize_targets: bool = True

    def kinds(self) -> list[OptimizerKind]:
        if self.optimizer == "all":
            return [OptimizerKind.LBFGS, OptimizerKind.LNAQ, OptimizerKind.LMOQ]
        return [OptimizerKind.from_string(self.optimizer)]


def trial_seeds(base_seed: int, trial: int) -> tuple[int, int]:
    """Derive independent (dataset seed, init seed) for one trial."""
    a, b = np.random.SeedSequence(base_seed + trial).generate_state(2)
    return int(a), int(b)


def _digest(*arrays: np.ndarray) -> str:
    h = hashlib.sha256()
    for arr in arrays:
        h.update(np.ascontiguousarray(arr).tobytes())
    return h.hexdigest()


def save_trace(record: RunRecord, path) -> None:
    """Write the per-iteration trace as CSV with round-trip-exact floats."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(TRACE_HEADER + "\n")
        for r in record.rows:
            fh.write(
                f"{r.k},{r.loss:.17g},{r.grad_norm:.17g},{r.fev},{r.gev},{r.elapsed_ms:.17g}\n"
            )


def load_trace(path) -> list[TraceRow]:
    """Parse a trace CSV written by :func:`save_trace`."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or lines[0] != TRACE_HEADER:
        raise ValueError(f"{path} does not start with the trace header {TRACE_HEADER!r}")
    rows = []
    for line in lines[1:]:
        k, loss, grad_norm, fev, gev, elapsed = line.split(",")
        rows.append(
            TraceRow(
                k=int(k),
                loss=float(loss),
                grad_norm=float(grad_norm),
                fev=int(fev),
                gev=int(gev),
                elapsed_ms=float(elapsed),
            )
        )
    return rows


def minmax_scale(values: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Affinely map values onto [0, 1]; returns (scaled, low, high).

    Training regression targets on their natural scale can leave a small
    sigmoid network stuck at a high loss floor; mapping them onto the unit
    interval is the usual treatment and is what the benchmark does by
    default. The (low, high) pair is returned so the mapping is invertible
    and can be recorded alongside the run.
    """
    low = float(values.min())
    high = float(values.max())
    if high <= low:
        raise ValueError("cannot scale a constant target column")
    return (values - low) / (high - low), low, high


def run_single_trial(config: RunConfig, trial: int) -> tuple[Dataset, list[RunRecord]]:
    """Run every requested optimizer once on this trial's dataset and start point.

    A diverged run is captured, not propagated: its partial record (flagged
    ``diverged``) takes the slot so the remaining optimizers and trials
    still run.
    """
    data_seed, init_seed = trial_seeds(config.base_seed, trial)
    data = generate_dataset(
        LevySpec(n_dims=config.n_dims, n_samples=config.n_samples, seed=data_seed)
    )
    X, y = data.inputs, data.targets.ravel()
    target_low = target_high = None
    if config.normalize_targets:
        y, target_low, target_high = minmax_scale(y)
    dataset_sha = _digest(X, y)
    records = []
    for kind in config.kinds():
        estimator = QuasiNewtonMLPRegressor(
            hidden_units=config.hidden_units,
            solver=kind.value,
            memory=config.memory,
            max_iter=config.k_max,
            tol=config.epsilon,
            literal_theta=config.literal_theta,
            random_state=init_seed,
        )
        try:
            estimator.fit(X, y)
            record = estimator.record_
            w0 = estimator.initial_params_
        except DivergenceError as err:
            record = err.record
            net = Network((config.n_dims, config.hidden_units, 1))
            w0 = init_params(net, record.seed)
        record.meta.update(
            trial=trial,
            data_seed=data_seed,
            init_seed=init_seed,
            w0_sha256=_digest(w0),
            dataset_sha256=dataset_sha,
            n_samples=config.n_samples,
            n_dims=config.n_dims,
            hidden_units=config.hidden_units,
            targets_normalized=config.normalize_targets,
            target_low=target_low,
            target_high=target_high,
        )
        records.append(record)
    return data, records


def aggregate(records_by_kind: dict[str, list[RunRecord]]) -> list[dict]:
    """Mean summary row per optimizer, in fixed presentation order.

    Means are taken over non-diverged trials; diverged trials are counted
    separately so they stay visible.
    """
    rows = []
    for kind in records_by_kind:
        recs = records_by_kind[kind]
        ok = [r for r in recs if not r.diverged]

        def mean(values) -> float | None:
            return float(np.mean(values)) if values else None

        rows.append(
            {
                "optimizer": kind,
                "E": mean([r.final_loss for r in ok]),
                "iterations": mean([r.iterations for r in ok]),
                "fev": mean([r.fev for r in ok]),
                "gev": mean([r.gev for r in ok]),
                "time_s": mean([r.wall_seconds for r in ok]),
                "trials": len(recs),
                "converged": sum(r.converged for r in recs),
                "diverged": sum(r.diverged for r in recs),
            }
        )
    return rows


def export_curve(records: list[RunRecord], path) -> None:
    """Write a two-column text file: iteration index and mean loss.

    The mean at index k is taken over the trials still running at k, so a
    curve keeps its tail even when some trials stop early.
    """
    path = Path(path)
    max_len = max(len(r.rows) for r in records)
    with path.open("w", newline="") as fh:
        fh.write("# k mean_E (mean over trials still running at k)\n")
        for k in range(max_len):
            values = [r.rows[k].loss for r in records if len(r.rows) > k]
            fh.write(f"{k} {float(np.mean(values)):.17g}\n")


def build_summary(config: RunConfig, records_by_kind: dict[str, list[RunRecord]]) -> dict:
    """Assemble the JSON-serializable aggregate for one benchmark run."""
    cfg = asdict(config)
    cfg["out_dir"] = str(cfg["out_dir"])
    run_id = hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:12]
    d = Network((config.n_dims, config.hidden_units, 1)).parameter_count
    rows = aggregate(records_by_kind)
    for row in rows:
        if row["iterations"] and row["fev"]:
            zeta = row["fev"] / row["iterations"]
            estimate = theoretical_cost(
                CostModel(n=config.n_samples, d=d, m=config.memory, zeta=zeta)
            )
            row["cost"] = {
                "zeta": zeta,
                "flops_per_iteration": estimate.flops_per_iteration,
                "storage_floats": estimate.storage_floats,
            }
        else:
            row["cost"] = None
    return {
        "run_id": run_id,
        "config": cfg,
        "parameter_count": d,
        "columns": ["E", "iterations", "fev", "gev", "time_s"],
        "rows": rows,
    }


@dataclass
class BenchmarkResult:
    records: dict[str, list[RunRecord]] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    out_dir: Path = Path("runs")
    summary_path: Path = Path("runs/summary.json")


def run_benchmark(config: RunConfig) -> BenchmarkResult:
    """Execute the full benchmark and write traces, curves, and the summary."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    kinds = config.kinds()
    records: dict[str, list[RunRecord]] = {k.value: [] for k in kinds}
    for trial in range(config.trials):
        data, trial_records = run_single_trial(config, trial)
        if config.dump_datasets:
            save_dataset_csv(data, out_dir / f"dataset_trial{trial:03d}.csv")
        for kind, record in zip(kinds, trial_records):
            records[kind.value].append(record)
            save_trace(record, out_dir / f"{kind.value}_trial{trial:03d}.csv")
    for kind in kinds:
        export_curve(records[kind.value], out_dir / f"curve_{kind.value}.txt")
    summary = build_summary(config, records)
    summary_path = out_dir / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2) + "\n")
    return BenchmarkResult(
        records=records, summary=summary, out_dir=out_dir, summary_path=summary_path
    )
