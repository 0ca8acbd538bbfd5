"""Levy test function and benchmark dataset generation.

The regression benchmark trains networks to fit the n-dimensional Levy
function

    f(x) = (pi / n) * ( 10 sin(pi x_1)^2
                        + sum_{i=1}^{n-1} (x_i - 1)^2 (1 + 10 sin(pi x_{i+1})^2)
                        + (x_n - 1)^2 )

on points sampled uniformly from a box. The function is nonnegative with its
global minimum 0 at the all-ones point, multimodal thanks to the sin^2
terms, and deliberately asymmetric in its coordinates (the first coordinate
enters through its own sine term, the last through a bare quadratic).
Targets are the raw function values; no normalization is applied.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .mlp import Dataset
from .validation import check_nonnegative_int, check_scalar


def levy_values(X: np.ndarray) -> np.ndarray:
    """Evaluate the Levy function on each row of the (n_points, n_dims) matrix."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got shape {X.shape}")
    n = X.shape[1]
    if n < 2:
        raise ValueError(f"the Levy function needs at least 2 dimensions, got {n}")
    sin_sq = np.sin(np.pi * X) ** 2
    quad = (X - 1.0) ** 2
    cross = np.sum(quad[:, :-1] * (1.0 + 10.0 * sin_sq[:, 1:]), axis=1)
    return (np.pi / n) * (10.0 * sin_sq[:, 0] + cross + quad[:, -1])


def levy_value(x) -> float:
    """Evaluate the Levy function at a single point."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1:
        raise ValueError(f"x must be 1-D, got shape {x.shape}")
    return float(levy_values(x[None, :])[0])


@dataclass(frozen=True)
class LevySpec:
    """Sampling recipe for one benchmark dataset."""

    n_dims: int = 5
    n_samples: int = 1000
    low: float = -4.0
    high: float = 4.0
    seed: int = 0

    def __post_init__(self) -> None:
        if int(self.n_dims) < 2:
            raise ValueError(f"n_dims must be >= 2, got {self.n_dims}")
        check_nonnegative_int(self.n_samples, "n_samples")
        low = check_scalar(self.low, "low")
        high = check_scalar(self.high, "high")
        if not low < high:
            raise ValueError(f"need low < high, got [{low}, {high}]")


def generate_dataset(spec: LevySpec) -> Dataset:
    """Sample inputs uniformly from the box and label them with Levy values.

    Fully determined by ``spec.seed``; the targets matrix has a single
    column. ``n_samples=0`` yields a valid empty dataset.
    """
    rng = np.random.default_rng(spec.seed)
    inputs = rng.uniform(spec.low, spec.high, size=(spec.n_samples, spec.n_dims))
    targets = levy_values(inputs)[:, None]
    return Dataset(inputs=inputs, targets=targets)


def save_dataset_csv(data: Dataset, path) -> None:
    """Write the dataset as CSV: x1..xn feature columns, then the target."""
    path = Path(path)
    n_dims = data.inputs.shape[1]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i + 1}" for i in range(n_dims)] + ["target"])
        for row, target in zip(data.inputs, data.targets):
            writer.writerow([f"{v:.17g}" for v in row] + [f"{target[0]:.17g}"])


def load_dataset_csv(path) -> Dataset:
    """Read a dataset written by :func:`save_dataset_csv`."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        n_dims = len(header) - 1
        inputs, targets = [], []
        for row in reader:
            values = [float(v) for v in row]
            inputs.append(values[:n_dims])
            targets.append(values[n_dims:])
    return Dataset(
        inputs=np.asarray(inputs, dtype=float).reshape(-1, n_dims),
        targets=np.asarray(targets, dtype=float).reshape(-1, 1),
    )
