"""Feed-forward network on a flat parameter vector, with exact gradients.

The optimizers see a model only through two functions of a single flat
parameter vector ``w``: the mean squared-error loss

    E(w) = (1 / (2 n)) * sum over samples of |output - target|^2

and its gradient, computed by reverse-mode accumulation (vectorized over the
whole batch). Hidden layers use the logistic sigmoid, the output layer is
linear. Parameters are packed layer by layer, weight matrix first
(row-major), bias vector second, so the same ``w`` always unpacks the same
way and optimizer state is a plain 1-D float64 array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_vector


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function, safe for large |z|."""
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True)
class Network:
    """Architecture only: layer widths from input to output."""

    layer_sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.layer_sizes)
        object.__setattr__(self, "layer_sizes", sizes)
        if len(sizes) < 2:
            raise ValueError("need at least an input and an output layer")
        if any(s < 1 for s in sizes):
            raise ValueError(f"layer sizes must be positive, got {sizes}")

    @property
    def parameter_count(self) -> int:
        sizes = self.layer_sizes
        return sum(sizes[i] * sizes[i + 1] + sizes[i + 1] for i in range(len(sizes) - 1))

    def unpack(self, w: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
        """Split flat ``w`` into per-layer (weight matrix, bias) views."""
        w = check_vector(w, "w", expected_len=self.parameter_count)
        layers = []
        offset = 0
        sizes = self.layer_sizes
        for i in range(len(sizes) - 1):
            n_in, n_out = sizes[i], sizes[i + 1]
            W = w[offset : offset + n_in * n_out].reshape(n_in, n_out)
            offset += n_in * n_out
            b = w[offset : offset + n_out]
            offset += n_out
            layers.append((W, b))
        return layers


@dataclass(frozen=True)
class Dataset:
    """Paired input and target matrices, one row per sample."""

    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self) -> None:
        inputs = np.asarray(self.inputs, dtype=float)
        targets = np.asarray(self.targets, dtype=float)
        if inputs.ndim != 2 or targets.ndim != 2:
            raise ValueError(
                f"inputs and targets must be 2-D, got shapes {inputs.shape}, {targets.shape}"
            )
        if inputs.shape[0] != targets.shape[0]:
            raise ValueError(
                f"inputs have {inputs.shape[0]} rows, targets {targets.shape[0]}"
            )
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    @property
    def n(self) -> int:
        return self.inputs.shape[0]


def init_params(net: Network, seed: int) -> np.ndarray:
    """Draw all weights and biases i.i.d. uniform on [-0.5, 0.5], reproducibly."""
    rng = np.random.default_rng(seed)
    return rng.uniform(-0.5, 0.5, size=net.parameter_count)


def _check_data(net: Network, data: Dataset) -> None:
    if data.inputs.shape[1] != net.layer_sizes[0]:
        raise ValueError(
            f"inputs have {data.inputs.shape[1]} features, network expects {net.layer_sizes[0]}"
        )
    if data.targets.shape[1] != net.layer_sizes[-1]:
        raise ValueError(
            f"targets have {data.targets.shape[1]} columns, network outputs {net.layer_sizes[-1]}"
        )


def forward(net: Network, w: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Batch forward pass; returns the (n, n_out) output matrix."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != net.layer_sizes[0]:
        raise ValueError(
            f"X must be (n, {net.layer_sizes[0]}), got shape {X.shape}"
        )
    layers = net.unpack(w)
    a = X
    for i, (W, b) in enumerate(layers):
        z = a @ W + b
        a = z if i == len(layers) - 1 else sigmoid(z)
    return a


def loss(net: Network, w: np.ndarray, data: Dataset) -> float:
    """Half mean squared error over the dataset."""
    _check_data(net, data)
    residual = forward(net, w, data.inputs) - data.targets
    return float(np.sum(residual * residual)) / (2.0 * data.n)


def grad(net: Network, w: np.ndarray, data: Dataset) -> np.ndarray:
    """Exact gradient of :func:`loss` with respect to the flat parameter vector."""
    _check_data(net, data)
    layers = net.unpack(w)
    n_layers = len(layers)
    # Forward pass, keeping every activation for the backward sweep.
    activations = [data.inputs]
    a = data.inputs
    for i, (W, b) in enumerate(layers):
        z = a @ W + b
        a = z if i == n_layers - 1 else sigmoid(z)
        activations.append(a)
    # Backward pass. delta holds dE/dz for the current layer.
    delta = (activations[-1] - data.targets) / data.n
    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * n_layers  # type: ignore[list-item]
    for i in range(n_layers - 1, -1, -1):
        grads[i] = (activations[i].T @ delta, delta.sum(axis=0))
        if i > 0:
            a_prev = activations[i]
            delta = (delta @ layers[i][0].T) * (a_prev * (1.0 - a_prev))
    out = np.empty(net.parameter_count)
    offset = 0
    for gW, gb in grads:
        out[offset : offset + gW.size] = gW.ravel()
        offset += gW.size
        out[offset : offset + gb.size] = gb
        offset += gb.size
    return out


class NetworkObjective:
    """Adapter binding a network to a dataset, exposing loss(w) and grad(w)."""

    def __init__(self, net: Network, data: Dataset):
        _check_data(net, data)
        self.net = net
        self.data = data

    @property
    def dim(self) -> int:
        return self.net.parameter_count

    def loss(self, w: np.ndarray) -> float:
        return loss(self.net, w, self.data)

    def grad(self, w: np.ndarray) -> np.ndarray:
        return grad(self.net, w, self.data)
