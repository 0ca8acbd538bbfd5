"""Small input-validation helpers shared across the package."""

from __future__ import annotations

import numbers

import numpy as np


def check_vector(x, name: str = "x", expected_len: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a 1-D float64 array, validating shape and finiteness of shape only.

    Values are not checked for finiteness here; optimizers treat nonfinite
    values as a divergence signal rather than an input error.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if expected_len is not None and arr.shape[0] != expected_len:
        raise ValueError(
            f"{name} has length {arr.shape[0]}, expected {expected_len}"
        )
    return arr


def check_scalar(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    return float(value)


def check_positive(value, name: str) -> float:
    value = check_scalar(value, name)
    if not value > 0:
        raise ValueError(f"{name} must be > 0, got {value}")
    return value


def check_nonnegative(value, name: str) -> float:
    value = check_scalar(value, name)
    if not value >= 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return value


def check_positive_int(value, name: str) -> int:
    if not isinstance(value, numbers.Integral) or isinstance(value, bool):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if not value > 0:
        raise ValueError(f"{name} must be > 0, got {value}")
    return int(value)


def check_nonnegative_int(value, name: str) -> int:
    if not isinstance(value, numbers.Integral) or isinstance(value, bool):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if not value >= 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return int(value)


def check_in_interval(
    value, name: str, low: float, high: float, *, closed_low: bool = True, closed_high: bool = True
) -> float:
    value = check_scalar(value, name)
    lo_ok = value >= low if closed_low else value > low
    hi_ok = value <= high if closed_high else value < high
    if not (lo_ok and hi_ok):
        lo_b = "[" if closed_low else "("
        hi_b = "]" if closed_high else ")"
        raise ValueError(f"{name} must be in {lo_b}{low}, {high}{hi_b}, got {value}")
    return value
