"""Backtracking line search with the Armijo sufficient-decrease test.

The search works on a scalar restriction ``phi(alpha) = E(base + alpha * d)``
supplied as a callable, so it never touches gradients: its cost is exactly
the number of ``phi`` calls it makes, which the result reports as
``fev_used``. Trial steps start at ``alpha_init`` and shrink geometrically
until

    phi(alpha) <= phi0 + armijo_c * alpha * dphi0

holds. A NaN trial value simply fails the test and triggers another
backtrack. If all ``max_backtracks`` trials fail the search gives up and
returns the last (smallest) trial with ``converged=False``; the caller
decides whether to accept it anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .validation import check_in_interval, check_positive, check_positive_int, check_scalar


class NondescentDirectionError(ValueError):
    """Raised when the supplied directional derivative is not negative."""


@dataclass(frozen=True)
class LineSearchConfig:
    """Constants of the backtracking loop.

    ``max_backtracks`` is the total number of trial evaluations allowed, so
    an exhausted search costs exactly ``max_backtracks`` function
    evaluations.
    """

    armijo_c: float = 1e-3
    backtrack_factor: float = 0.5
    alpha_init: float = 1.0
    max_backtracks: int = 30

    def __post_init__(self) -> None:
        check_in_interval(self.armijo_c, "armijo_c", 0.0, 1.0, closed_low=False, closed_high=False)
        check_in_interval(
            self.backtrack_factor, "backtrack_factor", 0.0, 1.0, closed_low=False, closed_high=False
        )
        check_positive(self.alpha_init, "alpha_init")
        check_positive_int(self.max_backtracks, "max_backtracks")


@dataclass(frozen=True)
class LineSearchResult:
    """Outcome of one search: accepted step, its value, and the evaluation bill."""

    alpha: float
    phi_alpha: float
    fev_used: int
    converged: bool


def backtracking_search(
    phi: Callable[[float], float],
    phi0: float,
    dphi0: float,
    config: LineSearchConfig = LineSearchConfig(),
) -> LineSearchResult:
    """Find a step length satisfying the Armijo condition along a descent direction.

    ``phi0`` and ``dphi0`` are the value and directional derivative at
    ``alpha = 0``; both are supplied by the caller (they are already known
    there), so the search itself only ever evaluates ``phi`` at trial
    points. Raises :class:`NondescentDirectionError` if ``dphi0 >= 0``,
    which signals a caller bug rather than a numerical failure.
    """
    phi0 = check_scalar(phi0, "phi0")
    dphi0 = check_scalar(dphi0, "dphi0")
    if not dphi0 < 0:
        raise NondescentDirectionError(
            f"directional derivative must be negative, got {dphi0}"
        )
    alpha = config.alpha_init
    value = phi0
    for trial in range(1, config.max_backtracks + 1):
        value = float(phi(alpha))
        # NaN compares false, so a NaN trial backtracks like any failed one.
        if value <= phi0 + config.armijo_c * alpha * dphi0:
            return LineSearchResult(alpha=alpha, phi_alpha=value, fev_used=trial, converged=True)
        if trial < config.max_backtracks:
            alpha *= config.backtrack_factor
    return LineSearchResult(
        alpha=alpha, phi_alpha=value, fev_used=config.max_backtracks, converged=False
    )
