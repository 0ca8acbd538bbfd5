"""Nesterov-style momentum coefficient schedule.

The momentum coefficient ``mu_k`` used by the accelerated optimizers is not a
constant: it is generated from an auxiliary scalar sequence ``theta_k``. Each
step solves a quadratic recurrence for ``theta_{k+1}`` and combines the two
consecutive theta values into a coefficient

    mu_k = theta_k * (1 - theta_k) / (theta_k**2 + theta_{k+1}),

clamped from above by a cap strictly below 1 so that the momentum term can
never freeze the iteration. Starting from ``theta_0 = 1`` this yields
``mu_0 = 0`` exactly (the first step takes no momentum) and a mu sequence that
ramps up toward the cap as theta decays toward its fixed point
``sqrt(gamma)``.

The default recurrence is

    theta_{k+1}**2 = (1 - theta_{k+1}) * theta_k**2 + gamma * theta_{k+1},

whose positive root stays in (0, 1) and decreases monotonically (down to
float64 resolution at the fixed point). An alternate sign variant, selected
with ``literal=True``, flips the ``(1 - theta_{k+1})`` factor to
``(1 + theta_{k+1})``; under it theta grows above 1 and the raw coefficient
formula goes negative, so the schedule clamps the emitted mu to 0. The
variant is kept only so the two behaviors can be compared side by side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .validation import check_in_interval, check_positive

DEFAULT_GAMMA = 1e-5
DEFAULT_MU_CAP = 0.99999


def advance_theta(theta: float, gamma: float, *, literal: bool = False) -> float:
    """Return ``theta_{k+1}`` given ``theta_k``, in closed form.

    The recurrence rearranges to the monic quadratic

        t**2 + (theta**2 - gamma) * t - theta**2 = 0     (default)
        t**2 - (theta**2 + gamma) * t - theta**2 = 0     (literal variant)

    in ``t = theta_{k+1}``; the product of the roots is ``-theta**2 < 0``,
    so there is exactly one positive root, returned here:
    ``t = (-b + sqrt(b**2 + 4c)) / 2`` with ``c = theta**2`` and
    ``b = theta**2 - gamma`` (default) or ``b = -(theta**2 + gamma)``.
    """
    theta = check_positive(theta, "theta")
    gamma = check_positive(gamma, "gamma")
    c = theta * theta
    b = -(c + gamma) if literal else c - gamma
    return (-b + math.sqrt(b * b + 4.0 * c)) / 2.0


def compute_mu(theta_k: float, theta_next: float, *, mu_cap: float = DEFAULT_MU_CAP) -> float:
    """Combine consecutive theta values into a momentum coefficient.

    Returns ``min(theta_k * (1 - theta_k) / (theta_k**2 + theta_next),
    mu_cap)``. The value is not clamped from below; the schedule object is
    responsible for flooring at 0 (relevant only to the literal variant,
    where ``theta_k > 1`` makes the numerator negative).
    """
    theta_k = check_positive(theta_k, "theta_k")
    theta_next = check_positive(theta_next, "theta_next")
    mu_cap = check_in_interval(mu_cap, "mu_cap", 0.0, 1.0, closed_high=False)
    raw = theta_k * (1.0 - theta_k) / (theta_k * theta_k + theta_next)
    return min(raw, mu_cap)


@dataclass
class MomentumSchedule:
    """Stateful generator of the momentum coefficients ``mu_0, mu_1, ...``.

    Plain mutable dataclass: cheap to copy (``copy.copy`` or
    ``dataclasses.replace``) when independent per-trial schedules are needed.
    ``next_mu()`` advances theta by one step and returns the emitted
    coefficient, which always lies in ``[0, mu_cap]``.
    """

    gamma: float = DEFAULT_GAMMA
    mu_cap: float = DEFAULT_MU_CAP
    literal: bool = False
    theta: float = field(default=1.0)
    steps_taken: int = field(default=0)

    def __post_init__(self) -> None:
        self.gamma = check_positive(self.gamma, "gamma")
        self.mu_cap = check_in_interval(self.mu_cap, "mu_cap", 0.0, 1.0, closed_high=False)
        self.theta = check_positive(self.theta, "theta")

    def next_mu(self) -> float:
        """Emit ``mu_k`` for the current step and advance theta.

        The emitted value is always finite and in ``[0, mu_cap]``. Under the
        literal variant theta blows up (it roughly squares each step,
        overflowing to inf within ~15 steps) and the raw coefficient is
        negative or NaN; those cases clamp to 0.
        """
        theta_next = advance_theta(self.theta, self.gamma, literal=self.literal)
        raw = compute_mu(self.theta, theta_next, mu_cap=self.mu_cap)
        self.theta = theta_next
        self.steps_taken += 1
        if not math.isfinite(raw) or raw < 0.0:
            return 0.0
        return raw
