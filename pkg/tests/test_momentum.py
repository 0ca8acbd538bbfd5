"""Momentum schedule tests against an independent bisection oracle.

The closed-form theta step is checked against a root bisection on the
defining quadratic, so an algebra mistake in the closed form cannot hide.
Frozen constants below were produced by the oracle itself.
"""

import copy
import math

import numpy as np
import pytest

from lmqn.momentum import (
    DEFAULT_GAMMA,
    DEFAULT_MU_CAP,
    MomentumSchedule,
    advance_theta,
    compute_mu,
)

# Oracle-frozen values for gamma=1e-5, theta_0=1.
THETA_1 = 0.61803675269086167
THETA_2 = 0.45589174076021177
MU_0 = 0.0
MU_1 = 0.28174992935238441
MU_1000 = 0.99341109893291379
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
THETA_FIXED_POINT = math.sqrt(DEFAULT_GAMMA)


def bisect_theta(theta: float, gamma: float, *, literal: bool = False) -> float:
    """Independent root finder for the theta recurrence.

    Solves f(t) = t^2 - (1 -+ t) * theta^2 - gamma * t = 0 for its unique
    positive root by sign bisection; never uses the closed form under test.
    """

    def f(t: float) -> float:
        factor = (1.0 + t) if literal else (1.0 - t)
        return t * t - factor * theta * theta - gamma * t

    lo = 0.0
    hi = 2.0 + 2.0 * theta * theta + gamma
    assert f(lo) < 0 < f(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestAdvanceTheta:
    def test_matches_bisection_oracle_from_one(self):
        assert advance_theta(1.0, 1e-5) == pytest.approx(
            bisect_theta(1.0, 1e-5), abs=1e-15
        )

    def test_first_two_steps_frozen_values(self):
        t1 = advance_theta(1.0, 1e-5)
        t2 = advance_theta(t1, 1e-5)
        assert t1 == pytest.approx(THETA_1, abs=1e-16)
        assert t2 == pytest.approx(THETA_2, abs=1e-16)

    def test_matches_oracle_along_trajectory(self):
        rng = np.random.default_rng(42)
        theta = 1.0
        for _ in range(50):
            gamma = float(rng.uniform(1e-8, 1e-2))
            expected = bisect_theta(theta, gamma)
            assert advance_theta(theta, gamma) == pytest.approx(expected, abs=1e-14)
            theta = expected

    def test_vanishing_gamma_limit_is_golden_ratio_conjugate(self):
        assert advance_theta(1.0, 1e-300) == pytest.approx(GOLDEN, abs=1e-12)

    def test_recurrence_residual_small(self):
        theta = 1.0
        for _ in range(2000):
            t_next = advance_theta(theta, 1e-5)
            residual = t_next**2 - (1.0 - t_next) * theta**2 - 1e-5 * t_next
            assert abs(residual) <= 1e-12
            theta = t_next

    def test_rejects_nonpositive_inputs(self):
        with pytest.raises(ValueError):
            advance_theta(0.0, 1e-5)
        with pytest.raises(ValueError):
            advance_theta(-0.3, 1e-5)
        with pytest.raises(ValueError):
            advance_theta(1.0, 0.0)
        with pytest.raises(ValueError):
            advance_theta(1.0, -1e-5)

    def test_literal_variant_matches_oracle_and_grows(self):
        t1 = advance_theta(1.0, 1e-5, literal=True)
        assert t1 == pytest.approx(bisect_theta(1.0, 1e-5, literal=True), abs=1e-14)
        assert t1 > 1.0


class TestComputeMu:
    def test_first_coefficient_is_exactly_zero(self):
        # theta_0 = 1 makes the numerator 1 * (1 - 1) = 0 with no roundoff.
        assert compute_mu(1.0, THETA_1) == 0.0

    def test_second_coefficient_frozen_value(self):
        assert compute_mu(THETA_1, THETA_2) == pytest.approx(MU_1, abs=1e-16)

    def test_cap_applies(self):
        # Late thetas give mu near 1; a tight cap must win.
        assert compute_mu(0.0032, 0.0032, mu_cap=0.5) == 0.5

    def test_literal_thetas_give_negative_raw_mu(self):
        t1 = advance_theta(1.0, 1e-5, literal=True)
        t2 = advance_theta(t1, 1e-5, literal=True)
        assert compute_mu(t1, t2) < 0.0

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            compute_mu(0.0, 0.5)
        with pytest.raises(ValueError):
            compute_mu(0.5, -0.1)
        with pytest.raises(ValueError):
            compute_mu(0.5, 0.5, mu_cap=1.0)
        with pytest.raises(ValueError):
            compute_mu(0.5, 0.5, mu_cap=-0.1)


class TestMomentumSchedule:
    def test_emits_frozen_prefix(self):
        schedule = MomentumSchedule()
        assert schedule.next_mu() == MU_0
        assert schedule.next_mu() == pytest.approx(MU_1, abs=1e-16)

    def test_mu_1000_frozen_value(self):
        schedule = MomentumSchedule()
        mu = [schedule.next_mu() for _ in range(1001)][-1]
        assert mu == pytest.approx(MU_1000, abs=1e-15)
        assert mu > 0.99

    def test_long_run_sequence_properties(self):
        """Over 1e5 steps: mu stays in [0, cap]; theta stays positive and
        nonincreasing, strictly decreasing away from its fixed point.

        theta reaches the fixed point sqrt(gamma) at float64 resolution
        around step 1e4, after which consecutive values may tie, so strict
        decrease is only asserted while theta^2 exceeds gamma by a margin.
        """
        schedule = MomentumSchedule()
        thetas = [schedule.theta]
        mus = []
        for _ in range(100_000):
            mus.append(schedule.next_mu())
            thetas.append(schedule.theta)
        mus_arr = np.asarray(mus)
        thetas_arr = np.asarray(thetas)
        assert np.all(mus_arr >= 0.0)
        assert np.all(mus_arr <= DEFAULT_MU_CAP)
        assert np.all(thetas_arr > 0.0)
        assert np.all(np.diff(thetas_arr) <= 0.0)
        away = thetas_arr[:-1] ** 2 > DEFAULT_GAMMA * (1.0 + 1e-9)
        assert np.all(thetas_arr[1:][away] < thetas_arr[:-1][away])
        assert thetas_arr[-1] == pytest.approx(THETA_FIXED_POINT, rel=1e-12)
        # Nondecreasing mu: exact over the opening stretch, and within one
        # float64 ulp of 1 across the whole horizon.
        diffs = np.diff(mus_arr)
        assert np.all(diffs[:5000] >= 0.0)
        assert np.all(diffs >= -1e-15)

    def test_cap_binds_when_lowered(self):
        schedule = MomentumSchedule(mu_cap=0.9)
        mus = [schedule.next_mu() for _ in range(3000)]
        assert max(mus) == 0.9

    def test_literal_mode_clamps_to_zero(self):
        schedule = MomentumSchedule(literal=True)
        mus = [schedule.next_mu() for _ in range(100)]
        assert mus == [0.0] * 100
        assert schedule.theta > 1.0

    def test_copies_advance_independently(self):
        schedule = MomentumSchedule()
        schedule.next_mu()
        fork = copy.copy(schedule)
        a = [schedule.next_mu() for _ in range(5)]
        b = [fork.next_mu() for _ in range(5)]
        assert a == b
        assert schedule.steps_taken == fork.steps_taken == 6

    def test_rejects_bad_construction(self):
        with pytest.raises(ValueError):
            MomentumSchedule(gamma=0.0)
        with pytest.raises(ValueError):
            MomentumSchedule(mu_cap=1.0)
        with pytest.raises(ValueError):
            MomentumSchedule(theta=0.0)
