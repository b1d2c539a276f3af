"""Tests for src/analytic/fluid.py"""

import math

import pytest

from src.analytic.fluid import (
    Deadline,
    FluidParams,
    delivery_probability,
    delivery_probability_fixed_holders,
    expected_delay,
    holders_at,
    requesters_at,
    ttl_grid,
)
from src.analytic.oracle import ode_oracle
from src.shared.errors import DegenerateModelError, InvalidParamsError, InvalidTimeError


class TestFluidParams:
    def test_total_is_conserved_population(self):
        assert FluidParams(r0=50, h0=10, m_lambda=3.3e-5).total == 60

    @pytest.mark.parametrize("kwargs", [
        {"r0": 0, "h0": 10, "m_lambda": 1e-5},
        {"r0": 50, "h0": -1, "m_lambda": 1e-5},
        {"r0": 50, "h0": 10, "m_lambda": 0},
        {"r0": 50, "h0": 10, "m_lambda": math.nan},
        {"r0": math.inf, "h0": 10, "m_lambda": 1e-5},
    ])
    def test_rejects_out_of_domain(self, kwargs):
        with pytest.raises(InvalidParamsError):
            FluidParams(**kwargs)

    def test_accepts_fractional_populations(self):
        assert FluidParams(r0=12.5, h0=0.5, m_lambda=1e-4).total == 13.0


class TestHoldersAndRequesters:
    def test_initial_condition(self, reference_params):
        params = reference_params[10]
        assert holders_at(params, 0) == pytest.approx(10)
        assert requesters_at(params, 0) == pytest.approx(50)

    def test_values_at_600s(self, reference_params):
        params = reference_params[10]
        assert requesters_at(params, 600) == pytest.approx(36.2296, abs=1e-3)
        assert holders_at(params, 600) == pytest.approx(23.7704, abs=1e-3)

    def test_match_oracle_at_600s(self, reference_params):
        params = reference_params[10]
        end = ode_oracle(params, 600).at_end()
        assert holders_at(params, 600) == pytest.approx(end.h, abs=1e-6)
        assert requesters_at(params, 600) == pytest.approx(end.r, abs=1e-6)

    def test_conservation_on_random_draws(self, rng):
        for _ in range(1000):
            params = FluidParams(
                r0=float(rng.uniform(1, 100)),
                h0=float(rng.uniform(0, 50)),
                m_lambda=float(10 ** rng.uniform(-6, -3)),
            )
            t = float(rng.uniform(0, 1e4))
            total = holders_at(params, t) + requesters_at(params, t)
            assert abs(total - params.total) / params.total <= 1e-9

    def test_no_holders_means_no_spread(self):
        params = FluidParams(r0=50, h0=0, m_lambda=3.3e-5)
        assert holders_at(params, 1e6) == 0.0
        assert requesters_at(params, 1e6) == 50.0

    def test_huge_time_does_not_overflow(self, reference_params):
        params = reference_params[30]
        assert requesters_at(params, 1e12) == 0.0
        assert holders_at(params, 1e12) == pytest.approx(80.0)

    @pytest.mark.parametrize("t", [-1, math.inf, math.nan])
    def test_rejects_invalid_time(self, reference_params, t):
        with pytest.raises(InvalidTimeError):
            holders_at(reference_params[10], t)


class TestDeliveryProbability:
    def test_values_at_600s(self, reference_params):
        assert delivery_probability(reference_params[10], 600) == pytest.approx(0.275407, abs=1e-5)
        assert delivery_probability(reference_params[30], 600) == pytest.approx(0.5923, abs=1e-4)

    def test_matches_oracle_within_1e_6(self, reference_params):
        for h0 in (10, 30):
            end = ode_oracle(reference_params[h0], 600).at_end()
            assert delivery_probability(reference_params[h0], 600) == pytest.approx(
                1 - end.r / 50, abs=1e-6
            )

    def test_zero_at_time_zero(self, reference_params):
        for params in reference_params.values():
            assert delivery_probability(params, 0) == 0.0

    def test_zero_without_holders(self):
        assert delivery_probability(FluidParams(r0=50, h0=0, m_lambda=3.3e-5), 3600) == 0.0

    def test_approaches_one(self, reference_params):
        assert delivery_probability(reference_params[30], 3600) > 0.999
        assert delivery_probability(reference_params[30], 1e9) == 1.0

    def test_non_decreasing_in_time_and_h0(self, reference_params):
        grid = ttl_grid(60, 3600)
        for t in grid:
            values = [delivery_probability(reference_params[h0], t) for h0 in (10, 20, 30)]
            assert values == sorted(values)
        for params in reference_params.values():
            curve = [delivery_probability(params, t) for t in grid]
            assert curve == sorted(curve)

    def test_fixed_holders_is_exponential_cdf(self, reference_params):
        expected = 1 - math.exp(-3.3e-5 * 10 * 600)
        probability = delivery_probability_fixed_holders(reference_params[10], 600)
        assert probability == pytest.approx(expected)

    def test_fixed_holders_is_below_epidemic(self, reference_params):
        params = reference_params[10]
        assert delivery_probability_fixed_holders(params, 600) < delivery_probability(params, 600)


class TestMonotonicity:
    """Orderings of the closed forms over random parameter draws."""

    @staticmethod
    def _draw(rng):
        r0 = float(rng.uniform(1, 100))
        h0 = float(rng.uniform(0.1, 50))
        m_lambda = float(10 ** rng.uniform(-6, -3))
        return FluidParams(r0=r0, h0=h0, m_lambda=m_lambda), float(rng.uniform(0, 1e4))

    def test_probability_non_decreasing(self, rng):
        for _ in range(500):
            params, t = self._draw(rng)
            p = delivery_probability(params, t)
            more_holders = FluidParams(params.r0, params.h0 + rng.uniform(0, 20), params.m_lambda)
            faster = FluidParams(params.r0, params.h0, params.m_lambda * rng.uniform(1, 10))
            assert delivery_probability(more_holders, t) >= p - 1e-12
            assert delivery_probability(faster, t) >= p - 1e-12
            assert delivery_probability(params, t + rng.uniform(0, 1e3)) >= p - 1e-12

    def test_delay_non_increasing_in_h0(self, rng):
        for _ in range(500):
            params, t = self._draw(rng)
            deadline = Deadline(t)
            delay = expected_delay(params, deadline)
            more_holders = FluidParams(params.r0, params.h0 + rng.uniform(0, 20), params.m_lambda)
            assert expected_delay(more_holders, deadline) <= delay * (1 + 1e-12)

    def test_delay_non_decreasing_in_deadline(self, rng):
        for _ in range(500):
            params, t = self._draw(rng)
            delay = expected_delay(params, Deadline(t))
            longer = Deadline(t + float(rng.uniform(0, 1e3)))
            assert expected_delay(params, longer) >= delay * (1 - 1e-12)


class TestExpectedDelay:
    def test_canned_values(self, reference_params):
        delay = expected_delay(reference_params[10], Deadline(3600))
        assert delay == pytest.approx(2106.6, rel=1e-3)
        assert expected_delay(reference_params[30], Deadline(600)) == pytest.approx(452.4, rel=1e-3)

    def test_zero_deadline(self, reference_params):
        assert expected_delay(reference_params[10], Deadline(0)) == 0.0

    def test_bounded_by_deadline(self, reference_params):
        for params in reference_params.values():
            for ttl in (60, 600, 3600):
                assert 0 < expected_delay(params, Deadline(ttl)) <= ttl

    def test_monotonicity(self, reference_params):
        for ttl in (600, 1800, 3600):
            delays = [expected_delay(reference_params[h0], Deadline(ttl)) for h0 in (10, 20, 30)]
            assert delays == sorted(delays, reverse=True)
        curve = [expected_delay(reference_params[20], Deadline(t)) for t in ttl_grid(60, 3600)]
        assert curve == sorted(curve)

    def test_approaches_mean_for_long_deadline(self, reference_params):
        mean = 1 / (3.3e-5 * 30)
        assert expected_delay(reference_params[30], Deadline(1e7)) == pytest.approx(mean)

    def test_degenerate_without_holders(self):
        with pytest.raises(DegenerateModelError):
            expected_delay(FluidParams(r0=50, h0=0, m_lambda=3.3e-5), Deadline(600))

    def test_negative_deadline_rejected(self):
        with pytest.raises(InvalidTimeError):
            Deadline(-1)


class TestTtlGrid:
    def test_inclusive_bounds(self):
        grid = ttl_grid(60, 3600)
        assert grid[0] == 0
        assert grid[-1] == 3600
        assert len(grid) == 61

    def test_appends_uneven_maximum(self):
        assert ttl_grid(100, 250) == [0, 100, 200, 250.0]

    def test_zero_maximum(self):
        assert ttl_grid(60, 0) == [0]

    def test_rejects_bad_step(self):
        with pytest.raises(InvalidParamsError):
            ttl_grid(0, 100)
