"""Tests for src/meetsim/estimators.py and src/shared/seeding.py"""

import io

import numpy as np
import pytest

from src.analytic.fluid import Deadline, FluidParams, delivery_probability, expected_delay
from src.meetsim.estimators import (
    TRACE_COLUMNS,
    estimate,
    estimate_delivery_probability,
    estimate_expected_delay,
    truncated_exponential_ks,
    write_trace_csv,
)
from src.meetsim.model import DisseminationMode, MeetingModel
from src.meetsim.simulator import run_replication
from src.shared.errors import InvalidParamsError
from src.shared.seeding import MAX_SEED, derive_seed, replication_rng


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(7, 3) == derive_seed(7, 3)

    def test_distinct_streams(self):
        seeds = {derive_seed(7, k) for k in range(10_000)}
        assert len(seeds) == 10_000

    def test_base_seed_matters(self):
        assert derive_seed(7, 0) != derive_seed(8, 0)

    def test_stays_in_u64(self):
        for seed in (0, 1, MAX_SEED):
            assert 0 <= derive_seed(seed, 12345) <= MAX_SEED

    @pytest.mark.parametrize("seed,index", [(-1, 0), (MAX_SEED + 1, 0), (0, -1)])
    def test_rejects_out_of_range(self, seed, index):
        with pytest.raises(ValueError):
            derive_seed(seed, index)

    def test_replication_rng_reproducible(self):
        a = replication_rng(7, 2).random(5)
        b = replication_rng(7, 2).random(5)
        assert np.array_equal(a, b)


class TestEstimate:
    def test_shapes(self, small_fixed_model):
        result = estimate(small_fixed_model, Deadline(600), n_replications=10, seed=1)
        assert result.n_replications == 10
        assert len(result.delivery_times) == 500
        assert len(result.replications) == 10

    def test_replication_k_uses_its_own_stream(self, small_fixed_model):
        result = estimate(small_fixed_model, Deadline(600), n_replications=3, seed=11)
        expected = run_replication(small_fixed_model, Deadline(600), replication_rng(11, 2))
        assert result.replications[2] == expected

    def test_single_replication_has_zero_se(self, small_fixed_model):
        result = estimate(small_fixed_model, Deadline(600), n_replications=1, seed=1)
        assert result.p_dlv_se == 0.0
        assert result.e_delay_se_s == 0.0

    def test_rejects_zero_replications(self, small_fixed_model):
        with pytest.raises(InvalidParamsError):
            estimate(small_fixed_model, Deadline(600), n_replications=0, seed=1)

    def test_deterministic(self, small_epidemic_model):
        a = estimate(small_epidemic_model, Deadline(600), n_replications=20, seed=9)
        b = estimate(small_epidemic_model, Deadline(600), n_replications=20, seed=9)
        assert (a.p_dlv, a.e_delay_s) == (b.p_dlv, b.e_delay_s)
        assert np.array_equal(a.delivery_times, b.delivery_times)

    def test_independent_of_worker_count(self, small_epidemic_model):
        serial = estimate(small_epidemic_model, Deadline(600), n_replications=16, seed=3)
        parallel = estimate(
            small_epidemic_model, Deadline(600), n_replications=16, seed=3, workers=2
        )
        assert serial.p_dlv == parallel.p_dlv
        assert np.array_equal(serial.delivery_times, parallel.delivery_times)

    def test_thin_views_agree(self, small_fixed_model):
        p, p_se = estimate_delivery_probability(small_fixed_model, Deadline(600), 20, seed=4)
        delay, delay_se = estimate_expected_delay(small_fixed_model, Deadline(600), 20, seed=4)
        full = estimate(small_fixed_model, Deadline(600), 20, seed=4)
        assert (p, p_se) == (full.p_dlv, full.p_dlv_se)
        assert (delay, delay_se) == (full.e_delay_s, full.e_delay_se_s)


class TestFixedHoldersAgainstClosedForm:
    @pytest.mark.parametrize("h0", [10, 30])
    @pytest.mark.parametrize("ttl", [600, 3600])
    def test_mean_delay_and_distribution(self, h0, ttl):
        model = MeetingModel(
            n_requesters=1000,
            n_holders=h0,
            m_lambda=3.3e-5,
            mode=DisseminationMode.FIXED_HOLDERS,
        )
        result = estimate(model, Deadline(ttl), n_replications=100, seed=2024)
        params = FluidParams(r0=1000, h0=h0, m_lambda=3.3e-5)

        analytic = expected_delay(params, Deadline(ttl))
        assert abs(result.e_delay_s - analytic) / analytic <= 0.02
        ks = truncated_exponential_ks(result.delivery_times, 3.3e-5 * h0, ttl)
        assert ks <= 0.01


class TestEpidemicAgainstMeanField:
    def test_delivery_probability_within_tolerance(self, small_epidemic_model):
        result = estimate(small_epidemic_model, Deadline(600), n_replications=2000, seed=7)
        analytic = delivery_probability(FluidParams(r0=50, h0=10, m_lambda=3.3e-5), 600)
        assert abs(result.p_dlv - analytic) <= max(0.05, 3 * result.p_dlv_se)


class TestTruncatedExponentialKs:
    def test_exact_quantiles_are_close(self):
        rate, ttl = 1e-3, 1000.0
        u = (np.arange(100_000) + 0.5) / 100_000
        samples = np.minimum(-np.log1p(-u) / rate, ttl)
        assert truncated_exponential_ks(samples, rate, ttl) < 1e-4

    def test_wrong_rate_is_far(self, rng):
        samples = np.minimum(rng.exponential(1000.0, 10_000), 1000.0)
        assert truncated_exponential_ks(samples, 1e-2, 1000.0) > 0.3

    def test_atom_mass_is_checked(self):
        # all mass at the deadline, reference atom is e^{-1}
        samples = np.full(1000, 1000.0)
        assert truncated_exponential_ks(samples, 1e-3, 1000.0) == pytest.approx(1 - np.exp(-1))

    def test_rejects_empty(self):
        with pytest.raises(InvalidParamsError):
            truncated_exponential_ks([], 1e-3, 10)


class TestWriteTraceCsv:
    def test_one_row_per_requester(self, small_fixed_model):
        result = estimate(small_fixed_model, Deadline(600), n_replications=3, seed=1)
        buf = io.StringIO()
        write_trace_csv(result.replications, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == ",".join(TRACE_COLUMNS)
        assert len(lines) == 1 + 150
        assert lines[1].startswith("0,0,")
