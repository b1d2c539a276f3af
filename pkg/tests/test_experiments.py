"""Tests for src/harness/experiments.py"""

import io
import math

import pandas as pd
import pytest

from src.cce.engine import ActionKind
from src.harness.config import load_config, parse_config, with_overrides
from src.harness.experiments import (
    FIG2_COLUMNS,
    FIG3_COLUMNS,
    SIMULATE_COLUMNS,
    analytic_curves,
    cce_config,
    reproduce_fig2,
    reproduce_fig3,
    run_cce,
    simulate,
    write_csv,
)
from src.shared.errors import ConfigError, DegenerateModelError


@pytest.fixture
def fig2_config(sample_configs):
    return load_config(sample_configs / "paper_fig2.cfg")


@pytest.fixture
def fast_fig2_config(fig2_config):
    return with_overrides(fig2_config, replications=40)


class TestAnalyticCurves:
    def test_grid_per_h0(self, fig2_config):
        table = analytic_curves(fig2_config)
        assert len(table) == 3 * 61
        assert (table["error"] == "").all()


class TestReproduceFig2:
    def test_columns_and_rows(self, fig2_config):
        table = reproduce_fig2(fig2_config, simulated=False)
        assert list(table.columns) == FIG2_COLUMNS
        assert len(table) == 3 * 61
        assert table["p_dlv_sim"].isna().all()

    def test_h0_ordering_at_every_ttl(self, fig2_config):
        table = reproduce_fig2(fig2_config, simulated=False)
        wide = table.pivot(index="ttl_s", columns="h0", values="p_dlv")
        assert (wide[30.0] >= wide[20.0]).all()
        assert (wide[20.0] >= wide[10.0]).all()
        assert wide[10.0].is_monotonic_increasing

    def test_endpoint_values(self, fig2_config):
        table = reproduce_fig2(fig2_config, simulated=False).set_index(["h0", "ttl_s"])
        assert table.loc[(10.0, 600.0), "p_dlv"] == pytest.approx(0.275407, abs=1e-5)
        assert table.loc[(30.0, 600.0), "p_dlv"] == pytest.approx(0.5923, abs=1e-4)
        assert table.loc[(30.0, 3600.0), "p_dlv"] > 0.999

    def test_ttl_zero_column_is_zero(self, fig2_config):
        table = reproduce_fig2(fig2_config, simulated=False)
        assert (table.loc[table["ttl_s"] == 0, "p_dlv"] == 0).all()

    def test_simulated_points_only_at_configured_deadlines(self, fast_fig2_config):
        table = reproduce_fig2(fast_fig2_config)
        simulated = table.dropna(subset=["p_dlv_sim"])
        assert len(simulated) == 9
        assert set(simulated["ttl_s"]) == {600.0, 1800.0, 3600.0}
        assert (simulated["p_dlv_se"] >= 0).all()

    def test_simulation_needs_seed(self, minimal_config_text):
        with pytest.raises(ConfigError):
            reproduce_fig2(parse_config(minimal_config_text))


class TestReproduceFig3:
    def test_canned_values(self, fig2_config):
        table = reproduce_fig3(fig2_config, simulated=False).set_index(["h0", "ttl_s"])
        assert list(table.reset_index().columns) == FIG3_COLUMNS
        assert table.loc[(10.0, 3600.0), "e_delay_s"] == pytest.approx(2106.6, rel=1e-3)
        assert table.loc[(30.0, 600.0), "e_delay_s"] == pytest.approx(452.4, rel=1e-3)

    def test_delay_decreases_in_h0(self, fig2_config):
        table = reproduce_fig3(fig2_config, simulated=False)
        for _, group in table.groupby("ttl_s"):
            assert group.sort_values("h0")["e_delay_s"].is_monotonic_decreasing

    def test_ttl_zero_row(self, minimal_config_text):
        config = parse_config(minimal_config_text.replace("ttl_s = 600, 1800, 3600", "ttl_s = 0"))
        table = reproduce_fig3(config, simulated=False)
        assert (table["e_delay_s"] == 0).all()

    def test_simulated_close_to_closed_form(self, fast_fig2_config):
        table = reproduce_fig3(fast_fig2_config)
        rel = (table["e_delay_sim_s"] - table["e_delay_s"]).abs() / table["e_delay_s"]
        assert (rel < 0.1).all()

    def test_zero_holders_is_degenerate(self, minimal_config_text):
        config = parse_config(minimal_config_text.replace("h0 = 10, 20, 30", "h0 = 0"))
        with pytest.raises(DegenerateModelError):
            reproduce_fig3(config, simulated=False)


class TestSimulate:
    def test_long_table(self, fast_fig2_config):
        table = simulate(fast_fig2_config)
        assert list(table.columns) == SIMULATE_COLUMNS
        assert len(table) == 18
        assert set(table["figure"]) == {"p_dlv", "e_delay_s"}

    def test_rows_come_from_figure_tables(self, fast_fig2_config):
        table = simulate(fast_fig2_config)
        fig2 = reproduce_fig2(fast_fig2_config)
        fig3 = reproduce_fig3(fast_fig2_config)
        probability = table[table["figure"] == "p_dlv"]
        delay = table[table["figure"] == "e_delay_s"]
        assert list(probability["simulated"]) == list(fig2["p_dlv_sim"].dropna())
        assert list(delay["simulated"]) == list(fig3["e_delay_sim_s"])
        assert list(delay["analytic"]) == list(fig3["e_delay_s"])

    def test_byte_identical_reruns(self, fast_fig2_config):
        first, second = io.StringIO(), io.StringIO()
        write_csv(simulate(fast_fig2_config), first)
        write_csv(simulate(fast_fig2_config), second)
        assert first.getvalue() == second.getvalue()

    def test_writes_trace(self, quick_config, tmp_path):
        trace = tmp_path / "trace.csv"
        config = quick_config.model_copy(
            update={"sim": quick_config.sim.model_copy(update={"trace": str(trace)})}
        )
        simulate(config)
        frame = pd.read_csv(trace)
        # 2 figures x 1 cell x 200 replications x 50 requesters
        assert len(frame) == 2 * 200 * 50
        assert {"figure", "h0", "ttl_s", "via"} <= set(frame.columns)


class TestRunCce:
    def test_peak_hour_config(self, sample_configs):
        metrics = run_cce(load_config(sample_configs / "peak_hour.cfg"))
        assert metrics.deadline_misses == 0
        assert metrics.peak_cce_util < metrics.peak_baseline_util
        assert metrics.count(ActionKind.BUFFER) == 60

    def test_engine_settings_follow_config(self, sample_configs):
        config = cce_config(load_config(sample_configs / "peak_hour.cfg"))
        assert config.capacity_bps == 1e8
        assert math.isinf(config.buffer_bits)
        assert config.redirect

    def test_flat_profile(self, minimal_config_text):
        config = parse_config(minimal_config_text + "\n[cce]\nprofile = flat\n")
        metrics = run_cce(config)
        assert metrics.count(ActionKind.BUFFER) == 0
        assert metrics.peak_cce_util == metrics.peak_baseline_util
