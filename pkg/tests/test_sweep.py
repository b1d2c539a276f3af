"""Tests for src/analytic/sweep.py"""

import io
import math

import pytest

from src.analytic.fluid import FluidParams
from src.analytic.sweep import SWEEP_COLUMNS, sweep, write_sweep_csv
from src.shared.errors import EmptyGridError


class TestSweep:
    def test_row_count_and_order(self, reference_params):
        table = sweep(reference_params.values(), [0, 600, 1800])
        assert len(table) == 9
        assert list(table["h0"]) == [10] * 3 + [20] * 3 + [30] * 3
        assert list(table["t_s"]) == [0, 600, 1800] * 3

    def test_columns(self, reference_params):
        table = sweep([reference_params[10]], [600])
        assert list(table.columns) == [*SWEEP_COLUMNS, "error"]

    def test_values_match_closed_forms(self, reference_params):
        row = sweep([reference_params[10]], [600]).iloc[0]
        assert row["p_dlv"] == pytest.approx(0.275407, abs=1e-5)
        assert row["holders"] + row["requesters"] == pytest.approx(60)
        assert row["error"] == ""

    def test_degenerate_cell_is_flagged_not_fatal(self):
        params = FluidParams(r0=50, h0=0, m_lambda=3.3e-5)
        row = sweep([params], [600]).iloc[0]
        assert row["holders"] == 0.0
        assert row["p_dlv"] == 0.0
        assert math.isnan(row["e_delay_s"])
        assert "h0 = 0" in row["error"]

    def test_empty_params_grid(self):
        with pytest.raises(EmptyGridError):
            sweep([], [600])

    def test_empty_time_grid(self, reference_params):
        with pytest.raises(EmptyGridError):
            sweep(reference_params.values(), [])


class TestWriteSweepCsv:
    def test_header_and_empty_nan_fields(self):
        table = sweep([FluidParams(r0=50, h0=0, m_lambda=3.3e-5)], [60])
        buf = io.StringIO()
        write_sweep_csv(table, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == ",".join(SWEEP_COLUMNS)
        assert lines[1].endswith(",0.0,")

    def test_deterministic_output(self, reference_params):
        first, second = io.StringIO(), io.StringIO()
        write_sweep_csv(sweep(reference_params.values(), [0, 600]), first)
        write_sweep_csv(sweep(reference_params.values(), [0, 600]), second)
        assert first.getvalue() == second.getvalue()
