"""
Grid evaluation of the closed forms, one row per (params, t) cell.
"""

import logging
import math
from collections.abc import Iterable
from typing import IO

import pandas as pd

from src.analytic.fluid import (
    Deadline,
    FluidParams,
    delivery_probability,
    expected_delay,
    holders_at,
    requesters_at,
)
from src.shared.errors import EdgeSimError, EmptyGridError

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["r0", "h0", "m_lambda", "t_s", "holders", "requesters", "p_dlv", "e_delay_s"]


def _cell(params: FluidParams, t: float) -> dict:
    row = {
        "r0": params.r0,
        "h0": params.h0,
        "m_lambda": params.m_lambda,
        "t_s": t,
        "holders": math.nan,
        "requesters": math.nan,
        "p_dlv": math.nan,
        "e_delay_s": math.nan,
        "error": "",
    }
    try:
        row["holders"] = holders_at(params, t)
        row["requesters"] = requesters_at(params, t)
        row["p_dlv"] = delivery_probability(params, t)
        # The deadline is the evaluation time: P{T <= TTL} and E[T | TTL] share one axis.
        row["e_delay_s"] = expected_delay(params, Deadline(ttl=t))
    except EdgeSimError as e:
        row["error"] = str(e)
    return row


def sweep(params_grid: Iterable[FluidParams], time_grid: Iterable[float]) -> pd.DataFrame:
    """
    Evaluate every closed form on the cartesian product of the grids.

    Rows are ordered params-major, then by position in ``time_grid``. A
    cell that fails keeps its row with NaN values and the message in the
    ``error`` column; the sweep itself never aborts.

    Returns:
        DataFrame with SWEEP_COLUMNS plus ``error``
    """
    params_grid = list(params_grid)
    time_grid = list(time_grid)
    if not params_grid:
        raise EmptyGridError("params grid is empty")
    if not time_grid:
        raise EmptyGridError("time grid is empty")

    rows = [_cell(params, t) for params in params_grid for t in time_grid]
    table = pd.DataFrame(rows, columns=[*SWEEP_COLUMNS, "error"])

    flagged = int((table["error"] != "").sum())
    if flagged:
        logger.warning("%d of %d sweep cells flagged", flagged, len(table))
    logger.info("✓ Swept %d params x %d times", len(params_grid), len(time_grid))
    return table


def write_sweep_csv(table: pd.DataFrame, sink: str | IO[str]) -> None:
    """Write the sweep with the fixed CSV header; NaN cells are left empty."""
    table.to_csv(sink, columns=SWEEP_COLUMNS, index=False, lineterminator="\n")
