"""
Canned experiments: delivery probability and expected delay over the
deadline grid, their Monte-Carlo counterparts, and the CCE scenario.

Every simulated cell reuses the configured seed, so cells differ only in
their parameters (common random numbers) and a rerun is byte-identical.
"""

import logging
import math
from collections.abc import Callable, Iterator
from typing import IO

import pandas as pd

from src.analytic.fluid import (
    Deadline,
    FluidParams,
    delivery_probability,
    expected_delay,
    ttl_grid,
)
from src.analytic.sweep import sweep
from src.cce.engine import CceConfig
from src.cce.profile import LoadProfile, flat_profile, peak_hour_profile
from src.cce.scenario import ScenarioMetrics, run_scenario
from src.cce.traffic import default_policy
from src.harness.config import ConfigIssue, ScenarioConfig
from src.meetsim.estimators import MonteCarloEstimate, estimate, trace_frame
from src.meetsim.model import DisseminationMode, MeetingModel
from src.shared.errors import ConfigError

logger = logging.getLogger(__name__)

FIG2_COLUMNS = ["h0", "ttl_s", "p_dlv", "p_dlv_sim", "p_dlv_se"]
FIG3_COLUMNS = ["h0", "ttl_s", "e_delay_s", "e_delay_sim_s", "e_delay_se_s"]
SIMULATE_COLUMNS = ["figure", "h0", "ttl_s", "analytic", "simulated", "se"]

# Called with (h0, ttl_s, estimate) for every simulated cell.
CellHook = Callable[[float, float, MonteCarloEstimate], None]


def require_seed(config: ScenarioConfig) -> int:
    """The seed is never drawn implicitly."""
    if config.sim.seed is None:
        raise ConfigError([ConfigIssue(None, "sim", "seed", "a seed is required for simulation")])
    return config.sim.seed


def fluid_params(config: ScenarioConfig, h0: float) -> FluidParams:
    return FluidParams(r0=config.population.r0, h0=h0, m_lambda=config.meeting.m_lambda)


def meeting_model(config: ScenarioConfig, h0: float, mode: DisseminationMode) -> MeetingModel:
    return MeetingModel(
        n_requesters=config.population.r0,
        n_holders=h0,
        m_lambda=config.meeting.m_lambda,
        rate_dist=config.meeting.rate_dist,
        gamma_shape=config.meeting.gamma_shape,
        mode=mode,
    )


def curve_grid(config: ScenarioConfig) -> list[float]:
    """Dense deadline grid merged with the configured deadlines."""
    grid = ttl_grid(config.deadlines.grid_step_s, config.deadlines.grid_max_s)
    return sorted(set(grid) | set(config.deadlines.ttl_s))


def simulate_cell(
    config: ScenarioConfig, h0: float, ttl_s: float, mode: DisseminationMode
) -> MonteCarloEstimate:
    """Monte-Carlo estimate of one (h0, TTL) cell under the given mode."""
    return estimate(
        meeting_model(config, h0, mode),
        Deadline(ttl=ttl_s),
        n_replications=config.sim.replications,
        seed=require_seed(config),
        workers=config.sim.workers,
    )


def _simulated_cells(
    config: ScenarioConfig, mode: DisseminationMode, on_cell: CellHook | None = None
) -> Iterator[tuple[float, float, MonteCarloEstimate]]:
    for h0 in config.population.h0:
        for ttl_s in config.deadlines.ttl_s:
            result = simulate_cell(config, h0, ttl_s, mode)
            if on_cell is not None:
                on_cell(h0, ttl_s, result)
            yield h0, ttl_s, result


def analytic_curves(config: ScenarioConfig) -> pd.DataFrame:
    """Closed forms for every configured h0 over the deadline grid."""
    params = [fluid_params(config, h0) for h0 in config.population.h0]
    return sweep(params, curve_grid(config))


def reproduce_fig2(
    config: ScenarioConfig, simulated: bool = True, on_cell: CellHook | None = None
) -> pd.DataFrame:
    """
    Delivery probability per h0 over the deadline grid.

    Args:
        config: Validated scenario
        simulated: Add Monte-Carlo points (configured mode) at the
            configured deadlines; other grid rows keep them empty
        on_cell: Receives every simulated cell's full estimate

    Returns:
        DataFrame with FIG2_COLUMNS, h0-major then by TTL
    """
    rows = {}
    for h0 in config.population.h0:
        params = fluid_params(config, h0)
        for t in curve_grid(config):
            rows[(h0, t)] = {
                "h0": h0,
                "ttl_s": t,
                "p_dlv": delivery_probability(params, t),
                "p_dlv_sim": math.nan,
                "p_dlv_se": math.nan,
            }
    if simulated:
        for h0, ttl_s, result in _simulated_cells(config, config.meeting.mode, on_cell):
            rows[(h0, ttl_s)].update(p_dlv_sim=result.p_dlv, p_dlv_se=result.p_dlv_se)
    return pd.DataFrame(list(rows.values()), columns=FIG2_COLUMNS)


def reproduce_fig3(
    config: ScenarioConfig, simulated: bool = True, on_cell: CellHook | None = None
) -> pd.DataFrame:
    """
    Expected delivery delay per (h0, TTL) at the configured deadlines.

    Simulated points always use fixed holders, the setting the closed
    form describes exactly.

    Raises:
        DegenerateModelError: if any configured h0 is 0
    """
    rows = []
    for h0 in config.population.h0:
        params = fluid_params(config, h0)
        for ttl_s in config.deadlines.ttl_s:
            rows.append({
                "h0": h0,
                "ttl_s": ttl_s,
                "e_delay_s": expected_delay(params, Deadline(ttl=ttl_s)),
                "e_delay_sim_s": math.nan,
                "e_delay_se_s": math.nan,
            })
    if simulated:
        cells = _simulated_cells(config, DisseminationMode.FIXED_HOLDERS, on_cell)
        for row, (_, _, result) in zip(rows, cells, strict=True):
            row.update(e_delay_sim_s=result.e_delay_s, e_delay_se_s=result.e_delay_se_s)
    return pd.DataFrame(rows, columns=FIG3_COLUMNS)


def simulate(config: ScenarioConfig) -> pd.DataFrame:
    """
    Analytic and simulated values side by side at the configured deadlines.

    Built from the reproduce_fig2 and reproduce_fig3 tables, keeping only
    the rows that carry a simulated point.

    Returns:
        Long DataFrame with SIMULATE_COLUMNS; ``figure`` is
        ``p_dlv`` or ``e_delay_s``
    """
    require_seed(config)
    traces: list[pd.DataFrame] = []

    def hook(figure: str) -> CellHook | None:
        if not config.sim.trace:
            return None

        def collect(h0: float, ttl_s: float, result: MonteCarloEstimate) -> None:
            frame = trace_frame(result.replications)
            traces.append(frame.assign(figure=figure, h0=h0, ttl_s=ttl_s))
        return collect

    fig2 = reproduce_fig2(config, on_cell=hook("p_dlv"))
    fig3 = reproduce_fig3(config, on_cell=hook("e_delay_s"))

    fig2 = fig2[fig2["ttl_s"].isin(config.deadlines.ttl_s)]
    long = pd.concat([
        pd.DataFrame({
            "figure": "p_dlv", "h0": fig2["h0"], "ttl_s": fig2["ttl_s"],
            "analytic": fig2["p_dlv"], "simulated": fig2["p_dlv_sim"], "se": fig2["p_dlv_se"],
        }),
        pd.DataFrame({
            "figure": "e_delay_s", "h0": fig3["h0"], "ttl_s": fig3["ttl_s"],
            "analytic": fig3["e_delay_s"], "simulated": fig3["e_delay_sim_s"],
            "se": fig3["e_delay_se_s"],
        }),
    ], ignore_index=True)

    if config.sim.trace:
        write_csv(pd.concat(traces, ignore_index=True), config.sim.trace)
        logger.info("✓ Wrote replication trace to %s", config.sim.trace)
    return long[SIMULATE_COLUMNS]


def build_profile(config: ScenarioConfig) -> LoadProfile:
    prof = config.profile
    if config.cce.profile == "flat":
        return flat_profile(
            horizon_s=config.sim.horizon_s,
            load_bps=prof.base_load_bps,
            dt_item_bits=prof.dt_item_bits,
            dt_interval_s=prof.dt_interval_s,
        )
    return peak_hour_profile(
        horizon_s=config.sim.horizon_s,
        base_load_bps=prof.base_load_bps,
        peak_load_bps=prof.peak_load_bps,
        peak_start_s=prof.peak_start_s,
        peak_end_s=prof.peak_end_s,
        dt_item_bits=prof.dt_item_bits,
        dt_interval_s=prof.dt_interval_s,
    )


def cce_config(config: ScenarioConfig) -> CceConfig:
    cce = config.cce
    return CceConfig(
        capacity_bps=config.profile.capacity_bps,
        theta_high=cce.theta_high,
        theta_low=cce.theta_low,
        drain_headroom=cce.drain_headroom,
        guard_s=cce.guard_s,
        buffer_bits=cce.buffer_bits,
        tick_s=cce.tick_s,
        policy=default_policy(config.dt_ttl_s),
    )


def run_cce(config: ScenarioConfig) -> ScenarioMetrics:
    """Run the configured load profile with and without the engine."""
    return run_scenario(build_profile(config), cce_config(config))


def write_csv(table: pd.DataFrame, sink: str | IO[str]) -> None:
    table.to_csv(sink, index=False, lineterminator="\n")
