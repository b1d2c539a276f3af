"""Closed-form fluid model, its RK4 oracle and grid sweeps."""

from src.analytic.fluid import (
    Deadline,
    FluidParams,
    PopulationState,
    delivery_probability,
    delivery_probability_fixed_holders,
    expected_delay,
    holders_at,
    requesters_at,
    ttl_grid,
)
from src.analytic.oracle import Trajectory, ode_oracle, rk4_step
from src.analytic.sweep import SWEEP_COLUMNS, sweep, write_sweep_csv

__all__ = [
    "Deadline",
    "FluidParams",
    "PopulationState",
    "SWEEP_COLUMNS",
    "Trajectory",
    "delivery_probability",
    "delivery_probability_fixed_holders",
    "expected_delay",
    "holders_at",
    "ode_oracle",
    "requesters_at",
    "rk4_step",
    "sweep",
    "ttl_grid",
    "write_sweep_csv",
]
