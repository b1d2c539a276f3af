"""
Cross-check of the simulator against the closed forms.

Fixed-holders runs match the non-growing holder set the delay formula
assumes: their delay is held to a 2% relative tolerance and their delivery
probability, against 1 - e^{-M_λ·h0·TTL}, to max(0.02, 3·SE). Epidemic runs are compared with the
mean-field probability, which is itself an approximation at finite N;
they get an absolute tolerance of max(0.05, 3·SE) and the measured bias
is reported.
"""

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from typing import IO

import pandas as pd

from src.analytic.fluid import (
    Deadline,
    delivery_probability,
    delivery_probability_fixed_holders,
    expected_delay,
)
from src.harness.config import ConfigIssue, ScenarioConfig
from src.harness.experiments import fluid_params, require_seed, simulate_cell
from src.meetsim.model import DisseminationMode
from src.shared.errors import ConfigError

logger = logging.getLogger(__name__)

MIN_REPLICATIONS = 100
PROBABILITY_ABS_TOLERANCE = 0.05
PROBABILITY_SE_MULTIPLIER = 3.0
FIXED_PROBABILITY_ABS_TOLERANCE = 0.02
DELAY_REL_TOLERANCE = 0.02

REPORT_COLUMNS = [
    "h0", "ttl_s", "mode", "metric", "analytic", "estimate",
    "se", "bias", "tolerance", "status",
]


class CellStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ValidationCell:
    h0: float
    ttl_s: float
    mode: DisseminationMode
    metric: str
    analytic: float
    estimate: float
    se: float
    tolerance: float
    status: CellStatus

    @property
    def bias(self) -> float:
        return self.estimate - self.analytic


@dataclass(frozen=True)
class ValidationReport:
    cells: tuple[ValidationCell, ...]

    @property
    def passed(self) -> bool:
        """True iff no non-degenerate cell failed."""
        return all(cell.status is not CellStatus.FAIL for cell in self.cells)

    @property
    def failures(self) -> list[ValidationCell]:
        return [cell for cell in self.cells if cell.status is CellStatus.FAIL]

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "h0": c.h0,
                "ttl_s": c.ttl_s,
                "mode": str(c.mode),
                "metric": c.metric,
                "analytic": c.analytic,
                "estimate": c.estimate,
                "se": c.se,
                "bias": c.bias,
                "tolerance": c.tolerance,
                "status": str(c.status),
            }
            for c in self.cells
        ]
        return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def _judge(analytic: float, estimate: float, tolerance: float) -> CellStatus:
    return CellStatus.PASS if abs(estimate - analytic) <= tolerance else CellStatus.FAIL


def _degenerate(h0: float, ttl_s: float, mode: DisseminationMode, metric: str) -> ValidationCell:
    return ValidationCell(
        h0, ttl_s, mode, metric, math.nan, math.nan, math.nan, math.nan, CellStatus.DEGENERATE
    )


def _probability_cell(config: ScenarioConfig, h0: float, ttl_s: float) -> ValidationCell:
    mode = DisseminationMode.EPIDEMIC
    if h0 == 0:
        return _degenerate(h0, ttl_s, mode, "p_dlv")
    analytic = delivery_probability(fluid_params(config, h0), ttl_s)
    result = simulate_cell(config, h0, ttl_s, mode)
    tolerance = max(PROBABILITY_ABS_TOLERANCE, PROBABILITY_SE_MULTIPLIER * result.p_dlv_se)
    return ValidationCell(
        h0, ttl_s, mode, "p_dlv", analytic, result.p_dlv, result.p_dlv_se, tolerance,
        _judge(analytic, result.p_dlv, tolerance),
    )


def _fixed_holder_cells(config: ScenarioConfig, h0: float, ttl_s: float) -> list[ValidationCell]:
    """Probability and delay cells from one fixed-holders run."""
    mode = DisseminationMode.FIXED_HOLDERS
    if h0 == 0:
        return [_degenerate(h0, ttl_s, mode, "p_dlv"), _degenerate(h0, ttl_s, mode, "e_delay_s")]
    params = fluid_params(config, h0)
    result = simulate_cell(config, h0, ttl_s, mode)

    p_analytic = delivery_probability_fixed_holders(params, ttl_s)
    p_tolerance = max(FIXED_PROBABILITY_ABS_TOLERANCE, PROBABILITY_SE_MULTIPLIER * result.p_dlv_se)
    delay_analytic = expected_delay(params, Deadline(ttl=ttl_s))
    delay_tolerance = DELAY_REL_TOLERANCE * delay_analytic
    return [
        ValidationCell(
            h0, ttl_s, mode, "p_dlv", p_analytic, result.p_dlv, result.p_dlv_se, p_tolerance,
            _judge(p_analytic, result.p_dlv, p_tolerance),
        ),
        ValidationCell(
            h0, ttl_s, mode, "e_delay_s", delay_analytic, result.e_delay_s, result.e_delay_se_s,
            delay_tolerance, _judge(delay_analytic, result.e_delay_s, delay_tolerance),
        ),
    ]


def validate(config: ScenarioConfig) -> ValidationReport:
    """
    Run one cell per (h0, TTL, mode) and compare against the closed forms.

    Raises:
        ConfigError: without a seed, or with fewer than MIN_REPLICATIONS
    """
    require_seed(config)
    if config.sim.replications < MIN_REPLICATIONS:
        raise ConfigError([ConfigIssue(
            None, "sim", "replications",
            f"validation needs at least {MIN_REPLICATIONS} replications, "
            f"got {config.sim.replications}",
        )])

    cells = []
    for h0 in config.population.h0:
        for ttl_s in config.deadlines.ttl_s:
            cells.append(_probability_cell(config, h0, ttl_s))
            cells.extend(_fixed_holder_cells(config, h0, ttl_s))

    report = ValidationReport(tuple(cells))
    for cell in report.cells:
        if cell.mode is DisseminationMode.EPIDEMIC and cell.status is not CellStatus.DEGENERATE:
            logger.info(
                "Mean-field bias h0=%g ttl=%gs: %+.4f (tolerance %.4f)",
                cell.h0, cell.ttl_s, cell.bias, cell.tolerance,
            )
    if report.passed:
        logger.info("✓ Validation passed (%d cells)", len(report.cells))
    else:
        logger.warning("%d of %d cells failed validation", len(report.failures), len(report.cells))
    return report


def write_report_csv(report: ValidationReport, sink: str | IO[str]) -> None:
    report.to_frame().to_csv(sink, index=False, lineterminator="\n")
