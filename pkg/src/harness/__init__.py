"""Experiment orchestration: configuration, canned experiments, validation."""

from src.harness.config import (
    ConfigIssue,
    ScenarioConfig,
    format_config,
    load_config,
    parse_config,
    with_overrides,
)
from src.harness.experiments import (
    FIG2_COLUMNS,
    FIG3_COLUMNS,
    SIMULATE_COLUMNS,
    analytic_curves,
    build_profile,
    cce_config,
    reproduce_fig2,
    reproduce_fig3,
    run_cce,
    simulate,
    write_csv,
)
from src.harness.validation import (
    REPORT_COLUMNS,
    CellStatus,
    ValidationCell,
    ValidationReport,
    validate,
    write_report_csv,
)

__all__ = [
    "FIG2_COLUMNS",
    "FIG3_COLUMNS",
    "REPORT_COLUMNS",
    "SIMULATE_COLUMNS",
    "CellStatus",
    "ConfigIssue",
    "ScenarioConfig",
    "ValidationCell",
    "ValidationReport",
    "analytic_curves",
    "build_profile",
    "cce_config",
    "format_config",
    "load_config",
    "parse_config",
    "reproduce_fig2",
    "reproduce_fig3",
    "run_cce",
    "simulate",
    "validate",
    "with_overrides",
    "write_csv",
    "write_report_csv",
]
