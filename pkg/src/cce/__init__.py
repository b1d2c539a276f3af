"""Congestion Control Engine: classification, congestion detection, edge buffering."""

from src.cce.buffer import EdgeBuffer
from src.cce.engine import (
    Action,
    ActionKind,
    Arrival,
    CceConfig,
    CceState,
    ClockTick,
    CongestionControlEngine,
    IntervalSample,
    LoadChange,
)
from src.cce.profile import LoadProfile, LoadSegment, flat_profile, peak_hour_profile
from src.cce.ran import RanState, detect_congestion
from src.cce.scenario import (
    ScenarioMetrics,
    build_events,
    count_deadline_misses,
    run_scenario,
    write_summary_csv,
    write_timeseries_csv,
)
from src.cce.traffic import ContentItem, ContentStatus, TrafficClass, classify, default_policy

__all__ = [
    "Action",
    "ActionKind",
    "Arrival",
    "CceConfig",
    "CceState",
    "ClockTick",
    "CongestionControlEngine",
    "ContentItem",
    "ContentStatus",
    "EdgeBuffer",
    "IntervalSample",
    "LoadChange",
    "LoadProfile",
    "LoadSegment",
    "RanState",
    "ScenarioMetrics",
    "TrafficClass",
    "build_events",
    "classify",
    "count_deadline_misses",
    "default_policy",
    "detect_congestion",
    "flat_profile",
    "peak_hour_profile",
    "run_scenario",
    "write_summary_csv",
    "write_timeseries_csv",
]
