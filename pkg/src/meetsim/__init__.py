"""Stochastic meeting-process simulator and its Monte-Carlo estimators."""

from src.meetsim.estimators import (
    MonteCarloEstimate,
    estimate,
    estimate_delivery_probability,
    estimate_expected_delay,
    trace_frame,
    truncated_exponential_ks,
    write_trace_csv,
)
from src.meetsim.model import (
    DeliveryPath,
    DeliveryRecord,
    DisseminationMode,
    EventKind,
    MeetingModel,
    RateDistribution,
    SimEvent,
    as_count,
)
from src.meetsim.simulator import ReplicationResult, replicate, run_replication, simulate_with_rates
from src.shared.seeding import derive_seed

__all__ = [
    "DeliveryPath",
    "DeliveryRecord",
    "DisseminationMode",
    "EventKind",
    "MeetingModel",
    "MonteCarloEstimate",
    "RateDistribution",
    "ReplicationResult",
    "SimEvent",
    "as_count",
    "derive_seed",
    "estimate",
    "estimate_delivery_probability",
    "estimate_expected_delay",
    "replicate",
    "run_replication",
    "simulate_with_rates",
    "trace_frame",
    "truncated_exponential_ks",
    "write_trace_csv",
]
