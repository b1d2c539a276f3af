"""
Traffic items and their classification.

Packet inspection itself is out of scope: items arrive already labelled
with their class, and a static class -> TTL policy assigns deadlines.
"""

import math
from collections.abc import Mapping
from dataclasses import dataclass, replace
from enum import StrEnum

from src.shared.errors import InvalidParamsError, InvalidTransitionError, UnknownTrafficClassError


class TrafficClass(StrEnum):
    DELAY_TOLERANT = "delay-tolerant"
    DELAY_SENSITIVE = "delay-sensitive"


class ContentStatus(StrEnum):
    PENDING = "pending"
    BUFFERED = "buffered"
    DELIVERED_EDGE = "delivered-edge"
    DELIVERED_FORCED = "delivered-forced"
    # Sent straight over the RAN, never held at the edge
    DELIVERED_DIRECT = "delivered-direct"


ALLOWED_TRANSITIONS = {
    ContentStatus.PENDING: {
        ContentStatus.BUFFERED,
        ContentStatus.DELIVERED_EDGE,
        ContentStatus.DELIVERED_DIRECT,
    },
    ContentStatus.BUFFERED: {ContentStatus.DELIVERED_EDGE, ContentStatus.DELIVERED_FORCED},
}

ClassificationPolicy = Mapping[TrafficClass, float]


def default_policy(dt_ttl_s: float = 600.0) -> dict[TrafficClass, float]:
    """DT content gets ``dt_ttl_s``; delay-sensitive traffic has zero tolerance."""
    return {TrafficClass.DELAY_TOLERANT: dt_ttl_s, TrafficClass.DELAY_SENSITIVE: 0.0}


@dataclass(frozen=True)
class ContentItem:
    """
    One content transfer.

    Args:
        id: Unique identifier, also the EDF tie-breaker
        size: Size in bits (> 0)
        traffic_class: Delay-tolerant or delay-sensitive
        created_at: Arrival time in seconds
        deadline_at: Absolute deadline, set by classify()
        status: Lifecycle status
    """

    id: str
    size: float
    traffic_class: TrafficClass
    created_at: float
    deadline_at: float | None = None
    status: ContentStatus = ContentStatus.PENDING

    def __post_init__(self):
        object.__setattr__(self, "traffic_class", TrafficClass(self.traffic_class))
        object.__setattr__(self, "status", ContentStatus(self.status))
        if not math.isfinite(self.size) or self.size <= 0:
            raise InvalidParamsError(
                f"item {self.id}: size must be finite and > 0, got {self.size}"
            )
        if not math.isfinite(self.created_at) or self.created_at < 0:
            raise InvalidParamsError(
                f"item {self.id}: created_at must be >= 0, got {self.created_at}"
            )

    @property
    def is_delay_tolerant(self) -> bool:
        return self.traffic_class is TrafficClass.DELAY_TOLERANT

    def with_status(self, status: ContentStatus) -> "ContentItem":
        """Copy of this item moved to ``status``; illegal moves raise."""
        status = ContentStatus(status)
        if status not in ALLOWED_TRANSITIONS.get(self.status, set()):
            raise InvalidTransitionError(
                f"item {self.id}: {self.status} -> {status} is not allowed"
            )
        if status is ContentStatus.BUFFERED and not self.is_delay_tolerant:
            raise InvalidTransitionError(
                f"item {self.id}: delay-sensitive traffic is never buffered"
            )
        return replace(self, status=status)


def classify(item: ContentItem, policy: ClassificationPolicy) -> ContentItem:
    """
    Assign the absolute deadline of a pending item.

    Raises:
        UnknownTrafficClassError: if the policy has no entry for the item's class
    """
    if item.status is not ContentStatus.PENDING:
        raise InvalidTransitionError(f"item {item.id}: only pending items are classified")
    if item.traffic_class not in policy:
        raise UnknownTrafficClassError(f"no TTL policy for traffic class {item.traffic_class}")

    if item.is_delay_tolerant:
        ttl = policy[item.traffic_class]
        if not math.isfinite(ttl) or ttl < 0:
            raise InvalidParamsError(f"policy TTL must be finite and >= 0, got {ttl}")
        return replace(item, deadline_at=item.created_at + ttl)
    return replace(item, deadline_at=item.created_at)
