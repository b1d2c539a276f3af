"""
Radio access network load and the hysteresis congestion detector.
"""

import math
from dataclasses import dataclass, replace

from src.shared.errors import InvalidParamsError


@dataclass(frozen=True)
class RanState:
    """
    RAN capacity and its last measured load.

    The congested flag is raised above theta_high and cleared below
    theta_low; in between it keeps its previous value.
    """

    capacity: float
    offered_load: float = 0.0
    congested: bool = False
    theta_high: float = 0.9
    theta_low: float = 0.7

    def __post_init__(self):
        if not math.isfinite(self.capacity) or self.capacity <= 0:
            raise InvalidParamsError(f"capacity must be finite and > 0, got {self.capacity}")
        if not 0 < self.theta_low <= self.theta_high <= 1:
            raise InvalidParamsError(
                f"thresholds must satisfy 0 < theta_low <= theta_high <= 1, "
                f"got theta_low={self.theta_low}, theta_high={self.theta_high}"
            )

    @property
    def utilization(self) -> float:
        return self.offered_load / self.capacity


def detect_congestion(ran: RanState, offered_load: float) -> RanState:
    """
    Apply the hysteresis rule to a new load measurement.

    Utilization above 1 is allowed and simply keeps the flag raised.
    """
    if not math.isfinite(offered_load) or offered_load < 0:
        raise InvalidParamsError(f"offered_load must be finite and >= 0, got {offered_load}")

    utilization = offered_load / ran.capacity
    if ran.congested:
        congested = not utilization < ran.theta_low
    else:
        congested = utilization > ran.theta_high
    return replace(ran, offered_load=offered_load, congested=congested)
