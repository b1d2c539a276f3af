"""
RAN load profiles.

A profile is a piecewise-constant delay-sensitive background rate plus a
schedule of content arrivals. It stands in for the load feed a MEC
platform would expose in real time.
"""

import bisect
import math
from dataclasses import dataclass

from src.cce.traffic import ContentItem, TrafficClass
from src.shared.errors import InvalidParamsError


@dataclass(frozen=True)
class LoadSegment:
    start: float
    end: float
    rate_bps: float


@dataclass(frozen=True)
class LoadProfile:
    """
    Background rate segments covering [0, horizon] and content arrivals.

    Arrivals are kept sorted by (created_at, id).
    """

    segments: tuple[LoadSegment, ...]
    arrivals: tuple[ContentItem, ...] = ()

    def __post_init__(self):
        segments = tuple(self.segments)
        if not segments:
            raise InvalidParamsError("a load profile needs at least one segment")
        if segments[0].start != 0:
            raise InvalidParamsError(f"first segment must start at 0, got {segments[0].start}")
        for prev, seg in zip(segments, segments[1:]):
            if seg.start != prev.end:
                raise InvalidParamsError(f"segments must be contiguous: {prev.end} != {seg.start}")
        for seg in segments:
            if not seg.end > seg.start or not math.isfinite(seg.end):
                raise InvalidParamsError(f"segment [{seg.start}, {seg.end}) is empty or unbounded")
            if not math.isfinite(seg.rate_bps) or seg.rate_bps < 0:
                raise InvalidParamsError(
                    f"segment rate must be finite and >= 0, got {seg.rate_bps}"
                )

        horizon = segments[-1].end
        arrivals = tuple(sorted(self.arrivals, key=lambda item: (item.created_at, item.id)))
        for item in arrivals:
            if item.created_at >= horizon:
                raise InvalidParamsError(
                    f"item {item.id} arrives at {item.created_at}, after the horizon"
                )
        object.__setattr__(self, "segments", segments)
        object.__setattr__(self, "arrivals", arrivals)

    @property
    def horizon(self) -> float:
        return self.segments[-1].end

    def rate_at(self, t: float) -> float:
        """Background rate in effect at time t (last segment's rate past the horizon)."""
        starts = [seg.start for seg in self.segments]
        return self.segments[max(bisect.bisect_right(starts, t) - 1, 0)].rate_bps

    @property
    def dt_bits(self) -> float:
        return sum(item.size for item in self.arrivals if item.is_delay_tolerant)


def _periodic_dt_items(
    horizon_s: float, item_bits: float, interval_s: float | None
) -> list[ContentItem]:
    if not item_bits or not interval_s:
        return []
    count = int(math.ceil(horizon_s / interval_s))
    return [
        ContentItem(
            id=f"dt-{k:06d}",
            size=item_bits,
            traffic_class=TrafficClass.DELAY_TOLERANT,
            created_at=k * interval_s,
        )
        for k in range(count)
        if k * interval_s < horizon_s
    ]


def peak_hour_profile(
    horizon_s: float = 3600.0,
    base_load_bps: float = 5e7,
    peak_load_bps: float = 9.5e7,
    peak_start_s: float = 1800.0,
    peak_end_s: float = 2400.0,
    dt_item_bits: float = 8e6,
    dt_interval_s: float | None = 10.0,
) -> LoadProfile:
    """
    Background load with one peak window and periodic DT content.

    Args:
        horizon_s: Profile length
        base_load_bps: Delay-sensitive rate outside the peak
        peak_load_bps: Delay-sensitive rate inside [peak_start_s, peak_end_s)
        dt_item_bits: Size of each DT item (0 disables DT traffic)
        dt_interval_s: Spacing of DT arrivals, starting at t=0
    """
    if not 0 <= peak_start_s < peak_end_s <= horizon_s:
        raise InvalidParamsError(
            f"peak window must satisfy 0 <= start < end <= horizon, "
            f"got [{peak_start_s}, {peak_end_s}) in [0, {horizon_s}]"
        )
    bounds = [
        (0.0, peak_start_s, base_load_bps),
        (peak_start_s, peak_end_s, peak_load_bps),
        (peak_end_s, horizon_s, base_load_bps),
    ]
    segments = tuple(LoadSegment(s, e, r) for s, e, r in bounds if e > s)
    return LoadProfile(segments, tuple(_periodic_dt_items(horizon_s, dt_item_bits, dt_interval_s)))


def flat_profile(
    horizon_s: float = 3600.0,
    load_bps: float = 5e7,
    dt_item_bits: float = 0.0,
    dt_interval_s: float | None = None,
) -> LoadProfile:
    """Constant background load; no DT traffic unless both DT arguments are given."""
    return LoadProfile(
        (LoadSegment(0.0, horizon_s, load_bps),),
        tuple(_periodic_dt_items(horizon_s, dt_item_bits, dt_interval_s)),
    )
