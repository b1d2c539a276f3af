"""
Congestion Control Engine.

Event-driven state machine: while the RAN is congested, arriving
delay-tolerant content is redirected to the edge buffer; buffered content
leaves either when its deadline comes (forced delivery) or, once the
congestion clears, earliest-deadline-first at a bounded drain rate.
Delay-sensitive traffic always goes straight to the RAN.

The load is integrated per tick: every ClockTick closes the interval since
the previous tick, re-evaluates congestion on the larger of offered and
carried load, and records its utilization. Edge deliveries released at a
tick are charged to the interval it closes and only fill that interval up
to theta_high, so a drain never congests the RAN by itself.
Deadlines between ticks are honoured at their exact time.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import StrEnum

from src.cce.buffer import EdgeBuffer
from src.cce.ran import RanState, detect_congestion
from src.cce.traffic import (
    ClassificationPolicy,
    ContentItem,
    ContentStatus,
    classify,
    default_policy,
)
from src.shared.errors import ClockRegressionError, InvalidParamsError

logger = logging.getLogger(__name__)


# ── Events ─────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Arrival:
    time: float
    item: ContentItem


@dataclass(frozen=True)
class ClockTick:
    time: float


@dataclass(frozen=True)
class LoadChange:
    time: float
    rate_bps: float


CceEvent = Arrival | ClockTick | LoadChange

# Equal-time ordering: close the interval, then apply the new load, then arrivals.
EVENT_PRIORITY = {ClockTick: 0, LoadChange: 1, Arrival: 2}


# ── Actions ────────────────────────────────────────────────────────


class ActionKind(StrEnum):
    PASS_THROUGH = "pass-through"
    BUFFER = "buffer"
    DELIVER_FORCED = "deliver-forced"
    DELIVER_EDGE = "deliver-edge"
    OVERFLOW_PASS_THROUGH = "overflow-pass-through"


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    time: float
    item: ContentItem


TERMINAL_ACTIONS = {
    ActionKind.PASS_THROUGH,
    ActionKind.DELIVER_FORCED,
    ActionKind.DELIVER_EDGE,
    ActionKind.OVERFLOW_PASS_THROUGH,
}


# ── Configuration and state ────────────────────────────────────────


@dataclass(frozen=True)
class CceConfig:
    """
    Engine parameters.

    Args:
        capacity_bps: RAN capacity
        theta_high: Utilization above which the RAN becomes congested
        theta_low: Utilization below which congestion is relieved
        drain_headroom: Share of the interval's residual capacity used to drain the buffer
        guard_s: Forced deliveries fire this long before the deadline
        buffer_bits: Edge buffer capacity
        tick_s: Load integration tick
        policy: Traffic class -> TTL map
        redirect: False runs the pass-through baseline
    """

    capacity_bps: float = 1e8
    theta_high: float = 0.9
    theta_low: float = 0.7
    drain_headroom: float = 0.8
    guard_s: float = 0.0
    buffer_bits: float = math.inf
    tick_s: float = 1.0
    policy: ClassificationPolicy = field(default_factory=default_policy)
    redirect: bool = True

    def __post_init__(self):
        if not 0 < self.drain_headroom <= 1:
            raise InvalidParamsError(f"drain_headroom must be in (0, 1], got {self.drain_headroom}")
        if not math.isfinite(self.guard_s) or self.guard_s < 0:
            raise InvalidParamsError(f"guard_s must be >= 0, got {self.guard_s}")
        if not math.isfinite(self.tick_s) or self.tick_s <= 0:
            raise InvalidParamsError(f"tick_s must be > 0, got {self.tick_s}")
        # thresholds, capacity and buffer size are checked by their owners
        RanState(self.capacity_bps, theta_high=self.theta_high, theta_low=self.theta_low)
        EdgeBuffer(self.buffer_bits)


@dataclass(frozen=True)
class IntervalSample:
    """RAN accounting of one closed tick interval."""

    start: float
    end: float
    carried_bits: float
    offered_bits: float

    @property
    def width(self) -> float:
        return self.end - self.start


@dataclass
class CceState:
    """
    Composite engine state.

    ``carried_bits`` is what the RAN actually transmitted in the open
    interval, ``offered_bits`` is the demand (background plus every
    arrival, buffered or not).
    """

    time: float
    ran: RanState
    buffer: EdgeBuffer
    ds_rate_bps: float = 0.0
    interval_start: float = 0.0
    carried_bits: float = 0.0
    offered_bits: float = 0.0
    arrival_bits: float = 0.0
    recent_arrival_bps: float = 0.0
    last_sample: IntervalSample | None = None

    def copy(self) -> "CceState":
        return replace(self, buffer=self.buffer.copy())


class CongestionControlEngine:
    """
    Applies events to a CceState and reports the resulting actions.

    Usage:
        engine = CongestionControlEngine(CceConfig())
        state = engine.initial_state()
        state, actions = engine.step(state, Arrival(0.0, item))
    """

    def __init__(self, config: CceConfig):
        self.config = config

    def initial_state(self, start: float = 0.0) -> CceState:
        cfg = self.config
        return CceState(
            time=start,
            ran=RanState(cfg.capacity_bps, theta_high=cfg.theta_high, theta_low=cfg.theta_low),
            buffer=EdgeBuffer(cfg.buffer_bits),
            interval_start=start,
        )

    def step(self, state: CceState, event: CceEvent) -> tuple[CceState, list[Action]]:
        """
        Apply one event.

        The input state is left untouched.

        Returns:
            (new state, actions in time order)

        Raises:
            ClockRegressionError: if the event is older than the state
        """
        if event.time < state.time:
            raise ClockRegressionError(
                f"event at t={event.time} precedes state time t={state.time}"
            )

        s = state.copy()
        actions: list[Action] = []

        self._release_due(s, event.time, actions)
        self._advance(s, event.time)

        match event:
            case Arrival():
                self._on_arrival(s, event.item, actions)
            case LoadChange():
                self._on_load_change(s, event.rate_bps)
            case ClockTick():
                self._on_tick(s, event.time, actions)

        self._release_due(s, event.time, actions)
        return s, actions

    # ── internals ──────────────────────────────────────────────────

    def _advance(self, s: CceState, t: float) -> None:
        background = s.ds_rate_bps * (t - s.time)
        s.carried_bits += background
        s.offered_bits += background
        s.time = t

    def _release_due(self, s: CceState, until: float, actions: list[Action]) -> None:
        """Force out every buffered item whose deadline (minus guard) has come."""
        while len(s.buffer):
            head = s.buffer.peek()
            due = max(head.deadline_at - self.config.guard_s, head.created_at)
            if due > until:
                break
            item = s.buffer.pop().with_status(ContentStatus.DELIVERED_FORCED)
            s.carried_bits += item.size
            actions.append(Action(ActionKind.DELIVER_FORCED, due, item))

    def _on_arrival(self, s: CceState, item: ContentItem, actions: list[Action]) -> None:
        if item.deadline_at is None:
            item = classify(item, self.config.policy)
        s.offered_bits += item.size
        s.arrival_bits += item.size

        if item.is_delay_tolerant and self.config.redirect and s.ran.congested:
            if s.buffer.fits(item):
                buffered = item.with_status(ContentStatus.BUFFERED)
                s.buffer.push(buffered)
                actions.append(Action(ActionKind.BUFFER, s.time, buffered))
                return
            logger.debug("buffer full, %s passes through", item.id)
            s.carried_bits += item.size
            direct = item.with_status(ContentStatus.DELIVERED_DIRECT)
            actions.append(Action(ActionKind.OVERFLOW_PASS_THROUGH, s.time, direct))
            return

        s.carried_bits += item.size
        direct = item.with_status(ContentStatus.DELIVERED_DIRECT)
        actions.append(Action(ActionKind.PASS_THROUGH, s.time, direct))

    def _on_load_change(self, s: CceState, rate_bps: float) -> None:
        if not math.isfinite(rate_bps) or rate_bps < 0:
            raise InvalidParamsError(f"background rate must be finite and >= 0, got {rate_bps}")
        s.ds_rate_bps = rate_bps
        s.ran = detect_congestion(s.ran, rate_bps + s.recent_arrival_bps)

    def _on_tick(self, s: CceState, t: float, actions: list[Action]) -> None:
        width = t - s.interval_start
        if width <= 0:
            return

        s.recent_arrival_bps = s.arrival_bits / width
        s.ran = detect_congestion(s.ran, max(s.offered_bits, s.carried_bits) / width)
        if not s.ran.congested and self.config.redirect:
            s.carried_bits += self._drain(s, width, t, actions)

        s.last_sample = IntervalSample(s.interval_start, t, s.carried_bits, s.offered_bits)
        s.interval_start = t
        s.carried_bits = s.offered_bits = s.arrival_bits = 0.0

    def _drain(self, s: CceState, width: float, t: float, actions: list[Action]) -> float:
        """Release buffered items EDF into the residual of the closing interval."""
        cfg = self.config
        capacity_bits = cfg.capacity_bps * width
        budget = min(
            cfg.drain_headroom * (capacity_bits - s.carried_bits),
            cfg.theta_high * capacity_bits - s.carried_bits,
        )
        drained = 0.0
        while len(s.buffer) and drained + s.buffer.peek().size <= budget:
            item = s.buffer.pop().with_status(ContentStatus.DELIVERED_EDGE)
            drained += item.size
            actions.append(Action(ActionKind.DELIVER_EDGE, t, item))
        return drained
