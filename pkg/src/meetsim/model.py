"""
Data types of the meeting-process simulator.

Rates are per requester-holder pair. M_λ is read as the mean of that
per-pair rate, which is the only reading under which the simulated mean
matches the fluid model.
"""

import math
import numbers
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from src.shared.errors import InvalidParamsError, InvalidPopulationError


class RateDistribution(StrEnum):
    """Law of the per-pair meeting rates λ_ij, all with mean M_λ."""

    DETERMINISTIC = "deterministic"
    EXPONENTIAL = "exponential"
    GAMMA = "gamma"


class DisseminationMode(StrEnum):
    """Whether served requesters start serving others."""

    EPIDEMIC = "epidemic"
    FIXED_HOLDERS = "fixed-holders"


class EventKind(StrEnum):
    MEETING = "meeting"
    DEADLINE_EXPIRY = "deadline-expiry"


class DeliveryPath(StrEnum):
    EDGE_MEETING = "edge-meeting"
    FORCED_AT_DEADLINE = "forced-at-deadline"


def as_count(value, name: str, minimum: int = 0) -> int:
    """Coerce an integral number to int, rejecting fractions and negatives."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InvalidPopulationError(f"{name} must be an integer, got {value!r}")
    if not math.isfinite(value) or value != int(value):
        raise InvalidPopulationError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InvalidPopulationError(f"{name} must be >= {minimum}, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class MeetingModel:
    """
    Population and meeting process of one replication.

    In epidemic mode a served requester becomes a holder, so the rate
    matrix also has one column per requester.
    """

    n_requesters: int
    n_holders: int
    m_lambda: float
    rate_dist: RateDistribution = RateDistribution.DETERMINISTIC
    gamma_shape: float = 2.0
    mode: DisseminationMode = DisseminationMode.EPIDEMIC

    def __post_init__(self):
        object.__setattr__(self, "n_requesters", as_count(self.n_requesters, "n_requesters", 1))
        object.__setattr__(self, "n_holders", as_count(self.n_holders, "n_holders", 0))
        try:
            object.__setattr__(self, "rate_dist", RateDistribution(self.rate_dist))
            object.__setattr__(self, "mode", DisseminationMode(self.mode))
        except ValueError as e:
            raise InvalidParamsError(str(e)) from e
        if not isinstance(self.m_lambda, numbers.Real) or not math.isfinite(self.m_lambda) \
                or self.m_lambda <= 0:
            raise InvalidParamsError(f"m_lambda must be finite and > 0, got {self.m_lambda!r}")
        if self.rate_dist is RateDistribution.GAMMA and not self.gamma_shape > 0:
            raise InvalidParamsError(f"gamma_shape must be > 0, got {self.gamma_shape!r}")

    @property
    def n_sources(self) -> int:
        """Columns of the rate matrix: seed holders, plus requesters in epidemic mode."""
        if self.mode is DisseminationMode.EPIDEMIC:
            return self.n_holders + self.n_requesters
        return self.n_holders

    def sample_rates(
        self, rng: np.random.Generator, shape: tuple[int, ...] | None = None
    ) -> np.ndarray:
        """
        Draw per-pair meeting rates.

        Args:
            rng: Random generator; untouched for deterministic rates
            shape: Output shape, defaults to (n_requesters, n_sources)

        Returns:
            Array of non-negative rates with mean m_lambda. For the default
            epidemic matrix the requester-requester block is symmetric with
            a zero diagonal: one rate per unordered pair.
        """
        if shape is not None:
            return self._draw(rng, shape)
        rates = self._draw(rng, (self.n_requesters, self.n_sources))
        if self.mode is DisseminationMode.EPIDEMIC:
            upper = np.triu(rates[:, self.n_holders:], k=1)
            rates[:, self.n_holders:] = upper + upper.T
        return rates

    def _draw(self, rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
        m = self.m_lambda
        if self.rate_dist is RateDistribution.EXPONENTIAL:
            return rng.exponential(m, shape)
        if self.rate_dist is RateDistribution.GAMMA:
            return rng.gamma(self.gamma_shape, m / self.gamma_shape, shape)
        return np.full(shape, m, dtype=float)


@dataclass(frozen=True)
class SimEvent:
    """
    One processed event of a replication.

    ``holder_id`` indexes the rate-matrix column: below n_holders it is a
    seed holder, otherwise requester (holder_id - n_holders). The counts
    are taken right after the event.
    """

    time: float
    kind: EventKind
    requester_id: int
    holder_id: int | None
    holders: int
    requesters: int


@dataclass(frozen=True)
class DeliveryRecord:
    requester_id: int
    delivery_time: float
    via: DeliveryPath
