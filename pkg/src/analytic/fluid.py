"""
Closed-form fluid-limit model of content dissemination.

Requesters r(t) wait for a content, holders h(t) carry it. Each
requester-holder pair meets at mean rate M_λ and a meeting converts the
requester into a holder, giving the mean-field system

    dh/dt = M_λ·h·r,    dr/dt = -M_λ·h·r

whose solution is a logistic curve. Everything here is a pure function of
its arguments.
"""

import math
import numbers
import sys
from dataclasses import dataclass

from src.shared.errors import DegenerateModelError, InvalidParamsError, InvalidTimeError

# Beyond this exponent e^x is not representable as a float; r(t) is 0 there.
EXP_CUTOFF = math.log(sys.float_info.max)


def _finite_number(value) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool) and math.isfinite(value)


@dataclass(frozen=True)
class FluidParams:
    """
    Initial condition and meeting rate of the fluid model.

    r0 and h0 may be non-integer: the fluid model is continuous.
    """

    r0: float
    h0: float
    m_lambda: float

    def __post_init__(self):
        for name in ("r0", "h0", "m_lambda"):
            if not _finite_number(getattr(self, name)):
                value = getattr(self, name)
                raise InvalidParamsError(f"{name} must be a finite number, got {value!r}")
        if self.r0 <= 0:
            raise InvalidParamsError(f"r0 must be > 0, got {self.r0}")
        if self.h0 < 0:
            raise InvalidParamsError(f"h0 must be >= 0, got {self.h0}")
        if self.m_lambda <= 0:
            raise InvalidParamsError(f"m_lambda must be > 0, got {self.m_lambda}")

    @property
    def total(self) -> float:
        """Conserved population r0 + h0."""
        return self.r0 + self.h0


@dataclass(frozen=True)
class PopulationState:
    """Expected holders and requesters at elapsed time t (seconds)."""

    t: float
    h: float
    r: float


@dataclass(frozen=True)
class Deadline:
    """Time-to-live of a delay-tolerant content, in seconds."""

    ttl: float

    def __post_init__(self):
        if not _finite_number(self.ttl) or self.ttl < 0:
            raise InvalidTimeError(f"ttl must be finite and >= 0, got {self.ttl!r}")


def check_time(t) -> float:
    if not _finite_number(t) or t < 0:
        raise InvalidTimeError(f"t must be finite and >= 0, got {t!r}")
    return float(t)


def _exponent(params: FluidParams, t: float) -> float:
    return params.m_lambda * params.total * t


def holders_at(params: FluidParams, t: float) -> float:
    """
    Expected number of holders at time t.

    Evaluated as h0·N / (h0 + r0·e^{-x}) with N = r0 + h0 and
    x = M_λ·N·t, which never overflows.
    """
    t = check_time(t)
    if params.h0 == 0:
        return 0.0
    x = _exponent(params, t)
    return params.h0 * params.total / (params.h0 + params.r0 * math.exp(-x))


def requesters_at(params: FluidParams, t: float) -> float:
    """Expected number of requesters still waiting at time t."""
    t = check_time(t)
    if params.h0 == 0:
        return float(params.r0)
    x = _exponent(params, t)
    if x > EXP_CUTOFF:
        return 0.0
    return params.r0 * params.total / (params.r0 + params.h0 * math.exp(x))


def delivery_probability(params: FluidParams, t: float) -> float:
    """
    Probability that a given requester has received the content by time t.

    P = 1 - N / (r0 + h0·e^{x}); equals 1 - r(t)/r0.
    """
    t = check_time(t)
    if params.h0 == 0:
        return 0.0
    x = _exponent(params, t)
    if x > EXP_CUTOFF:
        return 1.0
    return 1.0 - params.total / (params.r0 + params.h0 * math.exp(x))


def delivery_probability_fixed_holders(params: FluidParams, t: float) -> float:
    """Delivery CDF when the holder set never grows: 1 - e^{-M_λ·h0·t}."""
    t = check_time(t)
    return -math.expm1(-params.m_lambda * params.h0 * t)


def expected_delay(params: FluidParams, deadline: Deadline) -> float:
    """
    Expected delivery delay E[min(T, TTL)] for T ~ Exp(M_λ·h0).

    Raises:
        DegenerateModelError: if h0 = 0 (no holder, the rate vanishes)
    """
    if params.h0 == 0:
        raise DegenerateModelError("expected delay is undefined with h0 = 0 (no content holder)")
    rate = params.m_lambda * params.h0
    return -math.expm1(-rate * deadline.ttl) / rate


def ttl_grid(step: float, maximum: float) -> list[float]:
    """Uniform grid 0, step, 2·step, ... up to and including ``maximum``."""
    if step <= 0:
        raise InvalidParamsError(f"grid step must be > 0, got {step}")
    if maximum < 0:
        raise InvalidParamsError(f"grid maximum must be >= 0, got {maximum}")
    n = int(math.floor(maximum / step + 1e-9))
    grid = [i * step for i in range(n + 1)]
    if maximum - grid[-1] > 1e-9:
        grid.append(float(maximum))
    return grid


if __name__ == "__main__":
    for h0 in (10, 20, 30):
        params = FluidParams(r0=50, h0=h0, m_lambda=3.3e-5)
        p = delivery_probability(params, 600)
        d = expected_delay(params, Deadline(ttl=3600))
        print(f"h0={h0:>2}  P(600s)={p:.4f}  E[delay|3600s]={d:8.1f}s")
