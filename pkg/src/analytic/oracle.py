"""
Fixed-step RK4 integration of the mean-field system.

Only used to verify the closed forms in ``fluid``; it knows nothing about
them and integrates dh/dt = M_λ·h·r, dr/dt = -M_λ·h·r directly.
"""

import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass

import numpy as np

from src.analytic.fluid import FluidParams, PopulationState, check_time
from src.shared.errors import InvalidStepError

DEFAULT_STEP_S = 1.0


def rk4_step(
    f: Callable[[float, np.ndarray], np.ndarray],
    t: float,
    y: np.ndarray,
    h: float,
) -> np.ndarray:
    """Advance y' = f(t, y) by one classical Runge-Kutta step of size h."""
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution on a time grid; arrays share one index."""

    t: np.ndarray
    h: np.ndarray
    r: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def __iter__(self) -> Iterator[PopulationState]:
        for t, h, r in zip(self.t, self.h, self.r):
            yield PopulationState(t=float(t), h=float(h), r=float(r))

    def at_end(self) -> PopulationState:
        return PopulationState(t=float(self.t[-1]), h=float(self.h[-1]), r=float(self.r[-1]))


def ode_oracle(params: FluidParams, t_end: float, step: float = DEFAULT_STEP_S) -> Trajectory:
    """
    Integrate the holder/requester system from t=0 to t_end.

    Args:
        params: Initial condition and meeting rate
        t_end: Final time in seconds (>= 0)
        step: Grid spacing in seconds; the last step is shortened if
              t_end is not a multiple of it

    Returns:
        Trajectory with len = number of grid points (1 when t_end = 0)
    """
    t_end = check_time(t_end)
    if not math.isfinite(step) or step <= 0:
        raise InvalidStepError(f"step must be > 0, got {step}")
    if t_end > 0 and step > t_end:
        raise InvalidStepError(f"step {step} exceeds horizon {t_end}")

    m = params.m_lambda

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        flow = m * y[0] * y[1]
        return np.array([flow, -flow])

    n_steps = int(math.ceil(t_end / step - 1e-12)) if t_end > 0 else 0
    times = np.minimum(np.arange(n_steps + 1) * step, t_end)
    states = np.empty((n_steps + 1, 2))
    states[0] = (params.h0, params.r0)

    for i in range(n_steps):
        states[i + 1] = rk4_step(rhs, times[i], states[i], times[i + 1] - times[i])

    return Trajectory(t=times, h=states[:, 0], r=states[:, 1])


if __name__ == "__main__":
    from src.analytic.fluid import holders_at, requesters_at

    params = FluidParams(r0=50, h0=10, m_lambda=3.3e-5)
    end = ode_oracle(params, 600).at_end()
    print(f"RK4:         h={end.h:.6f} r={end.r:.6f}")
    print(f"closed form: h={holders_at(params, 600):.6f} r={requesters_at(params, 600):.6f}")
