"""
BLIMP ALTITUDE MODEL
====================
Second-order discrete transfer function mapping motor voltage to altitude:

    h_k = (a1 z^-1 + a2 z^-2) / (1 + d1 z^-1 + d2 z^-2) u_k

A command issued at step k first shows up in the altitude at step k+1
(no z^0 numerator term). The state carries two altitudes and two commands.

Features:
- Single-step update for closed-loop simulation
- Whole-series simulation with scipy.signal.lfilter
- Fitted and theoretical (double integrator) model constructors
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import signal

from app.core.exceptions import StateCorruptionError

logger = logging.getLogger(__name__)

# 5 Hz control loop
DEFAULT_DT = 0.2

# Coefficients identified from tele-operation data
FITTED_NUM = (-0.969e-3, 1.019e-3)
FITTED_DEN = (-1.99, 0.99)

# Euler discretization of h'' = a1 u_{k-1} + a2 u_{k-2}
THEORETICAL_DEN = (-2.0, 1.0)


@dataclass(frozen=True)
class PlantModel:
    """
    Discrete altitude dynamics.

    num: (a1, a2) in m/(V*step^2)
    den: (d1, d2) of 1 + d1 z^-1 + d2 z^-2
    dt:  sample period in seconds
    """
    num: Tuple[float, float] = FITTED_NUM
    den: Tuple[float, float] = FITTED_DEN
    dt: float = DEFAULT_DT

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(float(v) for v in self.num))
        object.__setattr__(self, "den", tuple(float(v) for v in self.den))
        if len(self.num) != 2 or len(self.den) != 2:
            raise ValueError("PlantModel needs exactly two numerator and two denominator coefficients")
        if not all(math.isfinite(v) for v in (*self.num, *self.den)):
            raise ValueError(f"PlantModel coefficients must be finite: num={self.num}, den={self.den}")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be > 0, got {self.dt}")

    @classmethod
    def fitted(cls, dt: float = DEFAULT_DT) -> "PlantModel":
        """Model identified from flight data."""
        return cls(num=FITTED_NUM, den=FITTED_DEN, dt=dt)

    @classmethod
    def theoretical(cls, a1: float, a2: float, dt: float = DEFAULT_DT) -> "PlantModel":
        """Pure double-integrator structure with free numerator."""
        return cls(num=(a1, a2), den=THEORETICAL_DEN, dt=dt)

    @property
    def a1(self) -> float:
        return self.num[0]

    @property
    def a2(self) -> float:
        return self.num[1]

    @property
    def d1(self) -> float:
        return self.den[0]

    @property
    def d2(self) -> float:
        return self.den[1]

    def as_vector(self) -> np.ndarray:
        """(a1, a2, d1, d2)"""
        return np.array([self.a1, self.a2, self.d1, self.d2])

    @classmethod
    def from_vector(cls, theta: Sequence[float], dt: float = DEFAULT_DT) -> "PlantModel":
        a1, a2, d1, d2 = (float(v) for v in theta)
        return cls(num=(a1, a2), den=(d1, d2), dt=dt)


@dataclass(frozen=True)
class PlantState:
    """
    History needed for the next update.

    h_prev1/h_prev2: the two most recent altitudes (m), newest first
    u_prev1/u_prev2: the two most recent commands (V), newest first
    """
    h_prev1: float = 0.0
    h_prev2: float = 0.0
    u_prev1: float = 0.0
    u_prev2: float = 0.0

    @classmethod
    def at_rest(cls, h0: float = 0.0) -> "PlantState":
        """Hovering at h0 with no command history."""
        return cls(h_prev1=h0, h_prev2=h0)

    @property
    def altitude(self) -> float:
        return self.h_prev1

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in (self.h_prev1, self.h_prev2, self.u_prev1, self.u_prev2))


def step_plant(model: PlantModel, state: PlantState, u: float) -> Tuple[PlantState, float]:
    """
    Advance the plant by one sample.

    Args:
        model: Plant coefficients
        state: History before applying u
        u: Motor command for this step (caller clamps to +/- u_max)

    Returns:
        (new state, altitude at the next step)

    Raises:
        StateCorruptionError: state or command is not finite
    """
    u = float(u)
    if not (math.isfinite(u) and state.is_finite()):
        raise StateCorruptionError(
            "Non-finite plant state or command",
            details={"u": u, "state": [state.h_prev1, state.h_prev2, state.u_prev1, state.u_prev2]}
        )

    h_next = (
        -model.d1 * state.h_prev1
        - model.d2 * state.h_prev2
        + model.a1 * u
        + model.a2 * state.u_prev1
    )
    if not math.isfinite(h_next):
        raise StateCorruptionError("Plant altitude diverged", details={"h": h_next})

    return PlantState(h_prev1=h_next, h_prev2=state.h_prev1, u_prev1=u, u_prev2=state.u_prev1), h_next


def simulate(model: PlantModel, commands: Sequence[float], state: PlantState = PlantState()) -> np.ndarray:
    """
    Free-run the plant over a command series.

    Equivalent to iterating step_plant; element n of the result is the
    altitude produced by commands[n].

    Args:
        model: Plant coefficients
        commands: Command series (V)
        state: Initial history

    Returns:
        Altitude series, same length as commands
    """
    u = np.asarray(commands, dtype=float)
    if u.size == 0:
        return np.empty(0)
    b = [model.a1, model.a2]
    a = [1.0, model.d1, model.d2]
    zi = signal.lfiltic(b, a, y=[state.h_prev1, state.h_prev2], x=[state.u_prev1])
    h, _ = signal.lfilter(b, a, u, zi=zi)
    return h


class BlimpPlant:
    """
    Stateful plant used by the closed loop.
    Wraps an immutable PlantModel and the current PlantState.
    """

    def __init__(self, model: PlantModel):
        self.model = model
        self.state = PlantState()

    @property
    def altitude(self) -> float:
        return self.state.altitude

    def reset(self, h0: float = 0.0) -> float:
        """Place the blimp at rest at h0 and return the altitude."""
        self.state = PlantState.at_rest(h0)
        return self.state.altitude

    def step(self, u: float) -> float:
        self.state, h = step_plant(self.model, self.state, u)
        return h
