"""
DISCRETE PID CONTROLLER
=======================
u_k = Kp e_k + (Kd / T)(e_k - e_{k-1}) + I_k

Integral modes:
- literal:      I_k = Ki T (e_k + e_{k-1})      (as printed, no accumulation)
- accumulating: integ += T (e_k + e_{k-1}) / 2  (trapezoid), I_k = Ki integ

The output is clamped to +/- u_max as the final operation. No anti-windup.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from .base import AltitudeController, ControlLimits, ControlOutput

logger = logging.getLogger(__name__)


class PidMode(str, Enum):
    """Integral term variants."""
    LITERAL = "literal"
    ACCUMULATING = "accumulating"


@dataclass(frozen=True)
class PidParams:
    """Gains, sample period (s) and integral mode."""
    kp: float
    ki: float
    kd: float
    T: float = 0.2
    mode: PidMode = PidMode.LITERAL

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"PID sample period must be > 0, got {self.T}")
        object.__setattr__(self, "mode", PidMode(self.mode))

    @classmethod
    def table_pid(cls, T: float = 0.2) -> "PidParams":
        """Hand-tuned PID gains used as the comparison baseline."""
        return cls(kp=6.0, ki=0.4, kd=0.9, T=T)

    @classmethod
    def pd(cls, kp: float, kd: float, T: float = 0.2) -> "PidParams":
        return cls(kp=kp, ki=0.0, kd=kd, T=T)


@dataclass(frozen=True)
class PidState:
    """e_prev: previous error (m); integ: accumulated trapezoid integral (m*s)."""
    e_prev: float = 0.0
    integ: float = 0.0


def pid_terms(params: PidParams, state: PidState, e_k: float) -> Tuple[PidState, float]:
    """Unclamped PID output and the updated state."""
    derivative = (params.kd / params.T) * (e_k - state.e_prev)
    if params.mode is PidMode.LITERAL:
        integ = state.integ
        integral = params.ki * params.T * (e_k + state.e_prev)
    else:
        integ = state.integ + params.T * (e_k + state.e_prev) / 2.0
        integral = params.ki * integ
    u = params.kp * e_k + derivative + integral
    return PidState(e_prev=e_k, integ=integ), u


def pid_step(
    params: PidParams,
    state: PidState,
    e_k: float,
    limits: ControlLimits = ControlLimits()
) -> Tuple[PidState, float]:
    """
    One PID update.

    Args:
        params: Gains and mode
        state: Previous error / integral
        e_k: Current altitude error (m)
        limits: Actuator bound

    Returns:
        (new state, clamped command in V)
    """
    state, u = pid_terms(params, state, e_k)
    return state, limits.clamp(u)


class PidController(AltitudeController):
    """Stateful wrapper around pid_step."""

    name = "pid"

    def __init__(self, params: PidParams, limits: ControlLimits = ControlLimits()):
        super().__init__(limits)
        self.params = params
        self.state = PidState()
        logger.debug(f"PidController initialized (kp={params.kp}, ki={params.ki}, kd={params.kd}, mode={params.mode.value})")

    def step(self, error: float) -> ControlOutput:
        self.state, u = pid_step(self.params, self.state, error, self.limits)
        return ControlOutput(u_total=u, u_net=u)

    def reset(self) -> "PidController":
        self.state = PidState()
        return self
