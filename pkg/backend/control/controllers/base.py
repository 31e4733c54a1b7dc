"""
Shared controller interface: altitude error in, motor voltage out.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

DEFAULT_U_MAX = 3.3


@dataclass(frozen=True)
class ControlLimits:
    """Symmetric actuator bound in volts."""
    u_max: float = DEFAULT_U_MAX

    def __post_init__(self):
        if not (self.u_max > 0 and np.isfinite(self.u_max)):
            raise ValueError(f"u_max must be > 0, got {self.u_max}")

    def clamp(self, u: float) -> float:
        return float(min(max(u, -self.u_max), self.u_max))


@dataclass(frozen=True)
class ControlOutput:
    """
    One control step.

    u_total: command sent to the motors (clamped)
    u_net:   network / primary controller contribution
    u_pd:    parallel PD contribution, pre-clamp (0 without a PD)
    """
    u_total: float
    u_net: float
    u_pd: float = 0.0


class AltitudeController(ABC):
    """Base class for all altitude controllers."""

    name: str = "controller"

    def __init__(self, limits: ControlLimits = ControlLimits()):
        self.limits = limits

    @abstractmethod
    def step(self, error: float) -> ControlOutput:
        """Map the altitude error (h_ref - h_meas, m) to a motor command."""

    @abstractmethod
    def reset(self) -> "AltitudeController":
        """Zero all episode-carried state and return self."""


class ZeroController(AltitudeController):
    """Always commands 0 V. Baseline for the evaluation metrics."""

    name = "zero"

    def step(self, error: float) -> ControlOutput:
        return ControlOutput(u_total=0.0, u_net=0.0)

    def reset(self) -> "ZeroController":
        return self


def reset(controller: AltitudeController) -> AltitudeController:
    """Return the controller with its episode state zeroed."""
    return controller.reset()
