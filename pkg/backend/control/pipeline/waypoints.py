"""
Waypoint plans: ordered (setpoint, hold) pairs tracked from a fixed start
altitude.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..plant.blimp_model import DEFAULT_DT
from .closed_loop import hold_profile

DEFAULT_WAYPOINTS = (3.0, 2.0, 1.0, 2.5, 1.5)
DEFAULT_HOLD_S = 60.0


@dataclass(frozen=True)
class WaypointPlan:
    setpoints: Tuple[float, ...] = DEFAULT_WAYPOINTS
    holds_s: Tuple[float, ...] = (DEFAULT_HOLD_S,) * len(DEFAULT_WAYPOINTS)
    dt: float = DEFAULT_DT
    h0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "setpoints", tuple(float(s) for s in self.setpoints))
        object.__setattr__(self, "holds_s", tuple(float(h) for h in self.holds_s))
        if not self.setpoints:
            raise ValueError("A waypoint plan needs at least one setpoint")
        if len(self.setpoints) != len(self.holds_s):
            raise ValueError(f"{len(self.setpoints)} setpoints but {len(self.holds_s)} hold times")
        if any(s < 0 for s in self.setpoints):
            raise ValueError(f"Setpoints must be >= 0, got {self.setpoints}")
        if any(h <= 0 for h in self.holds_s) or not self.dt > 0:
            raise ValueError("Hold times and dt must be > 0")

    @classmethod
    def uniform(cls, setpoints: Sequence[float], hold_s: float, dt: float = DEFAULT_DT, h0: float = 0.0) -> "WaypointPlan":
        """Every setpoint held for the same time."""
        return cls(setpoints=tuple(setpoints), holds_s=(hold_s,) * len(setpoints), dt=dt, h0=h0)

    def reference(self) -> np.ndarray:
        return hold_profile(self.setpoints, self.holds_s, self.dt)

    @property
    def n_steps(self) -> int:
        return int(self.reference().size)
