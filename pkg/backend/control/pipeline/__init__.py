"""Closed-loop simulation, waypoint plans and evaluation metrics."""

from .closed_loop import ClosedLoopTrace, Plant, hold_profile, run_closed_loop
from .metrics import control_effort_ratio, moving_average, pd_fraction, rmsae
from .waypoints import WaypointPlan

__all__ = [
    "ClosedLoopTrace",
    "Plant",
    "WaypointPlan",
    "control_effort_ratio",
    "hold_profile",
    "moving_average",
    "pd_fraction",
    "rmsae",
    "run_closed_loop",
]
