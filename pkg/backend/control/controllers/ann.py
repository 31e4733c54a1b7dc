"""
Feed-forward 1-3-2-1 altitude controller.
The 1->3 and 3->2 layers use tanh, the 2->1 output is affine, then clamped.
"""

import numpy as np

from .base import AltitudeController, ControlLimits, ControlOutput
from .genome import AnnGenome


def ann_forward(genome: AnnGenome, e: float, limits: ControlLimits = ControlLimits()) -> float:
    """
    Stateless forward pass.

    Args:
        genome: Network parameters
        e: Altitude error (m)
        limits: Actuator bound

    Returns:
        Motor command (V)
    """
    x = np.array([e], dtype=float)
    h1 = np.tanh(genome.w1 @ x + genome.b1)
    h2 = np.tanh(genome.w2 @ h1 + genome.b2)
    u = float((genome.w3 @ h2 + genome.b3)[0])
    return limits.clamp(u)


class AnnController(AltitudeController):
    """Evolved feed-forward controller."""

    name = "ann"

    def __init__(self, genome: AnnGenome, limits: ControlLimits = ControlLimits()):
        super().__init__(limits)
        self.genome = genome

    def step(self, error: float) -> ControlOutput:
        u = ann_forward(self.genome, error, self.limits)
        return ControlOutput(u_total=u, u_net=u)

    def reset(self) -> "AnnController":
        return self
