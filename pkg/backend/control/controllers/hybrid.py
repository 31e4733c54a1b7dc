"""
Network controller with a parallel PD term for closing the reality gap.
u_total = clamp(u_net + u_pd); both components are reported unclamped by
the wrapper so the PD share of the command can be measured.
"""

import logging
from typing import Tuple

from .base import AltitudeController, ControlLimits, ControlOutput
from .pid import PidParams, PidState, pid_terms

logger = logging.getLogger(__name__)


def hybrid_step(
    net: AltitudeController,
    pd: PidParams,
    state: PidState,
    e: float,
    limits: ControlLimits = ControlLimits()
) -> Tuple[PidState, ControlOutput]:
    """
    One step of network + PD.

    Args:
        net: Network controller (keeps its own state)
        pd: PD gains (ki must be 0)
        state: PD error history
        e: Altitude error (m)
        limits: Actuator bound for the sum

    Returns:
        (new PD state, ControlOutput with total and components)
    """
    u_net = net.step(e).u_total
    state, u_pd = pid_terms(pd, state, e)
    return state, ControlOutput(u_total=limits.clamp(u_net + u_pd), u_net=u_net, u_pd=u_pd)


class HybridController(AltitudeController):
    """Wraps an ANN or SNN controller with a parallel PD."""

    def __init__(self, net: AltitudeController, pd: PidParams, limits: ControlLimits = ControlLimits()):
        if pd.ki != 0:
            raise ValueError(f"Parallel PD must have ki = 0, got {pd.ki}")
        super().__init__(limits)
        self.net = net
        self.pd = pd
        self.state = PidState()
        self.name = net.name
        logger.debug(f"HybridController({net.name}) with PD kp={pd.kp}, kd={pd.kd}")

    def step(self, error: float) -> ControlOutput:
        self.state, output = hybrid_step(self.net, self.pd, self.state, error, self.limits)
        return output

    def reset(self) -> "HybridController":
        self.net.reset()
        self.state = PidState()
        return self
