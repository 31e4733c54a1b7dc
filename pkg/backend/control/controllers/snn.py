"""
SPIKING ALTITUDE CONTROLLER
===========================
Three layers: 10 position-coded inputs, 5 leaky integrate-and-fire neurons,
one non-spiking tanh output decoding the hidden spike traces.

Per step and hidden neuron i:
    u_i = sum_j w_ij s_j
    v_i <- tau_v_i v_i + alpha_v_i u_i
    spike if v_i >= theta_i, then v_i <- 0
    X_i <- tau_t_i X_i + alpha_t_i s_i
Output:
    u = u_max tanh(sum_i w_i X_i)
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .base import AltitudeController, ControlLimits, ControlOutput
from .genome import SnnGenome

logger = logging.getLogger(__name__)

N_INPUTS = 10
N_HIDDEN = 5

# Interval boundaries (m); bins are half-open [lo, hi), outer bins unbounded
ENCODER_EDGES = np.array([-0.4, -0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3, 0.4])


@dataclass(frozen=True)
class SnnState:
    """v: membrane potentials, x: spike traces of the hidden neurons."""
    v: np.ndarray
    x: np.ndarray

    @classmethod
    def zeros(cls) -> "SnnState":
        return cls(v=np.zeros(N_HIDDEN), x=np.zeros(N_HIDDEN))


def encode_index(e: float) -> int:
    """Index of the input neuron whose interval contains e."""
    return int(np.searchsorted(ENCODER_EDGES, e, side="right"))


def encode_error(e: float) -> np.ndarray:
    """
    Position-code the altitude error into a one-hot spike vector.

    Neuron 0 covers (-inf, -0.4), neurons 1..8 cover 0.1 m wide
    lower-inclusive intervals from -0.4 to 0.4, neuron 9 covers [0.4, inf).
    """
    spikes = np.zeros(N_INPUTS)
    spikes[encode_index(e)] = 1.0
    return spikes


def snn_step(
    genome: SnnGenome,
    state: SnnState,
    spikes: np.ndarray,
    limits: ControlLimits = ControlLimits()
) -> Tuple[SnnState, float]:
    """
    Advance the hidden layer one step and decode the command.

    Args:
        genome: Network parameters
        state: Membrane potentials and traces from the previous step
        spikes: Input spike vector (10,)
        limits: Actuator bound

    Returns:
        (new state, motor command in V)
    """
    current = spikes @ genome.w_hidden
    v = genome.tau_v * state.v + genome.alpha_v * current
    fired = v >= genome.theta
    v = np.where(fired, 0.0, v)
    x = genome.tau_t * state.x + genome.alpha_t * fired
    u = limits.u_max * np.tanh(float(genome.w_out @ x))
    return SnnState(v=v, x=x), limits.clamp(u)


class SnnController(AltitudeController):
    """Evolved spiking controller; carries membrane and trace state."""

    name = "snn"

    def __init__(self, genome: SnnGenome, limits: ControlLimits = ControlLimits()):
        super().__init__(limits)
        self.genome = genome
        self.state = SnnState.zeros()

    def step(self, error: float) -> ControlOutput:
        self.state, u = snn_step(self.genome, self.state, encode_error(error), self.limits)
        return ControlOutput(u_total=u, u_net=u)

    def reset(self) -> "SnnController":
        self.state = SnnState.zeros()
        return self
