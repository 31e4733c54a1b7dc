"""
Synthetic flight logs: tele-operation-like command sequences (levels held
for a random duration) played through a plant model.
"""

import logging
from typing import Tuple

import numpy as np

from ..controllers.base import DEFAULT_U_MAX
from ..plant.blimp_model import PlantModel, PlantState, simulate
from .flight_log import FlightLog

logger = logging.getLogger(__name__)


def held_commands(
    n_steps: int,
    dt: float,
    rng: np.random.Generator,
    u_max: float = DEFAULT_U_MAX,
    hold_range: Tuple[float, float] = (1.0, 4.0)
) -> np.ndarray:
    """
    Piecewise-constant commands: each level uniform in [-u_max, u_max],
    held for a duration uniform in hold_range seconds.
    """
    low, high = hold_range
    if not 0 < low <= high:
        raise ValueError(f"Invalid hold range {hold_range}")
    commands = np.empty(n_steps)
    k = 0
    while k < n_steps:
        hold = max(1, int(round(rng.uniform(low, high) / dt)))
        commands[k:k + hold] = rng.uniform(-u_max, u_max)
        k += hold
    return commands


def generate_flight_log(
    model: PlantModel,
    duration_s: float,
    rng: np.random.Generator,
    noise_sigma: float = 0.0,
    u_max: float = DEFAULT_U_MAX,
    hold_range: Tuple[float, float] = (1.0, 4.0),
    h0: float = 0.0
) -> FlightLog:
    """
    Simulate a flight under random held commands.

    Sample k holds the command issued at step k and the altitude measured
    at step k, so the log obeys the model's difference equation exactly
    when noise_sigma is 0.

    Args:
        model: Plant generating the data
        duration_s: Log length in seconds
        rng: Random stream for commands and measurement noise
        noise_sigma: Additive Gaussian noise on the logged altitude (m)
        u_max: Command amplitude bound (V)
        hold_range: Command hold duration bounds (s)
        h0: Initial altitude (m)

    Returns:
        FlightLog with round(duration_s / dt) samples
    """
    n = int(round(duration_s / model.dt))
    if n < 2:
        raise ValueError(f"Duration {duration_s} s gives fewer than two samples")
    u = held_commands(n, model.dt, rng, u_max, hold_range)
    h = np.empty(n)
    h[0] = h0
    h[1:] = simulate(model, u[:-1], PlantState.at_rest(h0))
    if noise_sigma > 0:
        h = h + noise_sigma * rng.standard_normal(n)
    t = np.arange(n) * model.dt

    logger.info(f"Generated synthetic flight log: {n} samples, sigma={noise_sigma}")
    return FlightLog(t=t, u=u, h=h)
