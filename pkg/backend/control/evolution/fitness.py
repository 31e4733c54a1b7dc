"""
Episodic fitness: RMSAE of a genome's controller over one episode, computed
on true altitude with fresh sensor noise.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.core.rng import derive_rng

from ..controllers import ControlLimits, GenomeMixin, build_network_controller
from ..pipeline.closed_loop import run_closed_loop
from ..plant.blimp_model import BlimpPlant, PlantModel
from ..plant.radar import RadarModel
from .config import Episode

logger = logging.getLogger(__name__)


def evaluate(
    genome: GenomeMixin,
    episode: Episode,
    plant: PlantModel,
    radar: RadarModel,
    rng: np.random.Generator,
    limits: ControlLimits = ControlLimits()
) -> float:
    """
    Fitness of one genome.

    Controller state is reset at the start and persists across the
    setpoint changes of the episode.

    Args:
        genome: Network parameters
        episode: Setpoint schedule
        plant: Plant model
        radar: Sensor model
        rng: Sensor noise stream
        limits: Actuator bound

    Returns:
        RMSAE in m, +inf if the trajectory became non-finite
    """
    controller = build_network_controller(genome, limits)
    trace = run_closed_loop(
        controller,
        BlimpPlant(plant),
        radar,
        episode.reference(),
        rng,
        dt=episode.dt,
        h0=episode.h0,
    )
    fitness = trace.rmsae()
    return fitness if math.isfinite(fitness) else math.inf


@dataclass(frozen=True)
class EvaluationTask:
    """Self-contained, picklable unit of work for the fitness workers."""
    genome: GenomeMixin
    episode: Episode
    plant: PlantModel
    radar: RadarModel
    limits: ControlLimits
    noise_key: Tuple[int, ...]


def evaluate_task(task: EvaluationTask) -> float:
    """Evaluate a task with its own noise stream."""
    return evaluate(task.genome, task.episode, task.plant, task.radar, derive_rng(*task.noise_key), task.limits)
