"""
EVOLUTIONARY RUN
================
Generation loop:
    evaluate all -> update hall of fame -> select N offspring by tournament
    -> mutate

All randomness is derived from (seed, stream, generation, ...), so a run
resumed from any generation boundary is bit-identical to an uninterrupted
one, and results do not depend on how evaluations are scheduled.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from app.core.rng import Stream, derive_rng

from ..controllers import ControlLimits
from ..plant.blimp_model import PlantModel
from ..plant.radar import RadarModel
from .config import EvolutionConfig
from .fitness import EvaluationTask, evaluate_task
from .hall_of_fame import HallOfFame
from .operators import EvaluatedIndividual, Individual, init_population, mutate, tournament_select

logger = logging.getLogger(__name__)

Evaluator = Callable[[Sequence[EvaluationTask]], List[float]]


def serial_evaluator(tasks: Sequence[EvaluationTask]) -> List[float]:
    """In-process evaluation, in task order."""
    return [evaluate_task(task) for task in tasks]


@dataclass(frozen=True)
class GenerationRecord:
    """One row of the generation log."""
    generation: int
    best: float
    mean: float
    std: float
    hof_best: float
    evaluations: int


@dataclass
class EvolutionState:
    """Everything needed to continue a run at `generation`."""
    generation: int
    next_id: int
    population: List[Individual]
    hof: HallOfFame
    log: List[GenerationRecord] = field(default_factory=list)


def fitness_summary(fitness: Sequence[float]) -> Tuple[float, float, float]:
    """(best, mean, std); mean/std over finite values only."""
    values = np.asarray(fitness, dtype=float)
    finite = values[np.isfinite(values)]
    best = float(values.min()) if values.size else math.inf
    if finite.size == 0:
        return best, math.inf, math.nan
    return best, float(finite.mean()), float(finite.std())


class EvolutionRun:
    """
    Stateful evolutionary optimization of one controller type.

    Features:
    - Pluggable evaluator (serial or worker pool)
    - Per-generation callback for logging and checkpoints
    - Exact resume from an EvolutionState
    """

    def __init__(
        self,
        config: EvolutionConfig,
        plant: PlantModel,
        radar: RadarModel,
        limits: ControlLimits = ControlLimits(),
        evaluator: Evaluator = serial_evaluator,
        state: Optional[EvolutionState] = None
    ):
        self.config = config
        self.plant = plant
        self.radar = radar
        self.limits = limits
        self.evaluator = evaluator
        self.state = state or self.initial_state()

        logger.info(
            f"EvolutionRun initialized (kind={config.genome_kind}, N={config.pop_size}, "
            f"M={config.tournament_size}, generations={config.n_generations}, seed={config.seed}, "
            f"start_generation={self.state.generation})"
        )

    def initial_state(self) -> EvolutionState:
        rng = derive_rng(self.config.seed, Stream.INIT_POPULATION)
        population = init_population(self.config, rng)
        return EvolutionState(
            generation=0,
            next_id=len(population),
            population=population,
            hof=HallOfFame(self.config.hof_size),
        )

    @property
    def finished(self) -> bool:
        return self.state.generation >= self.config.n_generations

    def evaluate_population(self, population: Sequence[Individual], generation: int) -> List[EvaluatedIndividual]:
        """Evaluate every individual on this generation's shared episode."""
        seed = self.config.seed
        episode = self.config.episode_set.sample(derive_rng(seed, Stream.EPISODE, generation))
        tasks = [
            EvaluationTask(
                genome=ind.genome,
                episode=episode,
                plant=self.plant,
                radar=self.radar,
                limits=self.limits,
                noise_key=(seed, Stream.SENSOR_NOISE, generation, index),
            )
            for index, ind in enumerate(population)
        ]
        fitness = self.evaluator(tasks)
        return [
            EvaluatedIndividual(id=ind.id, generation=ind.generation, genome=ind.genome, fitness=float(f))
            for ind, f in zip(population, fitness)
        ]

    def breed(self, evaluated: Sequence[EvaluatedIndividual], generation: int) -> List[Individual]:
        """N tournaments + mutation; offspring get fresh ids."""
        rng = derive_rng(self.config.seed, Stream.BREEDING, generation)
        offspring = []
        for _ in range(self.config.pop_size):
            parent = tournament_select(evaluated, self.config.tournament_size, rng)
            child = mutate(parent, self.config, rng)
            offspring.append(Individual(id=self.state.next_id, generation=generation + 1, genome=child))
            self.state.next_id += 1
        return offspring

    def step(self) -> GenerationRecord:
        """Run one generation and advance the state."""
        generation = self.state.generation
        evaluated = self.evaluate_population(self.state.population, generation)
        self.state.hof.update(evaluated)

        best, mean, std = fitness_summary([ind.fitness for ind in evaluated])
        record = GenerationRecord(
            generation=generation,
            best=best,
            mean=mean,
            std=std,
            hof_best=self.state.hof.best.fitness,
            evaluations=len(evaluated),
        )

        self.state.population = self.breed(evaluated, generation)
        self.state.generation = generation + 1
        self.state.log.append(record)

        logger.info(
            f"Generation {generation}: best={best:.4f} mean={mean:.4f} std={std:.4f} hof_best={record.hof_best:.4f}",
            extra={"generation": generation}
        )
        return record

    def run(self, on_generation: Optional[Callable[[EvolutionState, GenerationRecord], None]] = None):
        """
        Run the remaining generations.

        Args:
            on_generation: Called after every generation with the new state

        Returns:
            (hall of fame, generation log)
        """
        while not self.finished:
            record = self.step()
            if on_generation is not None:
                on_generation(self.state, record)
        return self.state.hof, list(self.state.log)


def evolve(
    config: EvolutionConfig,
    plant: PlantModel = PlantModel.fitted(),
    radar: RadarModel = RadarModel(),
    limits: ControlLimits = ControlLimits(),
    evaluator: Evaluator = serial_evaluator,
    on_generation: Optional[Callable[[EvolutionState, GenerationRecord], None]] = None,
    state: Optional[EvolutionState] = None
) -> Tuple[HallOfFame, List[GenerationRecord]]:
    """Run (or resume) a full evolution; returns (hall of fame, generation log)."""
    return EvolutionRun(config, plant, radar, limits, evaluator, state).run(on_generation)


def reevaluate_hof(
    members: Sequence[EvaluatedIndividual],
    config: EvolutionConfig,
    plant: PlantModel,
    radar: RadarModel,
    rng: np.random.Generator,
    n_sets: int = 5,
    limits: ControlLimits = ControlLimits(),
    evaluator: Evaluator = serial_evaluator
) -> List[EvaluatedIndividual]:
    """
    Re-score hall of fame members on n_sets fresh episodes.

    Every member sees the same episodes; noise streams are keyed by member
    id, so the ranking does not depend on the processing order.

    Returns:
        Members with fitness = mean RMSAE over the sets, ascending
    """
    episodes = [config.episode_set.sample(rng) for _ in range(n_sets)]
    noise_base = int(rng.integers(0, 2**63 - 1))
    tasks = [
        EvaluationTask(
            genome=member.genome,
            episode=episode,
            plant=plant,
            radar=radar,
            limits=limits,
            noise_key=(noise_base, set_index, member.id),
        )
        for member in members
        for set_index, episode in enumerate(episodes)
    ]
    scores = np.asarray(evaluator(tasks), dtype=float).reshape(len(members), n_sets) if members else np.empty((0, n_sets))
    ranked = [
        EvaluatedIndividual(id=m.id, generation=m.generation, genome=m.genome, fitness=float(np.mean(row)))
        for m, row in zip(members, scores)
    ]
    ranked.sort(key=lambda m: m.sort_key)
    logger.info(f"Re-evaluated {len(ranked)} hall of fame members on {n_sets} episode sets")
    return ranked
