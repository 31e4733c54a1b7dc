"""Mutation-only neuroevolution: operators, hall of fame, fitness and the generation loop."""

from .config import DEFAULT_MUTATION_RANGES, Episode, EpisodeSet, EvolutionConfig
from .evolver import (
    EvolutionRun,
    EvolutionState,
    GenerationRecord,
    evolve,
    fitness_summary,
    reevaluate_hof,
    serial_evaluator,
)
from .fitness import EvaluationTask, evaluate, evaluate_task
from .hall_of_fame import HallOfFame
from .operators import EvaluatedIndividual, Individual, init_population, mutate, tournament_select

__all__ = [
    "DEFAULT_MUTATION_RANGES",
    "EvaluatedIndividual",
    "EvaluationTask",
    "Episode",
    "EpisodeSet",
    "EvolutionConfig",
    "EvolutionRun",
    "EvolutionState",
    "GenerationRecord",
    "HallOfFame",
    "Individual",
    "evaluate",
    "evaluate_task",
    "evolve",
    "fitness_summary",
    "init_population",
    "mutate",
    "reevaluate_hof",
    "serial_evaluator",
    "tournament_select",
]
