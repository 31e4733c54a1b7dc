"""
EVOLUTIONARY OPERATORS
======================
Mutation-only scheme:
- random initialization over the parameter domains
- tournament selection of M aspirants (with replacement)
- uniform additive mutation, clamped to the domain
"""

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ..controllers.genome import GenomeMixin, genome_type
from .config import EvolutionConfig


@dataclass(frozen=True)
class Individual:
    """Population member awaiting evaluation."""
    id: int
    generation: int
    genome: GenomeMixin


@dataclass(frozen=True)
class EvaluatedIndividual(Individual):
    """Population member with its RMSAE fitness (lower is better)."""
    fitness: float = math.inf

    @property
    def sort_key(self):
        return (self.fitness, self.id)


def init_population(config: EvolutionConfig, rng: np.random.Generator) -> List[Individual]:
    """
    Randomly initialized population.

    Args:
        config: Population size and genome kind
        rng: Initialization stream

    Returns:
        pop_size individuals with ids 0..N-1, generation 0
    """
    cls = genome_type(config.genome_kind)
    return [Individual(id=i, generation=0, genome=cls.random(rng)) for i in range(config.pop_size)]


def tournament_select(
    population: Sequence[EvaluatedIndividual],
    tournament_size: int,
    rng: np.random.Generator
) -> GenomeMixin:
    """
    Best of M uniform draws with replacement; ties go to the lowest id.

    Args:
        population: Evaluated individuals
        tournament_size: Number of aspirants M
        rng: Breeding stream

    Returns:
        Genome of the winning aspirant (genomes are immutable)
    """
    if not population:
        raise ValueError("Tournament over an empty population")
    picks = rng.integers(0, len(population), size=tournament_size)
    winner = min((population[i] for i in picks), key=lambda ind: ind.sort_key)
    return winner.genome


def mutation_scales(cls, config: EvolutionConfig) -> np.ndarray:
    """Per-parameter mutation half-width in vector order."""
    return np.array([config.mutation_ranges[kind] for kind in cls.kinds()])


def mutate(genome: GenomeMixin, config: EvolutionConfig, rng: np.random.Generator) -> GenomeMixin:
    """
    Mutate with probability p_mut_individual; inside a mutated genome each
    parameter is perturbed with probability p_mut_param by a uniform draw
    from its class range, then clamped to its domain.

    Returns:
        The same genome object when untouched, otherwise a new genome
    """
    if rng.random() >= config.p_mut_individual:
        return genome
    cls = type(genome)
    vector = genome.to_vector()
    mask = rng.random(vector.size) < config.p_mut_param
    scales = mutation_scales(cls, config)
    delta = rng.uniform(-scales, scales)
    low, high = cls.bounds()
    mutated = np.where(mask, np.clip(vector + delta, low, high), vector)
    return cls.from_vector(mutated)
