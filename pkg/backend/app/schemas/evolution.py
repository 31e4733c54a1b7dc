"""
Evolution Schemas
=================
Hall of fame, checkpoint and generation-log documents.
"""

from dataclasses import asdict
from typing import Any, ClassVar, Dict, List, Literal, Optional, Type

from pydantic import Field

from app.core.exceptions import BlimpError, CheckpointError
from control.evolution import EvaluatedIndividual, GenerationRecord, HallOfFame, Individual

from .base import Document, Record
from .genome import GenomeDocument

SCHEMA_VERSION = 1


class IndividualDocument(Record):
    """Population or hall of fame member; fitness is None before evaluation."""
    id: int = Field(ge=0)
    generation: int = Field(ge=0)
    fitness: Optional[float] = None
    genome: GenomeDocument

    @classmethod
    def from_individual(cls, individual: Individual) -> "IndividualDocument":
        return cls(
            id=individual.id,
            generation=individual.generation,
            fitness=getattr(individual, "fitness", None),
            genome=GenomeDocument.from_genome(individual.genome),
        )

    def to_individual(self) -> Individual:
        return Individual(id=self.id, generation=self.generation, genome=self.genome.to_genome())

    def to_evaluated(self) -> EvaluatedIndividual:
        if self.fitness is None:
            raise CheckpointError(f"Individual {self.id} has no fitness", details={"id": self.id})
        return EvaluatedIndividual(
            id=self.id, generation=self.generation, genome=self.genome.to_genome(), fitness=self.fitness
        )


class GenerationRow(Record):
    """One generation-log row"""
    generation: int
    best: float
    mean: float
    std: float
    hof_best: float
    evaluations: int

    @classmethod
    def from_record(cls, record: GenerationRecord) -> "GenerationRow":
        return cls(**asdict(record))

    def to_record(self) -> GenerationRecord:
        return GenerationRecord(**self.model_dump())


class HallOfFameDocument(Document):
    """Ranked hall of fame; reevaluated tells whether fitness is the multi-set mean."""
    kind: Literal["ann", "snn"]
    seed: int
    reevaluated: bool = False
    members: List[IndividualDocument]

    ARTIFACT: ClassVar[str] = "hall of fame"

    @classmethod
    def from_members(cls, kind: str, seed: int, members, reevaluated: bool = False) -> "HallOfFameDocument":
        return cls(
            kind=kind,
            seed=seed,
            reevaluated=reevaluated,
            members=[IndividualDocument.from_individual(m) for m in members],
        )


class CheckpointDocument(Document):
    """
    Everything needed to resume at `generation`: population awaiting
    evaluation, hall of fame, log so far and the run settings it belongs to.
    """
    schema_version: int = Field(default=SCHEMA_VERSION, ge=1, le=SCHEMA_VERSION)
    run: Dict[str, Any]
    generation: int = Field(ge=0)
    next_id: int = Field(ge=0)
    hof_size: int = Field(ge=1)
    population: List[IndividualDocument]
    hof: List[IndividualDocument]
    log: List[GenerationRow]

    ARTIFACT: ClassVar[str] = "checkpoint"
    INVALID_ERROR: ClassVar[Type[BlimpError]] = CheckpointError

    def hall_of_fame(self) -> HallOfFame:
        return HallOfFame(self.hof_size, [m.to_evaluated() for m in self.hof])
