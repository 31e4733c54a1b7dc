"""
Genome Schemas
==============
Genome file layout:

    {"kind": "snn", "schema_version": 1,
     "blocks": [{"name": "w_hidden", "kind": "weight", "shape": [10, 5],
                 "domain": [-5.0, 5.0], "values": [[...], ...]}, ...]}
"""

from typing import Any, ClassVar, List, Literal, Tuple, Type

import numpy as np
from pydantic import Field

from app.core.exceptions import BlimpError, GenomeShapeError
from control.controllers.genome import GenomeMixin, genome_type

from .base import Document, Record

SCHEMA_VERSION = 1


class ParameterBlockDocument(Record):
    """One named parameter array, values nested in its shape."""
    name: str
    kind: str
    shape: List[int]
    domain: Tuple[float, float]
    values: Any


class GenomeDocument(Document):
    """Schema for a genome file"""
    kind: Literal["ann", "snn"]
    schema_version: int = Field(default=SCHEMA_VERSION, ge=1, le=SCHEMA_VERSION)
    blocks: List[ParameterBlockDocument]

    ARTIFACT: ClassVar[str] = "genome"
    INVALID_ERROR: ClassVar[Type[BlimpError]] = GenomeShapeError

    @classmethod
    def from_genome(cls, genome: GenomeMixin) -> "GenomeDocument":
        return cls(
            kind=genome.KIND,
            blocks=[
                ParameterBlockDocument(
                    name=block.name,
                    kind=block.kind.value,
                    shape=list(block.shape),
                    domain=block.domain,
                    values=getattr(genome, block.name).tolist(),
                )
                for block in genome.BLOCKS
            ],
        )

    def to_genome(self) -> GenomeMixin:
        """
        Rebuild the genome.

        Raises:
            GenomeShapeError: block names, shapes or domains disagree with
                the network layout
        """
        cls = genome_type(self.kind)
        by_name = {b.name: b for b in self.blocks}
        expected = [b.name for b in cls.BLOCKS]
        if sorted(by_name) != sorted(expected) or len(self.blocks) != len(expected):
            raise GenomeShapeError(
                f"{self.kind} genome needs blocks {expected}, got {[b.name for b in self.blocks]}",
                details={"expected": expected}
            )

        arrays = {}
        for block in cls.BLOCKS:
            doc = by_name[block.name]
            try:
                values = np.array(doc.values, dtype=float)
            except (TypeError, ValueError) as e:
                raise GenomeShapeError(f"Block '{block.name}' holds non-numeric values", details={"block": block.name}) from e
            if tuple(doc.shape) != block.shape or values.shape != block.shape:
                raise GenomeShapeError(
                    f"Block '{block.name}' has shape {list(values.shape)}, expected {list(block.shape)}",
                    details={"block": block.name}
                )
            low, high = block.domain
            if not np.all((values >= low) & (values <= high)):
                raise GenomeShapeError(
                    f"Block '{block.name}' has values outside [{low}, {high}]",
                    details={"block": block.name}
                )
            arrays[block.name] = values
        return cls(**arrays)
