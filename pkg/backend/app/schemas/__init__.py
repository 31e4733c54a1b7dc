"""
Pydantic Schemas
================
Documents for every JSON file the toolkit writes: genomes, hall of fame,
checkpoints, evaluation and fit reports.
"""

from .base import Document, Record
from .evolution import CheckpointDocument, GenerationRow, HallOfFameDocument, IndividualDocument
from .genome import GenomeDocument, ParameterBlockDocument
from .report import ComparisonRow, EvalReportDocument, FitReportDocument, PlanDocument, PlantDocument

__all__ = [
    "CheckpointDocument",
    "ComparisonRow",
    "Document",
    "EvalReportDocument",
    "FitReportDocument",
    "GenerationRow",
    "GenomeDocument",
    "HallOfFameDocument",
    "IndividualDocument",
    "ParameterBlockDocument",
    "PlanDocument",
    "PlantDocument",
    "Record",
]
