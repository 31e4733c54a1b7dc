"""
Evolution Service
=================
Runs a neuroevolution experiment from settings and persists its artifacts.

Output directory layout:
    checkpoints/generation_NNNN.json   state before generation NNNN
    generations.csv                    generation,best,mean,std,hof_best,evaluations
    hall_of_fame.json                  members ranked by evolution fitness
    hall_of_fame_ranked.json           members ranked after re-evaluation
    best_genome.json                   top re-evaluated genome
"""

import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from control.evolution import (
    EvaluatedIndividual,
    EvolutionRun,
    EvolutionState,
    GenerationRecord,
    HallOfFame,
    reevaluate_hof,
    serial_evaluator,
)
from control.evolution.evolver import Evaluator

from ..core.config import Settings
from ..core.exceptions import CheckpointError
from ..core.rng import Stream, derive_rng
from ..schemas.evolution import CheckpointDocument, GenerationRow, HallOfFameDocument, IndividualDocument
from ..schemas.genome import GenomeDocument

logger = logging.getLogger(__name__)

LOG_COLUMNS = [field for field in GenerationRecord.__dataclass_fields__]


@dataclass
class EvolutionOutcome:
    hof: HallOfFame
    log: List[GenerationRecord]
    ranked: List[EvaluatedIndividual]
    best_genome_path: Optional[Path]


class EvolutionService:
    """
    Evolution experiment with on-disk state.

    Features:
    - Checkpoint after every `checkpoint_every` generations
    - Exact resume from the latest checkpoint
    - Hall of fame re-evaluation and best genome export
    """

    def __init__(self, settings: Settings, output_dir: Union[str, Path], evaluator: Evaluator = serial_evaluator):
        self.settings = settings
        self.output_dir = Path(output_dir)
        self.evaluator = evaluator
        self.config = settings.evolution_config()
        self.plant = settings.plant_model()
        self.radar = settings.radar_model()
        self.limits = settings.control_limits()

        logger.info(
            f"EvolutionService initialized (output_dir={self.output_dir}, controller={self.config.genome_kind})",
            extra={"controller": self.config.genome_kind}
        )

    @property
    def checkpoint_dir(self) -> Path:
        return self.output_dir / "checkpoints"

    def checkpoint_path(self, generation: int) -> Path:
        return self.checkpoint_dir / f"generation_{generation:04d}.json"

    def run_fingerprint(self) -> Dict[str, Any]:
        """Settings that must match for a checkpoint to be resumable."""
        s = self.settings
        evolution = s.evolution.model_dump(mode="json", exclude={"n_generations", "workers", "checkpoint_every"})
        return {
            "seed": s.seed,
            "evolution": evolution,
            "episode": s.episode.model_dump(mode="json"),
            "plant": s.plant.model_dump(mode="json"),
            "radar": s.radar.model_dump(mode="json"),
            "u_max": s.controller.u_max,
        }

    # Persistence

    def latest_checkpoint(self) -> Optional[Path]:
        checkpoints = sorted(self.checkpoint_dir.glob("generation_*.json"))
        return checkpoints[-1] if checkpoints else None

    def save_checkpoint(self, state: EvolutionState) -> Path:
        document = CheckpointDocument(
            run=self.run_fingerprint(),
            generation=state.generation,
            next_id=state.next_id,
            hof_size=state.hof.maxsize,
            population=[IndividualDocument.from_individual(ind) for ind in state.population],
            hof=[IndividualDocument.from_individual(m) for m in state.hof],
            log=[GenerationRow.from_record(r) for r in state.log],
        )
        return document.save(self.checkpoint_path(state.generation))

    def load_checkpoint(self, path: Union[str, Path]) -> EvolutionState:
        """
        Raises:
            CheckpointError: invalid file or produced by different settings
        """
        document = CheckpointDocument.load(path)
        if document.run != self.run_fingerprint():
            raise CheckpointError(
                f"Checkpoint '{path}' was written by a run with different settings",
                details={"path": str(path)}
            )
        if len(document.population) != self.config.pop_size:
            raise CheckpointError(f"Checkpoint '{path}' population size mismatch", details={"path": str(path)})

        logger.info(f"Resuming from checkpoint {path} at generation {document.generation}")
        return EvolutionState(
            generation=document.generation,
            next_id=document.next_id,
            population=[ind.to_individual() for ind in document.population],
            hof=document.hall_of_fame(),
            log=[row.to_record() for row in document.log],
        )

    def write_log(self, records: List[GenerationRecord]) -> Path:
        path = self.output_dir / "generations.csv"
        path.parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame([asdict(r) for r in records], columns=LOG_COLUMNS).to_csv(path, index=False)
        return path

    def write_hall_of_fame(self, members, filename: str, reevaluated: bool) -> Path:
        document = HallOfFameDocument.from_members(self.config.genome_kind, self.config.seed, members, reevaluated)
        return document.save(self.output_dir / filename)

    # Run

    def _on_generation(self, state: EvolutionState, record: GenerationRecord) -> None:
        every = self.settings.evolution.checkpoint_every
        if state.generation % every == 0 or state.generation >= self.config.n_generations:
            self.save_checkpoint(state)
            self.write_log(state.log)

    def run(self, resume: bool = False) -> EvolutionOutcome:
        """
        Evolve, re-evaluate the hall of fame and export the best genome.

        Args:
            resume: Continue from the latest checkpoint when one exists

        Returns:
            EvolutionOutcome
        """
        state = None
        if resume:
            latest = self.latest_checkpoint()
            if latest is not None:
                state = self.load_checkpoint(latest)
            else:
                logger.info("No checkpoint found, starting a fresh run")

        run = EvolutionRun(self.config, self.plant, self.radar, self.limits, self.evaluator, state)
        if run.state.generation == 0:
            self.save_checkpoint(run.state)
        hof, log = run.run(self._on_generation)
        self.write_log(log)

        if len(hof) == 0:
            logger.warning("Run finished without evaluating any generation; nothing to rank")
            return EvolutionOutcome(hof=hof, log=log, ranked=[], best_genome_path=None)

        self.write_hall_of_fame(hof, "hall_of_fame.json", reevaluated=False)
        ranked = reevaluate_hof(
            list(hof),
            self.config,
            self.plant,
            self.radar,
            derive_rng(self.config.seed, Stream.HOF_REEVALUATION),
            n_sets=self.config.reeval_sets,
            limits=self.limits,
            evaluator=self.evaluator,
        )
        self.write_hall_of_fame(ranked, "hall_of_fame_ranked.json", reevaluated=True)
        best_path = GenomeDocument.from_genome(ranked[0].genome).save(self.output_dir / "best_genome.json")

        logger.info(
            f"Evolution finished: best re-evaluated fitness {ranked[0].fitness:.4f} (id {ranked[0].id}), "
            f"genome written to {best_path}"
        )
        return EvolutionOutcome(hof=hof, log=log, ranked=ranked, best_genome_path=best_path)
