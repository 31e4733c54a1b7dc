#!/usr/bin/env python3
"""
Fitness Worker Pool
===================
Process pool that evaluates genome fitness tasks for the evolution engine.

Every task carries its own noise-stream key, so results are identical to
in-process evaluation whatever the number of workers.

Usage (benchmark a configuration without evolving):
    python workers/fitness_worker.py --workers 4 --tasks 200
"""

import argparse
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

import psutil

# Add backend to path
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT / "backend"))

from control.evolution.fitness import EvaluationTask, evaluate_task  # noqa: E402

logger = logging.getLogger(__name__)


def default_worker_count() -> int:
    """Physical core count (logical count when unavailable)."""
    return psutil.cpu_count(logical=False) or psutil.cpu_count(logical=True) or 1


class FitnessWorkerPool:
    """
    Callable evaluator backed by a ProcessPoolExecutor.

    Features:
    - Order-preserving map over tasks
    - Worker count from config, 0 = physical cores
    - Context manager shuts the pool down
    """

    def __init__(self, workers: int = 0, chunksize: Optional[int] = None):
        self.workers = workers if workers > 0 else default_worker_count()
        self.chunksize = chunksize
        self.executor = ProcessPoolExecutor(max_workers=self.workers)
        logger.info(f"FitnessWorkerPool started with {self.workers} worker processes")

    def __call__(self, tasks: Sequence[EvaluationTask]) -> List[float]:
        if not tasks:
            return []
        chunksize = self.chunksize or max(1, len(tasks) // (4 * self.workers))
        return list(self.executor.map(evaluate_task, tasks, chunksize=chunksize))

    def shutdown(self) -> None:
        self.executor.shutdown(wait=True)
        logger.info("FitnessWorkerPool stopped")

    def __enter__(self) -> "FitnessWorkerPool":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.shutdown()


def main(argv: Optional[Sequence[str]] = None) -> int:
    from app.core.config import load_settings
    from app.core.logging import setup_logging
    from app.core.rng import Stream, derive_rng
    from control.controllers import genome_type

    parser = argparse.ArgumentParser(description="Benchmark parallel fitness evaluation")
    parser.add_argument("--config", type=str, default=None, help="TOML config file")
    parser.add_argument("--workers", type=int, default=0, help="Worker processes (0 = physical cores)")
    parser.add_argument("--tasks", type=int, default=100, help="Random genomes to evaluate")
    args = parser.parse_args(argv)

    settings = load_settings(args.config)
    setup_logging(settings.log_level, settings.log_file, settings.log_format)

    cls = genome_type(settings.evolution.controller)
    episode = settings.episode_set().sample(derive_rng(settings.seed, Stream.EPISODE, 0))
    rng = derive_rng(settings.seed, Stream.INIT_POPULATION)
    tasks = [
        EvaluationTask(
            genome=cls.random(rng),
            episode=episode,
            plant=settings.plant_model(),
            radar=settings.radar_model(),
            limits=settings.control_limits(),
            noise_key=(settings.seed, Stream.SENSOR_NOISE, 0, i),
        )
        for i in range(args.tasks)
    ]

    with FitnessWorkerPool(args.workers) as pool:
        start = time.perf_counter()
        results = pool(tasks)
        elapsed = time.perf_counter() - start

    logger.info(f"Evaluated {len(results)} genomes in {elapsed:.2f} s ({len(results) / elapsed:.1f}/s), best={min(results):.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
