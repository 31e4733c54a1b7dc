"""
Evolution and episode configuration (immutable, validated on construction).
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from ..controllers.genome import ParameterKind
from ..pipeline.closed_loop import hold_profile

# Half-width of the uniform additive mutation per parameter class
DEFAULT_MUTATION_RANGES: Dict[ParameterKind, float] = {
    ParameterKind.WEIGHT: 2.5,
    ParameterKind.BIAS: 2.5,
    ParameterKind.THRESHOLD: 0.5,
    ParameterKind.SCALE: 1.0,
    ParameterKind.DECAY: 0.5,
}


@dataclass(frozen=True)
class EpisodeSet:
    """
    Recipe for one fitness rollout: n_setpoints drawn uniformly from
    setpoint_range, each held hold_s seconds, concatenated into one episode.
    """
    n_setpoints: int = 10
    setpoint_range: Tuple[float, float] = (0.0, 3.0)
    hold_s: float = 15.0
    dt: float = 0.2
    h0: float = 0.0

    def __post_init__(self):
        low, high = self.setpoint_range
        if self.n_setpoints < 1:
            raise ValueError(f"n_setpoints must be >= 1, got {self.n_setpoints}")
        if not low <= high:
            raise ValueError(f"Invalid setpoint range {self.setpoint_range}")
        if not (self.hold_s > 0 and self.dt > 0):
            raise ValueError("hold_s and dt must be > 0")

    @property
    def steps_per_setpoint(self) -> int:
        return int(round(self.hold_s / self.dt))

    def sample(self, rng: np.random.Generator) -> "Episode":
        """Draw concrete setpoints."""
        low, high = self.setpoint_range
        setpoints = rng.uniform(low, high, size=self.n_setpoints)
        return Episode(setpoints=tuple(float(s) for s in setpoints), hold_s=self.hold_s, dt=self.dt, h0=self.h0)


@dataclass(frozen=True)
class Episode:
    """Concrete setpoint schedule of one rollout."""
    setpoints: Tuple[float, ...]
    hold_s: float = 15.0
    dt: float = 0.2
    h0: float = 0.0

    def reference(self) -> np.ndarray:
        return hold_profile(self.setpoints, [self.hold_s] * len(self.setpoints), self.dt)


@dataclass(frozen=True)
class EvolutionConfig:
    """Mutation-only evolutionary run settings."""
    pop_size: int = 100
    tournament_size: int = 3
    p_mut_individual: float = 0.4
    p_mut_param: float = 0.6
    n_generations: int = 300
    hof_size: int = 5
    reeval_sets: int = 5
    genome_kind: str = "snn"
    seed: int = 0
    mutation_ranges: Dict[ParameterKind, float] = field(default_factory=lambda: dict(DEFAULT_MUTATION_RANGES))
    episode_set: EpisodeSet = field(default_factory=EpisodeSet)

    def __post_init__(self):
        if not self.pop_size >= self.tournament_size >= 1:
            raise ValueError(
                f"Need pop_size >= tournament_size >= 1, got {self.pop_size}, {self.tournament_size}"
            )
        for name in ("p_mut_individual", "p_mut_param"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.hof_size < 1:
            raise ValueError(f"hof_size must be >= 1, got {self.hof_size}")
        if self.n_generations < 0 or self.reeval_sets < 1:
            raise ValueError("n_generations must be >= 0 and reeval_sets >= 1")
        if self.genome_kind not in ("snn", "ann"):
            raise ValueError(f"genome_kind must be 'snn' or 'ann', got {self.genome_kind}")
        missing = set(ParameterKind) - set(self.mutation_ranges)
        if missing:
            raise ValueError(f"Missing mutation ranges for {sorted(k.value for k in missing)}")
