"""
EVOLVABLE GENOMES
=================
Parameter sets of the two network controllers, described block by block so
that the evolutionary operators can work on a flat vector without knowing
the network layout.

Domains:
- weights, biases:  [-5, 5]
- thresholds:       [0, 1]
- scales (alpha):   [0, 2]
- decays (tau):     [0, 1]
"""

from dataclasses import dataclass
from enum import Enum
from typing import ClassVar, Dict, Tuple, Type

import numpy as np

from app.core.exceptions import GenomeShapeError


class ParameterKind(str, Enum):
    """Parameter classes; each has its own domain and mutation range."""
    WEIGHT = "weight"
    BIAS = "bias"
    THRESHOLD = "threshold"
    SCALE = "scale"
    DECAY = "decay"


DOMAINS: Dict[ParameterKind, Tuple[float, float]] = {
    ParameterKind.WEIGHT: (-5.0, 5.0),
    ParameterKind.BIAS: (-5.0, 5.0),
    ParameterKind.THRESHOLD: (0.0, 1.0),
    ParameterKind.SCALE: (0.0, 2.0),
    ParameterKind.DECAY: (0.0, 1.0),
}


@dataclass(frozen=True)
class ParameterBlock:
    """One named array of a genome."""
    name: str
    shape: Tuple[int, ...]
    kind: ParameterKind

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def domain(self) -> Tuple[float, float]:
        return DOMAINS[self.kind]


class GenomeMixin:
    """Vector view and validation shared by all genomes."""

    KIND: ClassVar[str]
    BLOCKS: ClassVar[Tuple[ParameterBlock, ...]]

    def __post_init__(self):
        for block in self.BLOCKS:
            values = np.array(getattr(self, block.name), dtype=float)
            if values.shape != block.shape:
                raise GenomeShapeError(
                    f"{self.KIND} block '{block.name}' has shape {values.shape}, expected {block.shape}",
                    details={"block": block.name, "shape": list(values.shape), "expected": list(block.shape)}
                )
            values.setflags(write=False)
            object.__setattr__(self, block.name, values)

    @classmethod
    def n_params(cls) -> int:
        return sum(block.size for block in cls.BLOCKS)

    @classmethod
    def bounds(cls) -> Tuple[np.ndarray, np.ndarray]:
        """Per-parameter (low, high) in vector order."""
        low = np.concatenate([np.full(b.size, b.domain[0]) for b in cls.BLOCKS])
        high = np.concatenate([np.full(b.size, b.domain[1]) for b in cls.BLOCKS])
        return low, high

    @classmethod
    def kinds(cls) -> Tuple[ParameterKind, ...]:
        """Parameter kind of every vector entry."""
        return tuple(b.kind for b in cls.BLOCKS for _ in range(b.size))

    def to_vector(self) -> np.ndarray:
        return np.concatenate([getattr(self, b.name).ravel() for b in self.BLOCKS])

    @classmethod
    def from_vector(cls, vector: np.ndarray):
        vector = np.asarray(vector, dtype=float)
        if vector.shape != (cls.n_params(),):
            raise GenomeShapeError(
                f"{cls.KIND} genome needs {cls.n_params()} parameters, got {vector.shape}",
                details={"expected": cls.n_params(), "shape": list(vector.shape)}
            )
        arrays, offset = {}, 0
        for block in cls.BLOCKS:
            arrays[block.name] = vector[offset:offset + block.size].reshape(block.shape)
            offset += block.size
        return cls(**arrays)

    @classmethod
    def random(cls, rng: np.random.Generator):
        """Every parameter uniform over its domain."""
        low, high = cls.bounds()
        return cls.from_vector(rng.uniform(low, high))

    @classmethod
    def zeros(cls):
        return cls.from_vector(np.zeros(cls.n_params()))

    def in_domain(self) -> bool:
        low, high = self.bounds()
        vector = self.to_vector()
        return bool(np.all((vector >= low) & (vector <= high)))

    def same_parameters(self, other) -> bool:
        return type(self) is type(other) and np.array_equal(self.to_vector(), other.to_vector())


@dataclass(frozen=True, eq=False)
class AnnGenome(GenomeMixin):
    """1-3-2-1 feed-forward network; weights stored (out, in)."""
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    w3: np.ndarray
    b3: np.ndarray

    KIND: ClassVar[str] = "ann"
    BLOCKS: ClassVar[Tuple[ParameterBlock, ...]] = (
        ParameterBlock("w1", (3, 1), ParameterKind.WEIGHT),
        ParameterBlock("b1", (3,), ParameterKind.BIAS),
        ParameterBlock("w2", (2, 3), ParameterKind.WEIGHT),
        ParameterBlock("b2", (2,), ParameterKind.BIAS),
        ParameterBlock("w3", (1, 2), ParameterKind.WEIGHT),
        ParameterBlock("b3", (1,), ParameterKind.BIAS),
    )


@dataclass(frozen=True, eq=False)
class SnnGenome(GenomeMixin):
    """
    10-5-1 spiking network.

    w_hidden: (10 inputs, 5 hidden) synaptic weights
    w_out:    hidden-to-output weights
    theta:    spiking thresholds
    alpha_v/tau_v: membrane input scale / decay per step
    alpha_t/tau_t: trace increment / decay per step
    """
    w_hidden: np.ndarray
    w_out: np.ndarray
    theta: np.ndarray
    alpha_v: np.ndarray
    tau_v: np.ndarray
    alpha_t: np.ndarray
    tau_t: np.ndarray

    KIND: ClassVar[str] = "snn"
    BLOCKS: ClassVar[Tuple[ParameterBlock, ...]] = (
        ParameterBlock("w_hidden", (10, 5), ParameterKind.WEIGHT),
        ParameterBlock("w_out", (5,), ParameterKind.WEIGHT),
        ParameterBlock("theta", (5,), ParameterKind.THRESHOLD),
        ParameterBlock("alpha_v", (5,), ParameterKind.SCALE),
        ParameterBlock("tau_v", (5,), ParameterKind.DECAY),
        ParameterBlock("alpha_t", (5,), ParameterKind.SCALE),
        ParameterBlock("tau_t", (5,), ParameterKind.DECAY),
    )


GENOME_TYPES: Dict[str, Type[GenomeMixin]] = {
    AnnGenome.KIND: AnnGenome,
    SnnGenome.KIND: SnnGenome,
}


def genome_type(kind: str) -> Type[GenomeMixin]:
    """Genome class for 'ann' or 'snn'."""
    try:
        return GENOME_TYPES[kind]
    except KeyError:
        raise GenomeShapeError(f"Unknown genome kind '{kind}'", details={"kind": kind}) from None

