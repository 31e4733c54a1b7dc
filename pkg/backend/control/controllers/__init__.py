"""Altitude controllers: PID, feed-forward ANN, spiking SNN and the hybrid PD wrapper."""

from typing import Optional

from .ann import AnnController, ann_forward
from .base import AltitudeController, ControlLimits, ControlOutput, ZeroController, reset
from .genome import AnnGenome, GenomeMixin, ParameterKind, SnnGenome, genome_type
from .hybrid import HybridController, hybrid_step
from .pid import PidController, PidMode, PidParams, PidState, pid_step
from .snn import SnnController, SnnState, encode_error, snn_step


def build_network_controller(
    genome: GenomeMixin,
    limits: ControlLimits = ControlLimits(),
    pd: Optional[PidParams] = None
) -> AltitudeController:
    """
    Controller for an evolved genome, optionally with a parallel PD.

    Args:
        genome: AnnGenome or SnnGenome
        limits: Actuator bound
        pd: PD gains for the hybrid scheme, None for the bare network

    Returns:
        Ready-to-step controller with zeroed state
    """
    if isinstance(genome, SnnGenome):
        net = SnnController(genome, limits)
    elif isinstance(genome, AnnGenome):
        net = AnnController(genome, limits)
    else:
        raise TypeError(f"Unsupported genome type {type(genome).__name__}")
    return HybridController(net, pd, limits) if pd is not None else net


__all__ = [
    "AltitudeController",
    "AnnController",
    "AnnGenome",
    "ControlLimits",
    "ControlOutput",
    "GenomeMixin",
    "HybridController",
    "ParameterKind",
    "PidController",
    "PidMode",
    "PidParams",
    "PidState",
    "SnnController",
    "SnnGenome",
    "SnnState",
    "ZeroController",
    "ann_forward",
    "build_network_controller",
    "encode_error",
    "genome_type",
    "hybrid_step",
    "pid_step",
    "reset",
    "snn_step",
]
