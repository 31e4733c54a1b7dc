"""
CLOSED-LOOP SIMULATION
======================
Single entry point for running a controller against the plant:

    h_true -> sense -> filter -> e = h_ref - h_meas -> controller -> plant

Row k of the trace holds the reference, true altitude and measurement at
step k and the command issued at step k (which acts from step k+1).

Used by both fitness evaluation and the waypoint harness.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence

import numpy as np

from app.core.exceptions import StateCorruptionError

from ..controllers.base import AltitudeController, reset
from ..plant.radar import MeasurementFilter, RadarModel, sense
from .metrics import rmsae

logger = logging.getLogger(__name__)


class Plant(Protocol):
    """Anything that can be reset to an altitude and stepped with a command."""

    def reset(self, h0: float = 0.0) -> float: ...

    def step(self, u: float) -> float: ...


@dataclass
class ClosedLoopTrace:
    """Per-step log of one closed-loop run."""
    t: np.ndarray
    h_ref: np.ndarray
    h_true: np.ndarray
    h_meas: np.ndarray
    u_total: np.ndarray
    u_net: np.ndarray
    u_pd: np.ndarray
    failed_step: Optional[int] = None

    @property
    def failed(self) -> bool:
        return self.failed_step is not None

    @property
    def n_steps(self) -> int:
        return int(self.t.size)

    def rmsae(self) -> float:
        """Tracking error on true altitude; +inf for a failed run."""
        if self.failed or self.n_steps == 0:
            return math.inf
        return rmsae(self.h_ref, self.h_true)


def run_closed_loop(
    controller: AltitudeController,
    plant: Plant,
    radar: RadarModel,
    reference: Sequence[float],
    rng: np.random.Generator,
    dt: float,
    h0: float = 0.0,
    sensor_filter: Optional[MeasurementFilter] = None
) -> ClosedLoopTrace:
    """
    Simulate the loop over a per-step reference profile.

    Controller, plant and filter are reset first; their state persists
    across setpoint changes inside the reference.

    Args:
        controller: Altitude controller
        plant: Plant to drive
        radar: Sensor model
        reference: Setpoint for every step (m)
        rng: Noise stream (one draw per step)
        dt: Sample period (s)
        h0: Initial altitude (m)
        sensor_filter: Median/average filter, default built from radar

    Returns:
        ClosedLoopTrace; on a non-finite state the trace is truncated and
        failed_step records the step index
    """
    h_ref = np.asarray(reference, dtype=float)
    n = h_ref.size
    h_true = np.empty(n)
    h_meas = np.empty(n)
    u_total = np.empty(n)
    u_net = np.empty(n)
    u_pd = np.empty(n)

    sensor_filter = sensor_filter or MeasurementFilter(radar)
    sensor_filter.reset()
    controller = reset(controller)
    h = plant.reset(h0)

    failed_step = None
    for k in range(n):
        try:
            if not math.isfinite(h):
                raise StateCorruptionError("Non-finite altitude", details={"step": k})
            measured = sensor_filter.update(sense(radar, h, rng))
            output = controller.step(h_ref[k] - measured)
            h_true[k], h_meas[k] = h, measured
            u_total[k], u_net[k], u_pd[k] = output.u_total, output.u_net, output.u_pd
            h = plant.step(output.u_total)
        except StateCorruptionError as exc:
            logger.debug(f"Closed loop failed at step {k}: {exc.message}")
            failed_step = k
            break

    m = n if failed_step is None else failed_step
    return ClosedLoopTrace(
        t=np.arange(m) * dt,
        h_ref=h_ref[:m].copy(),
        h_true=h_true[:m],
        h_meas=h_meas[:m],
        u_total=u_total[:m],
        u_net=u_net[:m],
        u_pd=u_pd[:m],
        failed_step=failed_step,
    )


def hold_profile(setpoints: Sequence[float], hold_s: Sequence[float], dt: float) -> np.ndarray:
    """
    Per-step reference from held setpoints.

    Args:
        setpoints: Altitudes (m)
        hold_s: Hold duration of each setpoint (s)
        dt: Sample period (s)

    Returns:
        Reference array with round(hold / dt) samples per setpoint
    """
    counts = [int(round(hold / dt)) for hold in hold_s]
    return np.repeat(np.asarray(setpoints, dtype=float), counts)
