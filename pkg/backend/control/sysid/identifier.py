"""
PLANT IDENTIFICATION
====================
Fits (a1, a2, d1, d2) of the second-order altitude model to a flight log.

Stages:
1. Equation-error least squares on the ARX regression
       h_k = -d1 h_{k-1} - d2 h_{k-2} + a1 u_{k-1} + a2 u_{k-2}
2. Nelder-Mead refinement of the free-run (simulation) NRMSAE, started
   from the stage-1 estimate

The better of the two by free-run NRMSAE is returned. Altitude is mean
centered before fitting; commands are used as logged.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy import optimize

from app.core.exceptions import DegenerateDataError, FlightLogError, UndefinedNormalizationError

from ..pipeline.metrics import rmsae
from ..plant.blimp_model import PlantModel, PlantState, simulate
from .flight_log import FlightLog

logger = logging.getLogger(__name__)

MIN_SAMPLES = 50
N_PARAMS = 4

# Objective value for diverged or non-finite simulations
DIVERGED_OBJECTIVE = 1e6


def nrmsae(pred: Sequence[float], obs: Sequence[float]) -> float:
    """
    Normalized RMS altitude error, sqrt(sum (obs - pred)^2 / sum obs^2).

    Raises:
        UndefinedNormalizationError: obs is all zeros
    """
    pred = np.asarray(pred, dtype=float)
    obs = np.asarray(obs, dtype=float)
    if pred.shape != obs.shape or obs.size == 0:
        raise ValueError(f"NRMSAE needs equal non-empty series, got {pred.shape} and {obs.shape}")
    energy = float(np.sum(obs ** 2))
    if energy == 0:
        raise UndefinedNormalizationError()
    return math.sqrt(float(np.sum((obs - pred) ** 2)) / energy)


def free_run(model: PlantModel, u: Sequence[float], h: Sequence[float]) -> np.ndarray:
    """
    Simulate the model under the logged commands, starting at rest at the
    first logged altitude (no motion, no earlier command).

    Starting at rest keeps measurement noise on the first samples from
    turning into a velocity error that the double integrator would carry
    through the whole run.

    Returns:
        Predicted altitude, same length as h; pred[0] = h[0]
    """
    u = np.asarray(u, dtype=float)
    h = np.asarray(h, dtype=float)
    pred = np.empty_like(h)
    pred[0] = h[0]
    with np.errstate(over="ignore", invalid="ignore"):
        pred[1:] = simulate(model, u[:-1], PlantState.at_rest(h[0]))
    return pred


@dataclass(frozen=True, eq=False)
class FitReport:
    """
    Identification result.

    nrmsae/rmsae are free-run errors on the mean-centered altitude of the
    fitting log. stage tells which estimate was kept.
    """
    model: PlantModel
    nrmsae: float
    rmsae: float
    residuals: np.ndarray
    predicted: np.ndarray
    observed: np.ndarray
    stage: str
    stage1_nrmsae: float
    stage2_nrmsae: float


def least_squares_fit(u: np.ndarray, h: np.ndarray) -> np.ndarray:
    """
    Stage 1: equation-error estimate.

    Returns:
        theta = (a1, a2, d1, d2)

    Raises:
        DegenerateDataError: regression matrix is rank deficient
    """
    phi = np.column_stack([h[1:-1], h[:-2], u[1:-1], u[:-2]])
    target = h[2:]
    coeffs, _, rank, _ = scipy.linalg.lstsq(phi, target)
    if rank < N_PARAMS:
        raise DegenerateDataError(rank=int(rank), expected=N_PARAMS)
    neg_d1, neg_d2, a1, a2 = coeffs
    return np.array([a1, a2, -neg_d1, -neg_d2])


def _simulation_objective(theta: np.ndarray, u: np.ndarray, h: np.ndarray, dt: float) -> float:
    try:
        model = PlantModel.from_vector(theta, dt=dt)
    except ValueError:
        return DIVERGED_OBJECTIVE
    pred = free_run(model, u, h)
    if not np.all(np.isfinite(pred)):
        return DIVERGED_OBJECTIVE
    value = nrmsae(pred, h)
    return value if math.isfinite(value) else DIVERGED_OBJECTIVE


def simplex_refine(
    theta0: np.ndarray,
    u: np.ndarray,
    h: np.ndarray,
    dt: float,
    step: float = 1e-2,
    max_evaluations: int = 4000
) -> np.ndarray:
    """
    Stage 2: Nelder-Mead on the free-run NRMSAE.

    Searches relative deviations x with theta = theta0 + scale * x, where
    scale is |theta0| (1 for zero entries), so all four coefficients move
    on comparable scales despite differing by three orders of magnitude.

    Returns:
        Best theta found (never worse than theta0)
    """
    scale = np.where(np.abs(theta0) > 0, np.abs(theta0), 1.0)
    simplex = np.vstack([np.zeros(N_PARAMS), step * np.eye(N_PARAMS)])

    def objective(x: np.ndarray) -> float:
        return _simulation_objective(theta0 + scale * x, u, h, dt)

    result = optimize.minimize(
        objective,
        np.zeros(N_PARAMS),
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": 1e-10,
            "fatol": 1e-12,
            "maxfev": max_evaluations,
        },
    )
    logger.debug(f"Simplex refinement: {result.nfev} evaluations, objective={result.fun:.6g}, {result.message}")
    theta = theta0 + scale * result.x
    if result.fun > objective(np.zeros(N_PARAMS)):
        return theta0
    return theta


def fit_model(log: FlightLog, simplex_step: float = 1e-2, max_evaluations: int = 4000) -> FitReport:
    """
    Identify plant coefficients from a flight log.

    Args:
        log: At least MIN_SAMPLES uniformly sampled rows
        simplex_step: Initial simplex size, relative to each coefficient
        max_evaluations: Budget for the simplex refinement

    Returns:
        FitReport of the better stage

    Raises:
        FlightLogError: log too short
        DegenerateDataError: no excitation in the data
        UndefinedNormalizationError: centered altitude is identically zero
    """
    if len(log) < MIN_SAMPLES:
        raise FlightLogError(
            f"Need at least {MIN_SAMPLES} samples to fit, got {len(log)}",
            details={"samples": len(log)}
        )
    dt = log.dt
    u = np.asarray(log.u)
    h = log.h - log.h.mean()

    theta1 = least_squares_fit(u, h)
    stage1 = _simulation_objective(theta1, u, h, dt)
    logger.info(f"Stage 1 (least squares): theta={theta1.tolist()} nrmsae={stage1:.6g}")

    theta2 = simplex_refine(theta1, u, h, dt, step=simplex_step, max_evaluations=max_evaluations)
    stage2 = _simulation_objective(theta2, u, h, dt)
    logger.info(f"Stage 2 (simplex): theta={theta2.tolist()} nrmsae={stage2:.6g}")

    if stage2 < stage1:
        stage, theta = "simplex", theta2
    else:
        stage, theta = "least_squares", theta1

    model = PlantModel.from_vector(theta, dt=dt)
    predicted = free_run(model, u, h)
    return FitReport(
        model=model,
        nrmsae=min(stage1, stage2),
        rmsae=rmsae(h, predicted),
        residuals=h - predicted,
        predicted=predicted,
        observed=h,
        stage=stage,
        stage1_nrmsae=stage1,
        stage2_nrmsae=stage2,
    )


def validate_model(model: PlantModel, log: FlightLog) -> float:
    """
    Free-run RMSAE of a model against a flight log (raw altitude, no
    centering), started at rest at the first logged altitude.
    """
    if len(log) < 3:
        raise FlightLogError("Validation needs at least three samples", details={"samples": len(log)})
    predicted = free_run(model, log.u, log.h)
    return rmsae(log.h, predicted)
