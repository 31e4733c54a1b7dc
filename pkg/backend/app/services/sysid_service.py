"""
System Identification Service
=============================
Fits the plant model to a flight log and writes the fit report, and
generates synthetic flight logs for testing the identification.
"""

import logging
from pathlib import Path
from typing import Optional, Tuple, Union

import pandas as pd

from control.plant import PlantModel
from control.sysid import FitReport, FlightLog, fit_model, generate_flight_log, read_flight_log, write_flight_log

from ..core.rng import Stream, derive_rng
from ..schemas.report import FitReportDocument

logger = logging.getLogger(__name__)


def fit_flight_log(log_path: Union[str, Path], output_dir: Union[str, Path]) -> Tuple[FitReport, Path]:
    """
    Identify the plant from a flight log CSV.

    Writes fit_report.json and residuals.csv (t,h_obs,h_pred,residual) to
    output_dir; altitude columns are mean centered.

    Returns:
        (FitReport, path of fit_report.json)
    """
    log = read_flight_log(log_path)
    report = fit_model(log)
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    residual_csv = output_dir / "residuals.csv"
    pd.DataFrame({
        "t": log.t,
        "h_obs": report.observed,
        "h_pred": report.predicted,
        "residual": report.residuals,
    }).to_csv(residual_csv, index=False)

    model = report.model
    document = FitReportDocument(
        a1=model.a1,
        a2=model.a2,
        d1=model.d1,
        d2=model.d2,
        dt=model.dt,
        nrmsae=report.nrmsae,
        rmsae=report.rmsae,
        stage=report.stage,
        stage1_nrmsae=report.stage1_nrmsae,
        stage2_nrmsae=report.stage2_nrmsae,
        samples=len(log),
        mean_altitude=float(log.h.mean()),
        residual_csv=residual_csv.name,
    )
    path = document.save(output_dir / "fit_report.json")
    logger.info(
        f"Fitted plant from {log_path}: a=({model.a1:.6g}, {model.a2:.6g}) d=({model.d1:.6g}, {model.d2:.6g}) "
        f"nrmsae={report.nrmsae:.4g} via {report.stage}"
    )
    return report, path


def generate_log_file(
    model: PlantModel,
    output_path: Union[str, Path],
    seed: int,
    duration_s: float = 300.0,
    noise_sigma: float = 0.0,
    u_max: Optional[float] = None
) -> FlightLog:
    """Write a synthetic flight log drawn from the seed's flight-log stream."""
    rng = derive_rng(seed, Stream.FLIGHT_LOG)
    kwargs = {} if u_max is None else {"u_max": u_max}
    log = generate_flight_log(model, duration_s, rng, noise_sigma=noise_sigma, **kwargs)
    write_flight_log(log, output_path)
    return log
