"""
Evaluation Service
==================
Waypoint-plan evaluation of a controller and the PID / ANN / SNN comparison.

Files written per evaluated controller <name>:
- <name>_trajectory.csv  t,h_ref,h_true,h_meas,u_total,u_net,u_pd
- <name>_display.csv     trajectory plus u_smooth (display only)
- <name>_report.json     summary metrics
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Tuple, Union

import numpy as np
import pandas as pd

from control.controllers import AltitudeController
from control.pipeline import (
    ClosedLoopTrace,
    Plant,
    WaypointPlan,
    control_effort_ratio,
    moving_average,
    pd_fraction,
    run_closed_loop,
)
from control.plant import BlimpPlant, MeasurementFilter, PlantModel, RadarModel

from ..core.exceptions import ArtifactNotFoundError, PlanMismatchError, ZeroDenominatorError
from ..core.rng import Stream, derive_rng
from ..schemas.report import ComparisonRow, EvalReportDocument, PlanDocument, PlantDocument

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ("t", "h_ref", "h_true", "h_meas", "u_total", "u_net", "u_pd")

# Fixed row order of the comparison table; PID is the effort reference
COMPARISON_ORDER = ("pid", "ann", "snn")


@dataclass
class EvalReport:
    """One controller tracked through a waypoint plan."""
    controller: str
    plan: WaypointPlan
    plant: PlantModel
    seed: int
    trace: ClosedLoopTrace

    @property
    def rmsae(self) -> float:
        return self.trace.rmsae()

    @property
    def effort(self) -> float:
        """Sum of |u_total| (V)."""
        return float(np.abs(self.trace.u_total).sum())

    @property
    def pd_fraction(self) -> Optional[float]:
        """PD share of the command in percent; None when the command is zero throughout."""
        try:
            return pd_fraction(self.trace.u_net, self.trace.u_pd)
        except ZeroDenominatorError:
            return None

    @property
    def failed_step(self) -> Optional[int]:
        return self.trace.failed_step

    def trajectory_frame(self) -> pd.DataFrame:
        return pd.DataFrame({name: getattr(self.trace, name) for name in TRAJECTORY_COLUMNS})

    def display_frame(self, window: int) -> pd.DataFrame:
        """Trajectory plus the moving-average command used for plots."""
        frame = self.trajectory_frame()
        frame["u_smooth"] = moving_average(self.trace.u_total, window)
        return frame

    def to_document(self, trajectory_csv: str) -> EvalReportDocument:
        return EvalReportDocument(
            controller=self.controller,
            seed=self.seed,
            plan=PlanDocument.from_plan(self.plan),
            plant=PlantDocument.from_model(self.plant),
            rmsae=self.rmsae,
            effort=self.effort,
            pd_fraction=self.pd_fraction,
            failed_step=self.failed_step,
            n_steps=self.trace.n_steps,
            trajectory_csv=trajectory_csv,
        )


def run_waypoint_eval(
    controller: AltitudeController,
    plant: Union[PlantModel, Plant],
    radar: RadarModel,
    plan: WaypointPlan = WaypointPlan(),
    seed: int = 0,
    name: Optional[str] = None,
    sensor_filter: Optional[MeasurementFilter] = None
) -> EvalReport:
    """
    Track a waypoint plan with sensor noise.

    Args:
        controller: Controller under test (reset before the run)
        plant: PlantModel, or any object implementing the Plant protocol
        radar: Sensor model
        plan: Waypoints, holds, dt and start altitude
        seed: Run seed; noise comes from its waypoint-evaluation stream
        name: Controller label, default controller.name
        sensor_filter: Optional measurement filter override

    Returns:
        EvalReport; a diverged run has failed_step set and rmsae = inf
    """
    if isinstance(plant, PlantModel):
        model, loop_plant = plant, BlimpPlant(plant)
    else:
        model, loop_plant = getattr(plant, "model", PlantModel()), plant
    label = name or controller.name

    trace = run_closed_loop(
        controller,
        loop_plant,
        radar,
        plan.reference(),
        derive_rng(seed, Stream.WAYPOINT_EVAL),
        dt=plan.dt,
        h0=plan.h0,
        sensor_filter=sensor_filter,
    )
    report = EvalReport(controller=label, plan=plan, plant=model, seed=seed, trace=trace)

    if trace.failed:
        logger.warning(f"Waypoint run of '{label}' diverged at step {trace.failed_step}", extra={"controller": label})
    else:
        logger.info(f"Waypoint run of '{label}': rmsae={report.rmsae:.4f} m, effort={report.effort:.1f} V", extra={"controller": label})
    return report


def save_report(report: EvalReport, output_dir: Union[str, Path], smoothing_window: int = 1) -> Path:
    """
    Write trajectory CSV, display CSV and report JSON.

    Returns:
        Path of the report JSON
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    stem = report.controller

    trajectory_csv = output_dir / f"{stem}_trajectory.csv"
    report.trajectory_frame().to_csv(trajectory_csv, index=False)
    report.display_frame(smoothing_window).to_csv(output_dir / f"{stem}_display.csv", index=False)

    path = report.to_document(trajectory_csv.name).save(output_dir / f"{stem}_report.json")
    logger.info(f"Saved evaluation report {path}")
    return path


def read_trajectory(path: Union[str, Path]) -> pd.DataFrame:
    path = Path(path)
    if not path.is_file():
        raise ArtifactNotFoundError("trajectory", path)
    return pd.read_csv(path, float_precision="round_trip")


def load_report(path: Union[str, Path]) -> EvalReport:
    """Rebuild an EvalReport from its JSON and trajectory CSV."""
    path = Path(path)
    doc = EvalReportDocument.load(path)
    frame = read_trajectory(path.parent / doc.trajectory_csv)
    trace = ClosedLoopTrace(
        **{name: frame[name].to_numpy(dtype=float) for name in TRAJECTORY_COLUMNS},
        failed_step=doc.failed_step,
    )
    return EvalReport(
        controller=doc.controller,
        plan=doc.plan.to_plan(),
        plant=doc.plant.to_model(),
        seed=doc.seed,
        trace=trace,
    )


def compare_controllers(reports: Mapping[str, EvalReport]) -> pd.DataFrame:
    """
    Comparison table with rows in the fixed order PID, ANN, SNN.

    Args:
        reports: Reports keyed by 'pid', 'ann', 'snn' (pid required)

    Returns:
        DataFrame with columns controller, rmsae, effort_ratio, pd_fraction

    Raises:
        PlanMismatchError: reports differ in plan or plant, or pid missing
    """
    reports = {key.lower(): report for key, report in reports.items()}
    unknown = set(reports) - set(COMPARISON_ORDER)
    if unknown or "pid" not in reports:
        raise PlanMismatchError(
            f"Comparison needs a 'pid' report plus optional 'ann'/'snn', got {sorted(reports)}",
            details={"reports": sorted(reports)}
        )

    reference = reports["pid"]
    for key, report in reports.items():
        if report.plan != reference.plan or report.plant != reference.plant:
            raise PlanMismatchError(
                f"Report '{key}' was produced on a different plan or plant than 'pid'",
                details={"report": key}
            )

    rows = [
        ComparisonRow(
            controller=key.upper(),
            rmsae=reports[key].rmsae,
            effort_ratio=control_effort_ratio(reports[key].trace.u_total, reference.trace.u_total),
            pd_fraction=reports[key].pd_fraction,
        ).model_dump()
        for key in COMPARISON_ORDER
        if key in reports
    ]
    return pd.DataFrame(rows, columns=list(ComparisonRow.model_fields))


def format_comparison(table: pd.DataFrame) -> str:
    """Aligned text table."""
    return table.to_string(
        index=False,
        na_rep="-",
        formatters={
            "rmsae": "{:.4f}".format,
            "effort_ratio": "{:.1f}".format,
            "pd_fraction": lambda v: "-" if pd.isna(v) else f"{v:.1f}",
        },
    )


def write_comparison(table: pd.DataFrame, output_dir: Union[str, Path]) -> Tuple[Path, Path]:
    """Write comparison.csv and comparison.txt; returns both paths."""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    csv_path = output_dir / "comparison.csv"
    txt_path = output_dir / "comparison.txt"
    table.to_csv(csv_path, index=False)
    txt_path.write_text(format_comparison(table) + "\n", encoding="utf-8")
    return csv_path, txt_path
