"""
Report Schemas
==============
Waypoint evaluation reports, controller comparison rows and system
identification reports.
"""

from typing import ClassVar, Optional, Tuple

from pydantic import Field

from control.pipeline import WaypointPlan
from control.plant import PlantModel

from .base import Document, Record


class PlanDocument(Record):
    setpoints: Tuple[float, ...]
    holds_s: Tuple[float, ...]
    dt: float = Field(gt=0)
    h0: float = 0.0

    @classmethod
    def from_plan(cls, plan: WaypointPlan) -> "PlanDocument":
        return cls(setpoints=plan.setpoints, holds_s=plan.holds_s, dt=plan.dt, h0=plan.h0)

    def to_plan(self) -> WaypointPlan:
        return WaypointPlan(setpoints=self.setpoints, holds_s=self.holds_s, dt=self.dt, h0=self.h0)


class PlantDocument(Record):
    num: Tuple[float, float]
    den: Tuple[float, float]
    dt: float = Field(gt=0)

    @classmethod
    def from_model(cls, model: PlantModel) -> "PlantDocument":
        return cls(num=model.num, den=model.den, dt=model.dt)

    def to_model(self) -> PlantModel:
        return PlantModel(num=self.num, den=self.den, dt=self.dt)


class EvalReportDocument(Document):
    """
    Summary of one waypoint run; the per-step trajectory lives in the CSV
    named by trajectory_csv (relative to this file).
    """
    controller: str
    seed: int
    plan: PlanDocument
    plant: PlantDocument
    rmsae: float
    effort: float = Field(ge=0, description="Sum of |u_total| over the run (V)")
    pd_fraction: Optional[float] = None
    failed_step: Optional[int] = None
    n_steps: int = Field(ge=0)
    trajectory_csv: str

    ARTIFACT: ClassVar[str] = "evaluation report"


class ComparisonRow(Record):
    """One controller in the comparison table (PID effort = 100%)."""
    controller: str
    rmsae: float
    effort_ratio: float
    pd_fraction: Optional[float] = None


class FitReportDocument(Document):
    """Identified model and its free-run errors."""
    a1: float
    a2: float
    d1: float
    d2: float
    dt: float = Field(gt=0)
    nrmsae: float = Field(ge=0)
    rmsae: float = Field(ge=0)
    stage: str
    stage1_nrmsae: float
    stage2_nrmsae: float
    samples: int
    mean_altitude: float
    residual_csv: str

    ARTIFACT: ClassVar[str] = "fit report"
