"""Blimp plant and radar sensor models."""

from .blimp_model import BlimpPlant, PlantModel, PlantState, simulate, step_plant
from .radar import MeasurementFilter, RadarModel, filter_measurement, quantize, sense

__all__ = [
    "BlimpPlant",
    "MeasurementFilter",
    "PlantModel",
    "PlantState",
    "RadarModel",
    "filter_measurement",
    "quantize",
    "sense",
    "simulate",
    "step_plant",
]
