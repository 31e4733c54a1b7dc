"""System identification of the altitude model from flight logs."""

from .flight_log import FlightLog, read_flight_log, write_flight_log
from .identifier import FitReport, fit_model, free_run, least_squares_fit, nrmsae, simplex_refine, validate_model
from .synthetic import generate_flight_log, held_commands

__all__ = [
    "FitReport",
    "FlightLog",
    "fit_model",
    "free_run",
    "generate_flight_log",
    "held_commands",
    "least_squares_fit",
    "nrmsae",
    "read_flight_log",
    "simplex_refine",
    "validate_model",
    "write_flight_log",
]
