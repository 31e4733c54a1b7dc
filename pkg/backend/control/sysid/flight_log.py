"""
FLIGHT LOG
==========
Logged (time, command, altitude) samples used for system identification.

CSV format: header `t,u,h`, one row per sample, `#` comment lines allowed.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from app.core.exceptions import ArtifactNotFoundError, FlightLogError

logger = logging.getLogger(__name__)

COLUMNS = ("t", "u", "h")

# Max deviation of any sample interval from the median interval
SPACING_TOLERANCE = 0.10


@dataclass(frozen=True, eq=False)
class FlightLog:
    """
    Uniformly sampled flight record.

    t: time (s), strictly increasing
    u: motor command (V)
    h: altitude (m)
    """
    t: np.ndarray
    u: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in COLUMNS:
            values = np.array(getattr(self, name), dtype=float).reshape(-1)
            values.setflags(write=False)
            arrays[name] = values
            object.__setattr__(self, name, values)

        lengths = {name: a.size for name, a in arrays.items()}
        if len(set(lengths.values())) != 1:
            raise FlightLogError("Flight log columns differ in length", details=lengths)
        if self.t.size < 2:
            raise FlightLogError("Flight log needs at least two samples", details={"samples": int(self.t.size)})
        if not all(np.isfinite(a).all() for a in arrays.values()):
            raise FlightLogError("Flight log contains non-finite values")

        intervals = np.diff(self.t)
        if np.any(intervals <= 0):
            bad = int(np.argmax(intervals <= 0)) + 1
            raise FlightLogError("Time stamps must be strictly increasing", details={"row": bad})
        median = float(np.median(intervals))
        deviation = float(np.max(np.abs(intervals - median)))
        if deviation >= SPACING_TOLERANCE * median:
            raise FlightLogError(
                "Sampling is not uniform",
                details={"median_dt": median, "max_deviation": deviation}
            )

    @property
    def dt(self) -> float:
        """Sample period inferred from the time stamps."""
        return float(np.median(np.diff(self.t)))

    def __len__(self) -> int:
        return int(self.t.size)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.t, "u": self.u, "h": self.h})


def read_flight_log(path: Union[str, Path]) -> FlightLog:
    """
    Load a flight log CSV.

    Raises:
        ArtifactNotFoundError: file does not exist
        FlightLogError: missing columns, unparsable or invalid samples
    """
    path = Path(path)
    if not path.is_file():
        raise ArtifactNotFoundError("flight log", path)

    try:
        frame = pd.read_csv(path, comment="#", skipinitialspace=True, float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise FlightLogError(f"Cannot parse flight log: {e}", details={"path": str(path)}) from e

    missing = [c for c in COLUMNS if c not in frame.columns]
    if missing:
        raise FlightLogError(f"Flight log is missing columns {missing}", details={"path": str(path)})

    try:
        values = {c: pd.to_numeric(frame[c]).to_numpy(dtype=float) for c in COLUMNS}
    except ValueError as e:
        raise FlightLogError(f"Non-numeric flight log entry: {e}", details={"path": str(path)}) from e

    log = FlightLog(**values)
    logger.info(f"Loaded flight log {path} ({len(log)} samples, dt={log.dt:.4f} s)")
    return log


def write_flight_log(log: FlightLog, path: Union[str, Path]) -> Path:
    """Write a flight log CSV (shortest round-trip float text)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    log.to_frame().to_csv(path, index=False)
    logger.info(f"Wrote flight log {path} ({len(log)} samples)")
    return path
