"""
RADAR SENSOR MODEL
==================
Abstract altitude radar: additive Gaussian noise, quantization to the sensor
resolution, then the onboard median + moving-average smoothing.

Rounding convention: half away from zero (ties are reachable at exact
half-steps).
"""

import logging
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

# 3 sigma ~ the +/-0.2 m radar resolution
DEFAULT_NOISE_SIGMA = 0.0667


@dataclass(frozen=True)
class RadarModel:
    """
    noise_sigma:   std of additive Gaussian noise (m)
    quantization:  resolution step (m), 0 disables
    median_window: odd window length (samples)
    avg_window:    moving-average window length (samples)
    """
    noise_sigma: float = DEFAULT_NOISE_SIGMA
    quantization: float = 0.0
    median_window: int = 1
    avg_window: int = 1

    def __post_init__(self):
        if not self.noise_sigma >= 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if not self.quantization >= 0:
            raise ValueError(f"quantization must be >= 0, got {self.quantization}")
        if self.median_window < 1 or self.median_window % 2 == 0:
            raise ValueError(f"median_window must be odd and >= 1, got {self.median_window}")
        if self.avg_window < 1:
            raise ValueError(f"avg_window must be >= 1, got {self.avg_window}")

    @classmethod
    def ideal(cls) -> "RadarModel":
        """Noise-free, unquantized, unfiltered sensor."""
        return cls(noise_sigma=0.0)


def quantize(value: float, step: float) -> float:
    """
    Round to the nearest multiple of step, ties away from zero.

    Args:
        value: Raw value
        step: Resolution; 0 returns value unchanged

    Returns:
        Quantized value
    """
    if step == 0:
        return float(value)
    n = math.floor(abs(value) / step + 0.5)
    return math.copysign(n * step, value) if n else 0.0


def sense(radar: RadarModel, true_h: float, rng: np.random.Generator) -> float:
    """
    Noisy, quantized altitude reading.
    Always consumes exactly one standard normal draw from rng.
    """
    noise = radar.noise_sigma * rng.standard_normal()
    return quantize(true_h + noise, radar.quantization)


class MeasurementFilter:
    """
    Median filter followed by a moving average over the median outputs.
    During warm-up both windows work on the samples seen so far.
    """

    def __init__(self, radar: RadarModel):
        self.median_window = radar.median_window
        self.avg_window = radar.avg_window
        self.raw = deque(maxlen=self.median_window)
        self.medians = deque(maxlen=self.avg_window)

    @property
    def is_identity(self) -> bool:
        return self.median_window == 1 and self.avg_window == 1

    def update(self, raw: float) -> float:
        """
        Push one raw sample.

        Args:
            raw: Sensor reading (m)

        Returns:
            Filtered altitude (m)
        """
        if self.is_identity:
            return float(raw)
        self.raw.append(float(raw))
        self.medians.append(float(np.median(self.raw)))
        return float(np.mean(self.medians))

    def reset(self):
        """Clear both windows."""
        self.raw.clear()
        self.medians.clear()


def filter_measurement(radar: RadarModel, window_state: MeasurementFilter, raw: float) -> float:
    """Median then moving average of the latest raw sample; window_state is updated in place."""
    if window_state.median_window != radar.median_window or window_state.avg_window != radar.avg_window:
        raise ValueError("Filter window state does not match the radar model")
    return window_state.update(raw)
