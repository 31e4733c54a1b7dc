"""
Evaluation metrics: tracking error, relative control effort, PD share.
"""

from typing import Sequence

import numpy as np

from app.core.exceptions import ZeroDenominatorError


def rmsae(h_ref: Sequence[float], h: Sequence[float]) -> float:
    """Root mean squared altitude error over all samples."""
    h_ref = np.asarray(h_ref, dtype=float)
    h = np.asarray(h, dtype=float)
    if h_ref.shape != h.shape or h_ref.size == 0:
        raise ValueError(f"RMSAE needs equal non-empty series, got {h_ref.shape} and {h.shape}")
    return float(np.sqrt(np.mean((h_ref - h) ** 2)))


def control_effort_ratio(u_test: Sequence[float], u_ref: Sequence[float]) -> float:
    """
    Relative control effort in percent: 100 * sum|u_test| / sum|u_ref|.

    Raises:
        ZeroDenominatorError: reference effort is zero
    """
    u_test = np.asarray(u_test, dtype=float)
    u_ref = np.asarray(u_ref, dtype=float)
    if u_test.size == 0 or u_ref.size == 0:
        raise ValueError("Control effort needs non-empty series")
    denominator = np.abs(u_ref).sum()
    if denominator == 0:
        raise ZeroDenominatorError("control effort ratio")
    return float(100.0 * np.abs(u_test).sum() / denominator)


def pd_fraction(u_net: Sequence[float], u_pd: Sequence[float]) -> float:
    """
    Share of the parallel PD in the command magnitude, percent:
    100 * sum|u_pd| / sum|u_net + u_pd|.

    Raises:
        ZeroDenominatorError: total command is zero everywhere
    """
    u_net = np.asarray(u_net, dtype=float)
    u_pd = np.asarray(u_pd, dtype=float)
    denominator = np.abs(u_net + u_pd).sum()
    if denominator == 0:
        raise ZeroDenominatorError("PD fraction")
    return float(100.0 * np.abs(u_pd).sum() / denominator)


def moving_average(series: Sequence[float], window: int) -> np.ndarray:
    """Causal moving average for display; partial windows at the start."""
    x = np.asarray(series, dtype=float)
    if window <= 1 or x.size == 0:
        return x.copy()
    csum = np.cumsum(np.insert(x, 0, 0.0))
    idx = np.arange(1, x.size + 1)
    start = np.maximum(idx - window, 0)
    return (csum[idx] - csum[start]) / (idx - start)
