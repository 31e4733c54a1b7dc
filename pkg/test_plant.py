#!/usr/bin/env python3
"""
Plant and Radar Tests
=====================
Difference equation, whole-series simulation, radar noise / quantization
and the onboard median + moving-average filter.

Run: pytest test_plant.py
"""

import math

import numpy as np
import pytest

from app.core.exceptions import StateCorruptionError
from control.plant import BlimpPlant, MeasurementFilter, PlantModel, PlantState, RadarModel, quantize, sense, simulate
from control.plant.blimp_model import step_plant
from control.plant.radar import filter_measurement


def reference_altitudes(model: PlantModel, commands):
    """Straight transcription of the difference equation from rest at 0."""
    h1 = h2 = u1 = 0.0
    out = []
    for u in commands:
        h = -model.d1 * h1 - model.d2 * h2 + model.a1 * u + model.a2 * u1
        out.append(h)
        h1, h2, u1 = h, h1, u
    return np.array(out)


# ==================== DIFFERENCE EQUATION ====================

def test_step_response_first_samples(fitted_plant):
    state = PlantState()
    state, h1 = step_plant(fitted_plant, state, 1.0)
    state, h2 = step_plant(fitted_plant, state, 1.0)
    assert h1 == pytest.approx(-0.969e-3, rel=1e-12)
    assert h2 == pytest.approx(1.99 * -0.969e-3 + (-0.969e-3 + 1.019e-3), rel=1e-12)


def test_step_matches_reference_loop(fitted_plant, rng):
    commands = rng.uniform(-3.3, 3.3, size=1000)
    expected = reference_altitudes(fitted_plant, commands)

    plant = BlimpPlant(fitted_plant)
    plant.reset(0.0)
    stepped = np.array([plant.step(u) for u in commands])

    np.testing.assert_allclose(stepped, expected, rtol=1e-9, atol=1e-12)


def test_simulate_matches_step(fitted_plant, rng):
    commands = rng.uniform(-3.3, 3.3, size=1000)
    expected = reference_altitudes(fitted_plant, commands)
    np.testing.assert_allclose(simulate(fitted_plant, commands), expected, rtol=1e-9, atol=1e-12)


def test_simulate_from_nonzero_state(fitted_plant, rng):
    commands = rng.uniform(-3.3, 3.3, size=200)
    start = PlantState(h_prev1=1.2, h_prev2=1.1, u_prev1=0.5)

    state, stepped = start, []
    for u in commands:
        state, h = step_plant(fitted_plant, state, u)
        stepped.append(h)

    np.testing.assert_allclose(simulate(fitted_plant, commands, start), stepped, rtol=1e-9, atol=1e-12)


def test_responses_superpose(fitted_plant, rng):
    u = rng.uniform(-3.3, 3.3, size=500)
    v = rng.uniform(-3.3, 3.3, size=500)
    combined = simulate(fitted_plant, u + v)
    separate = simulate(fitted_plant, u) + simulate(fitted_plant, v)
    np.testing.assert_allclose(separate, combined, rtol=1e-12, atol=1e-12 * np.abs(combined).max())


def test_theoretical_plant_second_difference_is_constant():
    a1, a2, u = -0.969e-3, 1.019e-3, 2.0
    model = PlantModel.theoretical(a1, a2)
    state, h = PlantState(), [0.0]
    for _ in range(200):
        state, h_next = step_plant(model, state, u)
        h.append(h_next)
    h = np.array(h)
    second = h[2:] - 2.0 * h[1:-1] + h[:-2]
    np.testing.assert_allclose(second, (a1 + a2) * u, rtol=0.0, atol=1e-12)


def test_zero_input_keeps_zero_state(fitted_plant):
    state = PlantState()
    for _ in range(10):
        state, h = step_plant(fitted_plant, state, 0.0)
        assert h == 0.0
    assert state == PlantState()


def test_simulate_empty(fitted_plant):
    assert simulate(fitted_plant, []).size == 0


def test_rest_is_an_equilibrium():
    model = PlantModel.theoretical(-1e-3, 1e-3)
    plant = BlimpPlant(model)
    assert plant.reset(2.5) == 2.5
    for _ in range(50):
        assert plant.step(0.0) == pytest.approx(2.5, abs=1e-12)


def test_non_finite_command_raises(fitted_plant):
    with pytest.raises(StateCorruptionError):
        step_plant(fitted_plant, PlantState(), math.nan)


def test_non_finite_state_raises(fitted_plant):
    with pytest.raises(StateCorruptionError):
        step_plant(fitted_plant, PlantState(h_prev1=math.inf), 0.0)


def test_invalid_model_rejected():
    with pytest.raises(ValueError):
        PlantModel(num=(math.nan, 0.0))
    with pytest.raises(ValueError):
        PlantModel(dt=0.0)


def test_vector_round_trip_keeps_order(fitted_plant):
    theta = fitted_plant.as_vector()
    assert theta.tolist() == [fitted_plant.a1, fitted_plant.a2, fitted_plant.d1, fitted_plant.d2]
    assert PlantModel.from_vector(theta) == fitted_plant


# ==================== RADAR ====================

@pytest.mark.parametrize("value, step, expected", [
    (0.25, 0.5, 0.5),
    (-0.25, 0.5, -0.5),
    (0.24, 0.5, 0.0),
    (0.74, 0.5, 0.5),
    (1.3, 0.0, 1.3),
])
def test_quantize_half_away_from_zero(value, step, expected):
    assert quantize(value, step) == pytest.approx(expected)


def test_ideal_sense_is_exact(ideal_radar, rng):
    assert sense(ideal_radar, 1.234, rng) == 1.234


def test_sense_quantizes_to_resolution():
    radar = RadarModel(noise_sigma=0.0, quantization=0.2)
    assert sense(radar, 1.47, np.random.default_rng(0)) == pytest.approx(1.4, abs=1e-12)


def test_sense_consumes_one_draw_per_call(ideal_radar):
    a = np.random.default_rng(7)
    b = np.random.default_rng(7)
    for _ in range(5):
        sense(ideal_radar, 0.0, a)
        b.standard_normal()
    assert a.standard_normal() == b.standard_normal()


def test_sense_noise_statistics():
    radar = RadarModel(noise_sigma=0.0667)
    rng = np.random.default_rng(3)
    readings = np.array([sense(radar, 1.0, rng) for _ in range(100_000)])
    assert readings.mean() == pytest.approx(1.0, abs=2e-3)
    assert readings.std() == pytest.approx(0.0667, rel=0.01)


def test_sense_quantizes_after_noise():
    radar = RadarModel(noise_sigma=0.05, quantization=0.2)
    rng = np.random.default_rng(11)
    readings = np.array([sense(radar, 1.0, rng) for _ in range(1000)])
    np.testing.assert_allclose(readings / 0.2, np.round(readings / 0.2), atol=1e-9)


def test_radar_validation():
    with pytest.raises(ValueError):
        RadarModel(median_window=2)
    with pytest.raises(ValueError):
        RadarModel(noise_sigma=-0.1)
    with pytest.raises(ValueError):
        RadarModel(avg_window=0)


# ==================== MEASUREMENT FILTER ====================

def test_filter_warm_up_and_windows():
    radar = RadarModel(noise_sigma=0.0, median_window=3, avg_window=2)
    filt = MeasurementFilter(radar)
    out = [filt.update(x) for x in (1.0, 5.0, 2.0, 8.0)]
    # medians: 1, 3, 2, 5
    assert out == pytest.approx([1.0, 2.0, 2.5, 3.5])


def test_filter_rejects_outlier():
    radar = RadarModel(noise_sigma=0.0, median_window=3, avg_window=2)
    filt = MeasurementFilter(radar)
    out = [filt.update(x) for x in (1.0, 1.0, 9.0, 1.0)]
    assert out[-1] == 1.0
    assert max(out) == 1.0


def test_filter_preserves_constants():
    filt = MeasurementFilter(RadarModel(median_window=5, avg_window=4))
    assert all(filt.update(2.25) == pytest.approx(2.25) for _ in range(12))


def test_filter_reset_clears_history():
    radar = RadarModel(noise_sigma=0.0, median_window=3, avg_window=3)
    filt = MeasurementFilter(radar)
    for x in (4.0, 4.0, 4.0):
        filt.update(x)
    filt.reset()
    assert filt.update(1.0) == 1.0


def test_identity_filter_passes_through():
    filt = MeasurementFilter(RadarModel())
    assert filt.is_identity
    assert filt.update(0.37) == 0.37


def test_filter_measurement_checks_windows():
    radar = RadarModel(median_window=3)
    with pytest.raises(ValueError):
        filter_measurement(radar, MeasurementFilter(RadarModel()), 1.0)
    assert filter_measurement(radar, MeasurementFilter(radar), 1.0) == 1.0
