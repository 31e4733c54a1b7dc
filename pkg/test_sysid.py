#!/usr/bin/env python3
"""
System Identification Tests
===========================
NRMSAE, two-stage plant fitting, free-run validation and flight-log CSV
handling.

Run: pytest test_sysid.py
"""

import math

import numpy as np
import pytest

from app.core.exceptions import (
    ArtifactNotFoundError,
    DegenerateDataError,
    FlightLogError,
    UndefinedNormalizationError,
)
from control.plant import PlantModel
from control.sysid import (
    FlightLog,
    fit_model,
    free_run,
    generate_flight_log,
    held_commands,
    least_squares_fit,
    nrmsae,
    read_flight_log,
    validate_model,
    write_flight_log,
)


def synthetic_log(seed: int = 0, duration_s: float = 300.0, noise_sigma: float = 0.0, model=None) -> FlightLog:
    return generate_flight_log(model or PlantModel.fitted(), duration_s, np.random.default_rng(seed), noise_sigma)


# ==================== NRMSAE ====================

def test_nrmsae_known_values():
    obs = np.array([1.0, -2.0, 0.5])
    assert nrmsae(obs, obs) == 0.0
    assert nrmsae(np.zeros(3), obs) == pytest.approx(1.0)
    assert nrmsae(2 * obs, obs) == pytest.approx(1.0)


def test_nrmsae_undefined_for_zero_observations():
    with pytest.raises(UndefinedNormalizationError):
        nrmsae(np.ones(4), np.zeros(4))


def test_nrmsae_shape_mismatch():
    with pytest.raises(ValueError):
        nrmsae(np.ones(3), np.ones(4))


# ==================== SYNTHETIC LOGS ====================

def test_held_commands_within_bounds(rng):
    u = held_commands(1500, 0.2, rng, u_max=3.3, hold_range=(1.0, 4.0))
    assert u.shape == (1500,)
    assert np.all(np.abs(u) <= 3.3)
    # levels are held for at least 5 samples (1 s at 5 Hz), except the final run
    changes = np.flatnonzero(np.diff(u)) + 1
    assert np.all(np.diff(changes) >= 5)


def test_generated_log_obeys_model():
    log = synthetic_log(duration_s=60.0)
    assert len(log) == 300
    assert log.dt == pytest.approx(0.2)
    np.testing.assert_array_equal(free_run(PlantModel.fitted(), log.u, log.h), log.h)


# ==================== FITTING ====================

def test_noiseless_fit_recovers_coefficients():
    report = fit_model(synthetic_log(seed=1))
    truth = PlantModel.fitted()
    np.testing.assert_allclose(report.model.as_vector(), truth.as_vector(), rtol=1e-6)
    assert report.nrmsae < 1e-6
    assert report.model.dt == pytest.approx(0.2)


def test_least_squares_is_exact_on_clean_data():
    log = synthetic_log(seed=2)
    h = log.h - log.h.mean()
    theta = least_squares_fit(np.asarray(log.u), h)
    np.testing.assert_allclose(theta, PlantModel.fitted().as_vector(), rtol=1e-6)


def test_fit_scales_with_command_units():
    log = synthetic_log(seed=3)
    doubled = FlightLog(t=log.t, u=2.0 * log.u, h=log.h)
    base = fit_model(log).model
    scaled = fit_model(doubled).model
    assert scaled.a1 == pytest.approx(base.a1 / 2.0, rel=1e-6)
    assert scaled.a2 == pytest.approx(base.a2 / 2.0, rel=1e-6)
    assert scaled.d1 == pytest.approx(base.d1, rel=1e-6)
    assert scaled.d2 == pytest.approx(base.d2, rel=1e-6)


def test_fit_is_invariant_to_altitude_offset():
    log = synthetic_log(seed=4)
    shifted = FlightLog(t=log.t, u=log.u, h=log.h + 10.0)
    np.testing.assert_allclose(fit_model(shifted).model.as_vector(), fit_model(log).model.as_vector(), rtol=1e-6)


def test_noisy_fit_reports_consistent_stages():
    report = fit_model(synthetic_log(seed=5, noise_sigma=0.0667))
    assert math.isfinite(report.nrmsae)
    assert report.nrmsae == min(report.stage1_nrmsae, report.stage2_nrmsae)
    assert report.stage in ("least_squares", "simplex")
    assert report.residuals.shape == report.observed.shape
    assert report.observed.mean() == pytest.approx(0.0, abs=1e-9)


@pytest.mark.slow
def test_noisy_fit_generalizes():
    report = fit_model(synthetic_log(seed=6, noise_sigma=0.0667))
    fresh = synthetic_log(seed=7)
    assert nrmsae(free_run(report.model, fresh.u, fresh.h), fresh.h) < 0.5


def test_constant_log_is_degenerate():
    n = 100
    log = FlightLog(t=np.arange(n) * 0.2, u=np.full(n, 1.0), h=np.full(n, 2.0))
    with pytest.raises(DegenerateDataError):
        fit_model(log)


def test_short_log_rejected():
    with pytest.raises(FlightLogError):
        fit_model(synthetic_log(duration_s=49 * 0.2))


# ==================== VALIDATION ====================

def test_validation_on_own_clean_log_is_zero():
    log = synthetic_log(seed=8)
    assert validate_model(PlantModel.fitted(), log) == pytest.approx(0.0, abs=1e-12)


def test_validation_on_noisy_log_reflects_noise():
    sigma = 0.0667
    clean = synthetic_log(seed=9)
    noisy = synthetic_log(seed=9, noise_sigma=sigma)
    noise = noisy.h - clean.h
    assert noise.std() == pytest.approx(sigma, rel=0.1)
    # the run starts at the first (noisy) sample, so its noise stays as an offset
    expected = math.sqrt(float(np.mean((noise - noise[0]) ** 2)))
    assert validate_model(PlantModel.fitted(), noisy) == pytest.approx(expected, rel=1e-6)


def test_validation_without_input_gain_is_free_decay():
    log = synthetic_log(seed=10)
    model = PlantModel(num=(0.0, 0.0), den=PlantModel.fitted().den)
    expected = math.sqrt(float(np.mean((log.h - log.h[0]) ** 2)))
    assert validate_model(model, log) == pytest.approx(expected, rel=1e-9)


def test_validation_needs_three_samples():
    with pytest.raises(FlightLogError):
        validate_model(PlantModel.fitted(), FlightLog(t=[0.0, 0.2], u=[0.0, 0.0], h=[0.0, 0.0]))


# ==================== FLIGHT LOG FILES ====================

def test_flight_log_file_round_trip(tmp_path):
    log = synthetic_log(seed=11, duration_s=20.0, noise_sigma=0.01)
    loaded = read_flight_log(write_flight_log(log, tmp_path / "logs" / "flight.csv"))
    np.testing.assert_array_equal(loaded.h, log.h)
    np.testing.assert_array_equal(loaded.u, log.u)


def test_flight_log_comments_and_spaces(tmp_path):
    path = tmp_path / "flight.csv"
    path.write_text("# bench test\nt, u, h\n0.0, 0.5, 1.0\n0.2, 0.5, 1.1\n0.4, 0.0, 1.2\n")
    log = read_flight_log(path)
    assert len(log) == 3
    assert log.h.tolist() == [1.0, 1.1, 1.2]


def test_missing_flight_log(tmp_path):
    with pytest.raises(ArtifactNotFoundError):
        read_flight_log(tmp_path / "nope.csv")


@pytest.mark.parametrize("content", [
    "t,u\n0,1\n0.2,1\n",
    "t,u,h\n0,1,0\n0.2,abc,0\n",
    "t,u,h\n0,1,0\n0.2,1,0\n0.2,1,0\n",
    "t,u,h\n0,1,0\n0.2,1,0\n0.5,1,0\n",
    "t,u,h\n0,1,0\n",
])
def test_invalid_flight_logs(tmp_path, content):
    path = tmp_path / "bad.csv"
    path.write_text(content)
    with pytest.raises(FlightLogError):
        read_flight_log(path)


def test_flight_log_rejects_non_finite():
    with pytest.raises(FlightLogError):
        FlightLog(t=[0.0, 0.2, 0.4], u=[0.0, math.nan, 0.0], h=[0.0, 0.0, 0.0])
