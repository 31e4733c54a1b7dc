"""
Shared pytest fixtures.

Adds backend/ to the import path the same way run.py does.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent / "backend"))

from control.plant import PlantModel, RadarModel  # noqa: E402


class ScriptedPlant:
    """
    Stand-in plant whose altitude follows a fixed script.

    Step k returns script[k + 1]; commands are recorded but ignored.
    """

    def __init__(self, script):
        self.script = np.asarray(script, dtype=float)
        self.k = 0
        self.commands = []

    def reset(self, h0: float = 0.0) -> float:
        self.k = 0
        self.commands = []
        return float(self.script[0])

    def step(self, u: float) -> float:
        self.commands.append(u)
        self.k += 1
        return float(self.script[min(self.k, self.script.size - 1)])


@pytest.fixture
def fitted_plant() -> PlantModel:
    return PlantModel.fitted()


@pytest.fixture
def ideal_radar() -> RadarModel:
    return RadarModel.ideal()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def scripted_plant():
    return ScriptedPlant


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch, tmp_path):
    """Keep BLIMP_* variables and any .env file out of the tests."""
    import os

    for key in list(os.environ):
        if key.upper().startswith("BLIMP_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
