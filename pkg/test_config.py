#!/usr/bin/env python3
"""
Configuration and Artifact Tests
================================
Settings sources and validation, genome / checkpoint documents and the
evolution service's checkpoint handling.

Run: pytest test_config.py
"""

import json

import numpy as np
import pytest

from app.core.config import Settings, load_settings
from app.core.exceptions import CheckpointError, ConfigurationError, GenomeShapeError
from app.core.rng import Stream, derive_rng
from app.schemas.evolution import CheckpointDocument, GenerationRow
from app.schemas.genome import GenomeDocument
from app.services.evolution_service import EvolutionService
from control.controllers import AnnGenome, PidMode, SnnGenome
from control.evolution import GenerationRecord


def write_toml(tmp_path, text: str) -> str:
    path = tmp_path / "blimp.toml"
    path.write_text(text)
    return str(path)


# ==================== SETTINGS ====================

def test_defaults():
    settings = load_settings()
    config = settings.evolution_config()
    assert (config.pop_size, config.tournament_size, config.n_generations) == (100, 3, 300)
    assert (config.p_mut_individual, config.p_mut_param) == (0.4, 0.6)
    assert settings.radar_model().noise_sigma == pytest.approx(0.0667)
    assert settings.control_limits().u_max == 3.3
    pid = settings.pid_params()
    assert (pid.kp, pid.ki, pid.kd, pid.mode) == (6.0, 0.4, 0.9, PidMode.LITERAL)
    assert settings.pd_params("snn") is None


def test_toml_sections(tmp_path):
    path = write_toml(tmp_path, """
seed = 11
[evolution]
pop_size = 20
[controller.snn]
pd_enabled = true
[controller.pid]
mode = "accumulating"
[radar]
median_window = 3
""")
    settings = load_settings(path)
    assert settings.seed == 11
    assert settings.evolution_config().pop_size == 20
    assert settings.evolution_config().seed == 11
    pd = settings.pd_params("snn")
    assert (pd.kp, pd.ki, pd.kd) == (1.4, 0.0, 0.3)
    assert settings.pid_params().mode is PidMode.ACCUMULATING
    assert settings.radar_model().median_window == 3


def test_source_precedence(tmp_path, monkeypatch):
    path = write_toml(tmp_path, "[evolution]\npop_size = 20\ntournament_size = 4\n")
    monkeypatch.setenv("BLIMP_EVOLUTION__POP_SIZE", "30")
    settings = load_settings(path, {"evolution": {"tournament_size": 5}})
    assert settings.evolution.pop_size == 30
    assert settings.evolution.tournament_size == 5


@pytest.mark.parametrize("kind, gains", [("ann", (1.3, 0.4)), ("snn", (1.4, 0.3))])
def test_partial_network_override_keeps_pd_gains(kind, gains, monkeypatch):
    pd = load_settings(overrides={"controller": {kind: {"pd_enabled": True}}}).pd_params(kind)
    assert (pd.kp, pd.kd) == gains

    monkeypatch.setenv(f"BLIMP_CONTROLLER__{kind.upper()}__PD_ENABLED", "true")
    pd = load_settings().pd_params(kind)
    assert (pd.kp, pd.kd) == gains


def test_dotenv_file(tmp_path):
    (tmp_path / ".env").write_text("BLIMP_SEED=42\n")
    assert load_settings().seed == 42


@pytest.mark.parametrize("text", [
    "[evolution]\npop_size = 2\ntournament_size = 3\n",
    "[radar]\nmedian_window = 4\n",
    "[harness]\nsetpoints = [1.0, 2.0]\nhold_s = [10.0, 20.0, 30.0]\n",
    "[episode]\nsetpoint_min = 3.0\nsetpoint_max = 1.0\n",
    "[evolution]\nunknown = 1\n",
    "[evolution\npop_size = 2\n",
])
def test_invalid_configs(tmp_path, text):
    with pytest.raises(ConfigurationError):
        load_settings(write_toml(tmp_path, text))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_settings(tmp_path / "absent.toml")


def test_harness_holds_expand():
    settings = Settings(harness={"setpoints": [1.0, 2.0, 3.0], "hold_s": [5.0]})
    assert settings.harness.holds() == [5.0, 5.0, 5.0]


# ==================== RANDOM STREAMS ====================

def test_streams_are_independent_and_repeatable():
    a = derive_rng(1, Stream.EPISODE, 0).random(4)
    assert np.array_equal(a, derive_rng(1, Stream.EPISODE, 0).random(4))
    assert not np.array_equal(a, derive_rng(1, Stream.EPISODE, 1).random(4))
    assert not np.array_equal(a, derive_rng(1, Stream.SENSOR_NOISE, 0).random(4))


# ==================== GENOME FILES ====================

def test_genome_document_round_trip(tmp_path, rng):
    genome = SnnGenome.random(rng)
    path = GenomeDocument.from_genome(genome).save(tmp_path / "g.json")
    loaded = GenomeDocument.load(path).to_genome()
    assert loaded.same_parameters(genome)
    raw = json.loads(path.read_text())
    assert raw["kind"] == "snn"
    assert [b["name"] for b in raw["blocks"]][:2] == ["w_hidden", "w_out"]


def _edit_genome(tmp_path, edit):
    path = GenomeDocument.from_genome(AnnGenome.zeros()).save(tmp_path / "g.json")
    raw = json.loads(path.read_text())
    edit(raw)
    path.write_text(json.dumps(raw))
    return path


@pytest.mark.parametrize("edit", [
    lambda raw: raw["blocks"][0].update(values=[[0.0], [0.0]]),
    lambda raw: raw["blocks"][1].update(values=[9.0, 0.0, 0.0]),
    lambda raw: raw["blocks"].pop(),
    lambda raw: raw["blocks"][0].update(shape=[1, 3]),
])
def test_invalid_genome_files(tmp_path, edit):
    path = _edit_genome(tmp_path, edit)
    with pytest.raises(GenomeShapeError):
        GenomeDocument.load(path).to_genome()


def test_unparsable_genome_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text("{not json")
    with pytest.raises(GenomeShapeError):
        GenomeDocument.load(path)


def test_generation_row_keeps_non_finite_values():
    record = GenerationRecord(generation=0, best=float("inf"), mean=float("inf"), std=float("nan"),
                              hof_best=float("inf"), evaluations=4)
    row = GenerationRow.model_validate(json.loads(GenerationRow.from_record(record).model_dump_json()))
    restored = row.to_record()
    assert restored.best == float("inf")
    assert np.isnan(restored.std)


# ==================== CHECKPOINTS ====================

def small_settings(**evolution) -> Settings:
    fields = dict(controller="ann", pop_size=6, tournament_size=2, n_generations=2, hof_size=2, reeval_sets=2)
    fields.update(evolution)
    return load_settings(overrides={
        "seed": 5,
        "evolution": fields,
        "episode": {"n_setpoints": 2, "hold_s": 3.0},
    })


def test_checkpoints_written_every_generation(tmp_path):
    service = EvolutionService(small_settings(), tmp_path)
    outcome = service.run()
    names = sorted(p.name for p in service.checkpoint_dir.iterdir())
    assert names == ["generation_0000.json", "generation_0001.json", "generation_0002.json"]
    assert len(outcome.log) == 2
    assert outcome.best_genome_path == tmp_path / "best_genome.json"
    assert [m.fitness for m in outcome.ranked] == sorted(m.fitness for m in outcome.ranked)


def test_checkpoint_interval(tmp_path):
    service = EvolutionService(small_settings(n_generations=5, checkpoint_every=2), tmp_path)
    service.run()
    names = sorted(p.name for p in service.checkpoint_dir.iterdir())
    assert names == ["generation_0000.json", "generation_0002.json", "generation_0004.json", "generation_0005.json"]


def test_checkpoint_restores_state(tmp_path):
    service = EvolutionService(small_settings(), tmp_path)
    service.run()
    state = service.load_checkpoint(service.checkpoint_path(2))
    assert state.generation == 2
    assert state.next_id == 6 * 3
    assert len(state.population) == 6
    assert [r.generation for r in state.log] == [0, 1]
    assert len(state.hof) == 2


def test_checkpoint_from_other_run_rejected(tmp_path):
    EvolutionService(small_settings(), tmp_path).run()
    other = EvolutionService(small_settings(p_mut_param=0.5), tmp_path)
    with pytest.raises(CheckpointError):
        other.load_checkpoint(other.latest_checkpoint())


def test_corrupt_checkpoint_rejected(tmp_path):
    service = EvolutionService(small_settings(), tmp_path)
    service.checkpoint_dir.mkdir(parents=True)
    service.checkpoint_path(1).write_text('{"generation": 1}')
    with pytest.raises(CheckpointError):
        service.run(resume=True)


def test_resume_without_checkpoint_starts_fresh(tmp_path):
    outcome = EvolutionService(small_settings(), tmp_path).run(resume=True)
    assert [r.generation for r in outcome.log] == [0, 1]


def test_checkpoint_document_shape(tmp_path):
    service = EvolutionService(small_settings(), tmp_path)
    service.run()
    document = CheckpointDocument.load(service.checkpoint_path(0))
    assert document.generation == 0
    assert document.log == []
    assert all(ind.fitness is None for ind in document.population)
    assert document.run["seed"] == 5
