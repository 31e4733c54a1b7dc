#!/usr/bin/env python3
"""
Command Line Tests
==================
End-to-end runs of every subcommand through cli_main, exit codes, the
single-line diagnostics and byte-identical reruns / resumes.

Run: pytest test_cli.py
"""

import io
import json
from pathlib import Path

import pandas as pd
import pytest

from app.core.errors import handle_cli_exception
from app.core.exceptions import ArtifactNotFoundError, DegenerateDataError
from app.main import cli_main
from app.schemas.genome import GenomeDocument
from control.controllers import AnnGenome, SnnGenome

SMALL_CONFIG = """
seed = 3

[evolution]
controller = "ann"
pop_size = 6
tournament_size = 2
n_generations = 3
hof_size = 2
reeval_sets = 2

[episode]
n_setpoints = 2
hold_s = 3.0

[harness]
setpoints = [1.0, 2.0]
hold_s = [10.0]
"""


@pytest.fixture
def config_file(tmp_path) -> str:
    path = tmp_path / "blimp.toml"
    path.write_text(SMALL_CONFIG)
    return str(path)


def run(*argv) -> int:
    return cli_main([str(a) for a in argv])


def stderr_lines(capsys):
    return [line for line in capsys.readouterr().err.splitlines() if line.strip()]


# ==================== USAGE ERRORS ====================

def test_unknown_flag_is_usage_error(capsys):
    assert run("eval", "--controller", "pid", "--bogus") == 2
    lines = stderr_lines(capsys)
    assert len(lines) == 1
    assert lines[0].startswith("error [CFG_1003]")


def test_missing_subcommand(capsys):
    assert run() == 2
    assert len(stderr_lines(capsys)) == 1


def test_help_exits_cleanly(capsys):
    assert run("--help") == 0
    assert "evolve" in capsys.readouterr().out


def test_missing_config_file(tmp_path, capsys):
    assert run("eval", "--controller", "pid", "--config", tmp_path / "absent.toml") == 2
    assert len(stderr_lines(capsys)) == 1


def test_unknown_config_key(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    path.write_text("[evolution]\npopulation = 10\n")
    assert run("eval", "--controller", "pid", "--config", path) == 2
    assert "evolution" in stderr_lines(capsys)[0]


def test_invalid_config_value(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("[evolution]\npop_size = 2\ntournament_size = 3\n")
    assert run("evolve", "--config", path) == 2


def test_network_eval_needs_genome(capsys):
    assert run("eval", "--controller", "snn", "--log-level", "ERROR") == 2
    assert len(stderr_lines(capsys)) == 1


def test_missing_genome_file(tmp_path, capsys):
    assert run("eval", "--controller", "ann", "--genome", tmp_path / "none.json", "--log-level", "ERROR") == 2
    lines = stderr_lines(capsys)
    assert len(lines) == 1
    assert "CFG_1002" in lines[0]


def test_genome_kind_mismatch(tmp_path, config_file):
    path = GenomeDocument.from_genome(AnnGenome.zeros()).save(tmp_path / "ann.json")
    assert run("eval", "--controller", "snn", "--genome", path, "--config", config_file) == 2


def test_runtime_failure_exit_code(tmp_path, capsys):
    log = tmp_path / "flat.csv"
    log.write_text("t,u,h\n" + "".join(f"{0.2 * k:.1f},1.0,2.0\n" for k in range(100)))
    assert run("sysid", "--log", log, "--output", tmp_path / "fit", "--log-level", "ERROR") == 1
    lines = stderr_lines(capsys)
    assert len(lines) == 1
    assert "DATA_2002" in lines[0]


def test_error_record_and_exit_codes():
    exc = DegenerateDataError(rank=1, expected=4)
    assert exc.to_dict() == {"error": {"message": exc.message, "code": "DATA_2002",
                                       "details": {"rank": 1, "expected": 4}}}
    stream = io.StringIO()
    assert handle_cli_exception(exc, stream) == 1
    assert stream.getvalue() == f"error [DATA_2002]: {exc.message}\n"

    missing = ArtifactNotFoundError("genome", "g.json")
    assert missing.to_dict()["error"]["details"] == {"kind": "genome", "path": "g.json"}
    assert handle_cli_exception(missing, io.StringIO()) == 2
    assert handle_cli_exception(RuntimeError("boom\nagain"), stream) == 1
    assert stream.getvalue().splitlines()[-1] == "error [SYS_5001]: RuntimeError: boom again"


# ==================== EVAL / COMPARE ====================

def test_eval_pid_writes_report(tmp_path, config_file, capsys):
    out = tmp_path / "eval"
    assert run("eval", "--controller", "pid", "--config", config_file, "--output", out) == 0
    assert "pid: rmsae=" in capsys.readouterr().out
    report = json.loads((out / "pid_report.json").read_text())
    assert report["controller"] == "pid"
    assert report["plan"]["setpoints"] == [1.0, 2.0]
    assert (out / "pid_trajectory.csv").is_file()
    assert (out / "pid_display.csv").is_file()


def test_default_output_directory(config_file):
    assert run("eval", "--controller", "zero", "--config", config_file) == 0
    assert Path("results/eval/zero_report.json").is_file()


def test_compare_three_controllers(tmp_path, config_file, capsys):
    ann = GenomeDocument.from_genome(AnnGenome.zeros()).save(tmp_path / "ann.json")
    snn = GenomeDocument.from_genome(SnnGenome.zeros()).save(tmp_path / "snn.json")
    assert run("eval", "--controller", "pid", "--config", config_file, "--output", tmp_path / "pid") == 0
    assert run("eval", "--controller", "ann", "--genome", ann, "--pd", "--config", config_file,
               "--output", tmp_path / "ann") == 0
    assert run("eval", "--controller", "snn", "--genome", snn, "--config", config_file,
               "--output", tmp_path / "snn") == 0
    capsys.readouterr()

    assert run("compare", "--pid", tmp_path / "pid" / "pid_report.json",
               "--ann", tmp_path / "ann" / "ann_report.json",
               "--snn", tmp_path / "snn" / "snn_report.json",
               "--output", tmp_path / "cmp", "--config", config_file) == 0
    out = capsys.readouterr().out
    assert out.index("PID") < out.index("ANN") < out.index("SNN")
    assert (tmp_path / "cmp" / "comparison.csv").is_file()


def test_eval_pd_flag_drives_parallel_pd(tmp_path, config_file):
    snn = GenomeDocument.from_genome(SnnGenome.zeros()).save(tmp_path / "snn.json")
    out = tmp_path / "snn"
    assert run("eval", "--controller", "snn", "--genome", snn, "--pd", "--config", config_file,
               "--output", out) == 0
    trajectory = pd.read_csv(out / "snn_trajectory.csv")
    assert trajectory["u_pd"].abs().sum() > 0.0
    assert json.loads((out / "snn_report.json").read_text())["pd_fraction"] == pytest.approx(100.0)


def test_compare_rejects_mismatched_plans(tmp_path, config_file):
    assert run("eval", "--controller", "pid", "--config", config_file, "--output", tmp_path / "pid") == 0
    assert run("eval", "--controller", "zero", "--output", tmp_path / "zero") == 0
    # zero report in the ann slot was run on the default plan, pid on the config plan
    assert run("compare", "--pid", tmp_path / "pid" / "pid_report.json",
               "--ann", tmp_path / "zero" / "zero_report.json", "--output", tmp_path / "cmp") == 1


# ==================== SYSID ====================

def test_gen_log_then_sysid(tmp_path, capsys):
    log = tmp_path / "flight.csv"
    assert run("gen-log", "--output", log, "--duration", 300, "--seed", 4) == 0
    assert run("sysid", "--log", log, "--validate", log, "--output", tmp_path / "fit") == 0
    out = capsys.readouterr().out
    assert "a1=" in out and "validation rmsae=" in out

    report = json.loads((tmp_path / "fit" / "fit_report.json").read_text())
    assert report["a1"] == pytest.approx(-0.969e-3, rel=1e-6)
    assert report["d2"] == pytest.approx(0.99, rel=1e-6)
    assert report["samples"] == 1500
    assert (tmp_path / "fit" / "residuals.csv").is_file()


def test_sysid_missing_log(tmp_path):
    assert run("sysid", "--log", tmp_path / "none.csv") == 2


def test_gen_log_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("gen-log", "--output", a, "--duration", 30, "--log-noise", 0.05, "--seed", 1) == 0
    assert run("gen-log", "--output", b, "--duration", 30, "--log-noise", 0.05, "--seed", 1) == 0
    assert a.read_bytes() == b.read_bytes()


# ==================== EVOLVE ====================

ARTIFACTS = ("generations.csv", "hall_of_fame.json", "hall_of_fame_ranked.json", "best_genome.json")


def test_evolve_reruns_are_byte_identical(tmp_path, config_file, capsys):
    for name in ("a", "b"):
        assert run("evolve", "--config", config_file, "--output", tmp_path / name) == 0
    assert "best genome:" in capsys.readouterr().out
    for artifact in ARTIFACTS:
        assert (tmp_path / "a" / artifact).read_bytes() == (tmp_path / "b" / artifact).read_bytes()

    genome = GenomeDocument.load(tmp_path / "a" / "best_genome.json").to_genome()
    assert isinstance(genome, AnnGenome)
    assert genome.in_domain()


def test_evolve_resume_matches_full_run(tmp_path, config_file):
    assert run("evolve", "--config", config_file, "--output", tmp_path / "full") == 0
    assert run("evolve", "--config", config_file, "--generations", 1, "--output", tmp_path / "split") == 0
    assert run("evolve", "--config", config_file, "--resume", "--output", tmp_path / "split") == 0
    for artifact in ARTIFACTS:
        assert (tmp_path / "full" / artifact).read_bytes() == (tmp_path / "split" / artifact).read_bytes()
    assert (tmp_path / "split" / "checkpoints" / "generation_0003.json").is_file()


def test_evolve_resume_with_other_settings_fails(tmp_path, config_file):
    assert run("evolve", "--config", config_file, "--generations", 1, "--output", tmp_path / "run") == 0
    assert run("evolve", "--config", config_file, "--resume", "--pop-size", 8, "--output", tmp_path / "run") == 1


def test_evolve_with_worker_pool_matches_serial(tmp_path, config_file):
    assert run("evolve", "--config", config_file, "--output", tmp_path / "serial") == 0
    assert run("evolve", "--config", config_file, "--workers", 2, "--output", tmp_path / "pool") == 0
    assert (tmp_path / "serial" / "generations.csv").read_bytes() == (tmp_path / "pool" / "generations.csv").read_bytes()
