"""
BLIMP NEUROCONTROL TOOLKIT - COMMAND LINE
========================================
Subcommands:
    evolve   Evolve an SNN or ANN altitude controller
    eval     Track the waypoint plan with PID, ANN, SNN or zero controller
    sysid    Fit the plant model to a flight log
    compare  Build the PID / ANN / SNN comparison table from eval reports
    gen-log  Write a synthetic flight log

Every subcommand accepts --config (TOML) and --seed; flags override the
file, which overrides environment variables and defaults.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

import argparse
import contextlib
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional, Sequence

from app.core.config import Settings, load_settings
from app.core.errors import EXIT_FAILURE, EXIT_OK, handle_cli_exception
from app.core.exceptions import ConfigurationError, UsageError
from app.core.logging import setup_logging

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[2]


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of printing usage and exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def _set(overrides: Dict[str, Any], dotted: str, value: Any) -> None:
    if value is None:
        return
    node = overrides
    *parents, leaf = dotted.split(".")
    for key in parents:
        node = node.setdefault(key, {})
    node[leaf] = value


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="TOML config file")
    common.add_argument("--seed", type=int, default=None, help="Run seed")
    common.add_argument("--log-level", type=str.upper, default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--log-file", type=str, default=None, help="JSON-lines log file")
    common.add_argument("--noise-sigma", type=float, default=None, help="Radar noise std (m)")

    parser = ArgumentParser(prog="blimp", description="Blimp altitude neurocontrol toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    evolve = sub.add_parser("evolve", parents=[common], help="Evolve a network controller")
    evolve.add_argument("--controller", choices=["snn", "ann"], default=None)
    evolve.add_argument("--generations", type=int, default=None)
    evolve.add_argument("--pop-size", type=int, default=None)
    evolve.add_argument("--tournament-size", type=int, default=None)
    evolve.add_argument("--workers", type=int, default=None, help="0 = physical cores, 1 = in-process")
    evolve.add_argument("--output", type=str, default=None, help="Output directory")
    evolve.add_argument("--resume", action="store_true", help="Continue from the latest checkpoint")

    ev = sub.add_parser("eval", parents=[common], help="Evaluate a controller on the waypoint plan")
    ev.add_argument("--controller", choices=["pid", "ann", "snn", "zero"], required=True)
    ev.add_argument("--genome", type=str, default=None, help="Genome JSON for ann/snn")
    pd_group = ev.add_mutually_exclusive_group()
    pd_group.add_argument("--pd", dest="pd", action="store_true", default=None, help="Add the parallel PD")
    pd_group.add_argument("--no-pd", dest="pd", action="store_false", help="Bare network output")
    ev.add_argument("--output", type=str, default=None, help="Output directory")

    sysid = sub.add_parser("sysid", parents=[common], help="Fit the plant model to a flight log")
    sysid.add_argument("--log", type=str, required=True, help="Flight log CSV (t,u,h)")
    sysid.add_argument("--validate", type=str, default=None, help="Held-out flight log for free-run validation")
    sysid.add_argument("--output", type=str, default=None, help="Output directory")

    compare = sub.add_parser("compare", parents=[common], help="Compare evaluation reports")
    compare.add_argument("--pid", type=str, required=True, help="PID report JSON")
    compare.add_argument("--ann", type=str, default=None, help="ANN report JSON")
    compare.add_argument("--snn", type=str, default=None, help="SNN report JSON")
    compare.add_argument("--output", type=str, default=None, help="Output directory")

    gen_log = sub.add_parser("gen-log", parents=[common], help="Write a synthetic flight log")
    gen_log.add_argument("--output", type=str, required=True, help="CSV path")
    gen_log.add_argument("--duration", type=float, default=None, help="Seconds")
    gen_log.add_argument("--log-noise", type=float, default=None, help="Altitude noise std (m)")

    return parser


def settings_from_args(args: argparse.Namespace) -> Settings:
    overrides: Dict[str, Any] = {}
    _set(overrides, "seed", args.seed)
    _set(overrides, "log_level", args.log_level)
    _set(overrides, "log_file", args.log_file)
    _set(overrides, "radar.noise_sigma", args.noise_sigma)

    if args.command == "evolve":
        _set(overrides, "evolution.controller", args.controller)
        _set(overrides, "evolution.n_generations", args.generations)
        _set(overrides, "evolution.pop_size", args.pop_size)
        _set(overrides, "evolution.tournament_size", args.tournament_size)
        _set(overrides, "evolution.workers", args.workers)
    elif args.command == "eval" and args.controller in ("ann", "snn"):
        _set(overrides, f"controller.{args.controller}.genome", args.genome)
        _set(overrides, f"controller.{args.controller}.pd_enabled", args.pd)
    elif args.command == "gen-log":
        _set(overrides, "harness.log_duration_s", args.duration)
        _set(overrides, "harness.log_noise_sigma", args.log_noise)

    return load_settings(args.config, overrides)


def output_dir(args: argparse.Namespace, settings: Settings, default: str) -> Path:
    return Path(args.output) if args.output else Path(settings.harness.output_dir) / default


# Subcommands

def cmd_evolve(args: argparse.Namespace, settings: Settings) -> int:
    from app.services.evolution_service import EvolutionService
    from control.evolution import serial_evaluator

    out = output_dir(args, settings, f"evolve_{settings.evolution.controller}")
    with contextlib.ExitStack() as stack:
        evaluator = serial_evaluator
        if settings.evolution.workers != 1:
            sys.path.insert(0, str(PROJECT_ROOT))
            from workers.fitness_worker import FitnessWorkerPool
            evaluator = stack.enter_context(FitnessWorkerPool(settings.evolution.workers))
        outcome = EvolutionService(settings, out, evaluator).run(resume=args.resume)

    if outcome.ranked:
        best = outcome.ranked[0]
        print(f"best genome: {outcome.best_genome_path} (id {best.id}, re-evaluated rmsae {best.fitness:.4f} m)")
    print(f"generation log: {out / 'generations.csv'}")
    return EXIT_OK


def build_controller(args: argparse.Namespace, settings: Settings):
    from app.schemas.genome import GenomeDocument
    from control.controllers import PidController, ZeroController, build_network_controller

    limits = settings.control_limits()
    kind = args.controller
    if kind == "pid":
        return PidController(settings.pid_params(), limits)
    if kind == "zero":
        return ZeroController(limits)

    genome_path = settings.network_settings(kind).genome
    if not genome_path:
        raise ConfigurationError(f"No genome given for the {kind} controller (use --genome or controller.{kind}.genome)")
    genome = GenomeDocument.load(genome_path).to_genome()
    if genome.KIND != kind:
        raise ConfigurationError(f"Genome '{genome_path}' is a {genome.KIND} genome, expected {kind}")
    return build_network_controller(genome, limits, settings.pd_params(kind))


def cmd_eval(args: argparse.Namespace, settings: Settings) -> int:
    from app.services.evaluation_service import run_waypoint_eval, save_report
    from control.pipeline import WaypointPlan

    controller = build_controller(args, settings)
    harness = settings.harness
    plan = WaypointPlan(setpoints=tuple(harness.setpoints), holds_s=tuple(harness.holds()), dt=settings.plant.dt, h0=harness.h0)
    report = run_waypoint_eval(controller, settings.plant_model(), settings.radar_model(), plan, settings.seed, name=args.controller)
    path = save_report(report, output_dir(args, settings, "eval"), harness.smoothing_window)

    if report.failed_step is not None:
        print(f"{args.controller}: run diverged at step {report.failed_step}; report {path}")
        return EXIT_FAILURE
    pd_text = "-" if report.pd_fraction is None else f"{report.pd_fraction:.1f}%"
    print(f"{args.controller}: rmsae={report.rmsae:.4f} m effort={report.effort:.1f} V pd_fraction={pd_text} report={path}")
    return EXIT_OK


def cmd_sysid(args: argparse.Namespace, settings: Settings) -> int:
    from app.services.sysid_service import fit_flight_log
    from control.sysid import read_flight_log, validate_model

    report, path = fit_flight_log(args.log, output_dir(args, settings, "sysid"))
    m = report.model
    print(f"a1={m.a1!r} a2={m.a2!r} d1={m.d1!r} d2={m.d2!r} nrmsae={report.nrmsae:.6g} stage={report.stage} report={path}")
    if args.validate:
        rmsae = validate_model(m, read_flight_log(args.validate))
        print(f"validation rmsae={rmsae:.4f} m")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, settings: Settings) -> int:
    from app.services.evaluation_service import compare_controllers, format_comparison, load_report, write_comparison

    paths = {"pid": args.pid, "ann": args.ann, "snn": args.snn}
    reports = {key: load_report(path) for key, path in paths.items() if path}
    table = compare_controllers(reports)
    write_comparison(table, output_dir(args, settings, "compare"))
    print(format_comparison(table))
    return EXIT_OK


def cmd_gen_log(args: argparse.Namespace, settings: Settings) -> int:
    from app.services.sysid_service import generate_log_file

    log = generate_log_file(
        settings.plant_model(),
        args.output,
        settings.seed,
        duration_s=settings.harness.log_duration_s,
        noise_sigma=settings.harness.log_noise_sigma,
        u_max=settings.controller.u_max,
    )
    print(f"wrote {len(log)} samples to {args.output}")
    return EXIT_OK


COMMANDS = {
    "evolve": cmd_evolve,
    "eval": cmd_eval,
    "sysid": cmd_sysid,
    "compare": cmd_compare,
    "gen-log": cmd_gen_log,
}


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name (default sys.argv[1:])

    Returns:
        Process exit code
    """
    argv: List[str] = list(sys.argv[1:] if argv is None else argv)
    setup_logging("WARNING")
    try:
        args = build_parser().parse_args(argv)
        settings = settings_from_args(args)
        setup_logging(settings.log_level, settings.log_file, settings.log_format)
        logger.info(f"Running '{args.command}' with seed {settings.seed}", extra={"run_id": f"{args.command}-{settings.seed}"})
        return COMMANDS[args.command](args, settings)
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_OK
    except Exception as e:
        return handle_cli_exception(e)


if __name__ == "__main__":
    sys.exit(cli_main())
