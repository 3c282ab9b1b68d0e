"""
Command-line entry point: solve, profile and validate
"""

import argparse
import logging
import signal
import sys
import threading
from dataclasses import asdict, replace
from pathlib import Path
from typing import Dict, List, Optional

import colorlog
from tqdm import tqdm

from ..config.configuration_manager import (ConfigurationManager, RunConfig,
                                            resolve_instance_path)
from ..config.config_validator import ges_validator, ring_validator
from ..core.exceptions import (InstanceParseError, OrchestrationError, SolutionWriteError,
                               UnsolvableInstanceError, WatchdogTimeoutError)
from ..data.instance_io import (read_instance, read_solution, to_solution_file, validate_solution,
                                write_solution)
from ..model.instance import Instance
from ..parallel.orchestrator import RingOrchestrator
from ..profiler.scaling import ScalingReport
from .synthetic import generate_synthetic_instance, tile_instance

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSOLVED = 2
EXIT_IO = 3
EXIT_WATCHDOG = 4


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """Colored console output plus an optional plain log file"""
    fmt = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    console = colorlog.StreamHandler(sys.stderr)
    console.setFormatter(colorlog.ColoredFormatter("%(log_color)s" + fmt))
    handlers: List[logging.Handler] = [console]
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(fmt))
        handlers.append(file_handler)
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), handlers=handlers, force=True)


def status_line(status: str, **fields) -> str:
    parts = [f"status={status}"]
    parts.extend(f"{key}={value}" for key, value in fields.items() if value is not None)
    return " ".join(parts)


def emit_status(status: str, **fields) -> None:
    print(status_line(status, **fields), flush=True)


def _sizes(text: str) -> List[int]:
    try:
        sizes = [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be integers, got {text!r}")
    if not sizes or any(v < 1 for v in sizes):
        raise argparse.ArgumentTypeError(f"sizes must be positive, got {text!r}")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ges", description="Parallel route minimization for the PDPTW")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML config file")
    common.add_argument("--preset", choices=["desk", "benchmark", "profile", "fidelity"], help="Config preset")
    common.add_argument("--log-level", default=None, help="Logging level")
    common.add_argument("--log-file", default=None, help="Also log to this file")
    common.add_argument("--workers", type=int, help="Workers in the ring (p)")
    common.add_argument("--kmax", type=int, help="Largest ejection set size")
    common.add_argument("--perturb-steps", type=int, help="Perturbation moves per call (I)")
    common.add_argument("--time-limit", type=float, help="Seconds per run")
    common.add_argument("--target-routes", type=int, help="Stop once this route count is reached")
    common.add_argument("--seed", type=int, help="Global seed")
    common.add_argument("--message-log", help="Write cooperation messages to this file")
    common.add_argument("--literal-line-31", "--restore-initial-on-failure", dest="restore_initial",
                        action="store_true", default=None,
                        help="Restart from the initial solution, and reset the best to it, after every failed attempt")
    common.add_argument("--warm-start", dest="warm_start", action="store_true", default=None,
                        help="Start from a packed solution instead of one route per request")
    common.add_argument("--check-invariants", dest="check_invariants", action="store_true", default=None,
                        help="Verify pool, penalty and route invariants every inner iteration")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    solve = sub.add_parser("solve", parents=[common], help="Minimize the fleet for one instance")
    solve.add_argument("--instance", required=True, help="Benchmark instance file")
    solve.add_argument("--out", help="Solution file to write")

    profile = sub.add_parser("profile", parents=[common], help="Measure operation counts over a size sweep")
    profile.add_argument("--instance", action="append", default=[],
                         help="Base instance to tile (synthetic instances otherwise)")
    profile.add_argument("--sizes", type=_sizes, help="Request counts, e.g. 100,200,400,800")
    profile.add_argument("--reps", type=int, help="Repetitions per size")
    profile.add_argument("--worker-sweep", type=_sizes, help="Worker counts for the speedup table")
    profile.add_argument("--report", help="CSV report path")
    profile.add_argument("--plot", action="store_true", default=None, help="Also write a log-log plot")

    validate = sub.add_parser("validate", parents=[common], help="Check a solution file")
    validate.add_argument("--instance", required=True, help="Benchmark instance file")
    validate.add_argument("--solution", required=True, help="Solution file to check")
    return parser


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Flags override the config file, which overrides the dataclass defaults"""
    manager = ConfigurationManager(args.config)
    if args.preset:
        manager.load_config_preset(args.preset)
    ges_overrides = {
        'k_max': args.kmax, 'perturb_steps': args.perturb_steps, 'time_limit': args.time_limit,
        'target_route_count': args.target_routes, 'rng_seed': args.seed,
        'restore_initial_on_failure': args.restore_initial, 'warm_start': args.warm_start,
        'check_invariants': args.check_invariants,
    }
    ring_overrides = {'workers': args.workers, 'message_log': args.message_log}
    ges = ges_validator.create_safe_config(**{**asdict(manager.get_ges_config()),
                                               **{k: v for k, v in ges_overrides.items() if v is not None}})
    ring = ring_validator.create_safe_config(**{**asdict(manager.get_ring_config()),
                                                 **{k: v for k, v in ring_overrides.items() if v is not None}})

    run_section = manager.get_run_section()
    run = RunConfig(subcommand=args.subcommand, ges=ges, ring=ring,
                    log_level=run_section.get('log_level', 'INFO'),
                    sizes=run_section.get('sizes', RunConfig().sizes),
                    repetitions=run_section.get('repetitions', RunConfig().repetitions))
    instances = args.instance if isinstance(args.instance, list) else [args.instance]
    run.instances = [i for i in instances if i]
    run.out = getattr(args, 'out', None)
    run.solution = getattr(args, 'solution', None)
    run.report = getattr(args, 'report', None)
    run.log_file = args.log_file
    if args.log_level:
        run.log_level = args.log_level
    if getattr(args, 'sizes', None):
        run.sizes = args.sizes
    if getattr(args, 'reps', None):
        run.repetitions = args.reps
    if getattr(args, 'worker_sweep', None):
        run.worker_sweep = args.worker_sweep
    if getattr(args, 'plot', None):
        run.plot = True
    if run.repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {run.repetitions}")
    return run


def _load(path: str) -> Instance:
    resolved = resolve_instance_path(path)
    if not resolved.exists():
        raise FileNotFoundError(f"Instance file not found: {resolved}")
    return read_instance(resolved)


def cmd_solve(run: RunConfig, stop_event: Optional[threading.Event] = None) -> int:
    inst = _load(run.instances[0])
    result = RingOrchestrator(inst, run.ges, run.ring, stop_event).run()
    best = result.best
    verdict = validate_solution(to_solution_file(best, inst), inst)
    if not verdict.accepted:
        for violation in verdict.violations:
            logger.error(violation)
        emit_status("infeasible", instance=inst.name, violations=len(verdict.violations))
        return EXIT_UNSOLVED

    if run.out:
        with open(run.out, "w") as f:
            write_solution(best, f, inst)
        logger.info(f"Solution written to {run.out}")
    else:
        write_solution(best, sys.stdout, inst)

    initial = max((w.solve_result.initial_route_count for w in result.workers if w.solve_result is not None),
                  default=inst.n)
    emit_status("ok", instance=inst.name, routes=best.route_count, initial=initial,
                workers=run.ring.workers, wall_seconds=f"{result.wall_seconds:.3f}",
                outer=result.counters.z1_observed, inner=result.counters.z2_observed,
                out=run.out)
    return EXIT_OK


def _profile_instance(run: RunConfig, n: int, rep: int) -> Instance:
    seed = run.ges.rng_seed + rep
    if run.instances:
        return tile_instance(_load(run.instances[0]), n, seed)
    return generate_synthetic_instance(n, seed)


def _measure(inst: Instance, run: RunConfig, workers: int, rep: int) -> tuple:
    ring = replace(run.ring, workers=workers, message_log=None)
    ges = replace(run.ges, rng_seed=run.ges.rng_seed + rep)
    result = RingOrchestrator(inst, ges, ring).run()
    rows = [{"phase": phase, "n": inst.n, "p": workers, "repetition": rep,
             "tally": tally, "wall_seconds": result.wall_seconds}
            for phase, tally in result.counters.snapshot().items()]
    return rows, result.wall_seconds


def cmd_profile(run: RunConfig) -> int:
    rows: List[Dict] = []
    for n in tqdm(run.sizes, desc="sizes"):
        for rep in range(run.repetitions):
            measured, _ = _measure(_profile_instance(run, n, rep), run, run.ring.workers, rep)
            rows.extend(measured)

    if len(set(run.sizes)) < 3:
        logger.warning(f"{len(set(run.sizes))} sizes given; reporting raw tallies without exponents")
    report = ScalingReport.from_measurements(rows)

    if run.worker_sweep:
        # speedup table at the smallest size, p=1 is the sequential reference
        n = min(run.sizes)
        times: Dict[int, float] = {}
        for p in tqdm(sorted(set(run.worker_sweep) | {1}), desc="workers"):
            walls = [_measure(_profile_instance(run, n, rep), run, p, rep)[1] for rep in range(run.repetitions)]
            times[p] = max(sum(walls) / len(walls), 1e-9)
        report.add_speedups(n, times[1], times)

    report_path = Path(run.report or "scaling_report.csv")
    report.to_csv(report_path)
    if run.plot:
        report.plot(report_path.with_suffix(".png"))
    for line in report.summary_lines():
        print(line)

    failed = [phase for phase, verdict in report.verdicts.items() if not verdict.passed]
    emit_status("ok" if not failed else "bound_violation", sizes=",".join(str(s) for s in run.sizes),
                reps=run.repetitions, rows=len(report.rows), exponents=len(report.exponents),
                report=str(report_path))
    return EXIT_OK


def cmd_validate(run: RunConfig) -> int:
    inst = _load(run.instances[0])
    solution_file = read_solution(Path(run.solution))
    verdict = validate_solution(solution_file, inst)
    for violation in verdict.violations:
        print(f"violation {violation}")
    emit_status("accepted" if verdict.accepted else "rejected", instance=inst.name,
                routes=solution_file.route_count, violations=len(verdict.violations))
    return EXIT_OK if verdict.accepted else EXIT_UNSOLVED


COMMANDS = {"solve": cmd_solve, "profile": cmd_profile, "validate": cmd_validate}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else EXIT_ERROR
        emit_status("ok" if code == 0 else "usage_error")
        return code
    try:
        run = build_run_config(args)
    except ValueError as e:
        setup_logging("INFO")
        logger.error(f"Invalid configuration: {e}")
        emit_status("error", reason="config", message=repr(str(e)))
        return EXIT_ERROR
    setup_logging(run.log_level, run.log_file)

    stop_event = threading.Event()
    previous = None
    if run.subcommand == "solve" and threading.current_thread() is threading.main_thread():
        def handle_signal(signum, frame):
            logger.warning("Received shutdown signal, finishing the ring")
            stop_event.set()
        previous = signal.signal(signal.SIGINT, handle_signal)

    try:
        if run.subcommand == "solve":
            return cmd_solve(run, stop_event)
        return COMMANDS[run.subcommand](run)
    except (InstanceParseError, OSError) as e:
        logger.error(str(e))
        emit_status("io_error", message=repr(str(e)))
        return EXIT_IO
    except (UnsolvableInstanceError, SolutionWriteError) as e:
        logger.error(str(e))
        emit_status("unsolved", message=repr(str(e)))
        return EXIT_UNSOLVED
    except WatchdogTimeoutError as e:
        logger.error(str(e))
        emit_status("watchdog", message=repr(str(e)))
        return EXIT_WATCHDOG
    except OrchestrationError as e:
        logger.error(str(e))
        emit_status("error", message=repr(str(e)))
        return EXIT_ERROR
    finally:
        if previous is not None:
            signal.signal(signal.SIGINT, previous)
