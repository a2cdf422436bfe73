"""Command-line harness: one subcommand per scenario kind.

Exit codes: 0 success, 1 golden mismatch, 2 invalid configuration,
3 numerical divergence, 4 report IO.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from config.scenarios import DEFAULT_SCENARIOS_DIR, ScenarioKind, ScenarioLoader, validation_message
from config.settings import get_settings
from reports.golden import Tolerances
from scenarios.manager import RunOutcome, ScenarioManager, ScenarioRegistry
from utils.errors import ConfigurationError, ToolkitError
from utils.logging import get_logger, setup_logging


SHORTCUTS = (
    ("n", "grid.n"),
    ("box_length", "grid.box_length"),
    ("amplitude", "initial.amplitude"),
    ("dt", "integrator.dt"),
    ("t_final", "integrator.t_final"),
    ("scheme", "integrator.scheme"),
    ("backend", "dno.backend"),
    ("seed", "seed"),
)


def _add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="Scenario YAML (default: config/scenarios/<kind>.yaml)")
    parser.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="PATH=VALUE",
        help="Override one config field, e.g. --set grid.n=64. Repeatable.",
    )
    parser.add_argument("--output", type=Path, default=None, help="Run directory (default: <root>/<name>-<hash>)")
    parser.add_argument("--output-root", default=None, help="Root for derived run directories")
    parser.add_argument("--golden", type=Path, default=None, help="Compare the run against this directory")
    parser.add_argument("--rtol", type=float, default=None, help="Default relative tolerance for --golden")
    parser.add_argument("--atol", type=float, default=None, help="Absolute tolerance for --golden")
    parser.add_argument(
        "--tolerance", action="append", default=[], metavar="FIELD=RTOL",
        help="Per-field relative tolerance for --golden. Repeatable.",
    )
    parser.add_argument("--sweep", default=None, metavar="PATH=V1,V2", help="Run one member per value")
    parser.add_argument("--workers", type=int, default=1, help="Thread pool size for --sweep")

    parser.add_argument("--n", type=int, default=None, help="Shortcut for grid.n")
    parser.add_argument("--box-length", type=float, default=None, help="Shortcut for grid.box_length")
    parser.add_argument("--amplitude", type=float, default=None, help="Shortcut for initial.amplitude")
    parser.add_argument("--dt", type=float, default=None, help="Shortcut for integrator.dt")
    parser.add_argument("--t-final", type=float, default=None, help="Shortcut for integrator.t_final")
    parser.add_argument("--scheme", default=None, help="Shortcut for integrator.scheme")
    parser.add_argument("--backend", default=None, help="Shortcut for dno.backend")
    parser.add_argument("--seed", type=int, default=None, help="Shortcut for seed")


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Capillary water waves numerical toolkit.")
    parser.add_argument("--scenarios-dir", default=DEFAULT_SCENARIOS_DIR, help="Directory of scenario YAML files")
    parser.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--no-file-log", action="store_true", help="Log to stderr only")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("list", help="List scenario kinds and scenario files")
    for kind in ScenarioKind:
        _add_run_arguments(commands.add_parser(kind.value, help=f"Run the {kind.value} scenario"))
    return parser.parse_args(argv)


def shortcut_overrides(args: argparse.Namespace) -> List[str]:
    out = []
    for attr, path in SHORTCUTS:
        value = getattr(args, attr, None)
        if value is not None:
            out.append(f"{path}={value}")
    return out


def parse_tolerances(args: argparse.Namespace) -> Tolerances:
    fields = {}
    for item in args.tolerance:
        if "=" not in item:
            raise ConfigurationError(f"tolerance {item!r} is not of the form FIELD=RTOL", {"tolerance": item})
        key, value = item.split("=", 1)
        try:
            fields[key.strip()] = float(value)
        except ValueError:
            raise ConfigurationError(f"tolerance {item!r} has a non-numeric value", {"tolerance": item})
    tolerances = Tolerances(fields=fields)
    if args.rtol is not None:
        tolerances.rtol = args.rtol
    if args.atol is not None:
        tolerances.atol = args.atol
    return tolerances


def _report(outcome: RunOutcome) -> None:
    status = "ok" if outcome.succeeded else f"exit {outcome.exit_code}"
    print(f"{outcome.name}: {status} -> {outcome.run_dir}")
    if outcome.error:
        print(f"  [error] {outcome.error['message']}")
    if outcome.golden is not None:
        verdict = "PASS" if outcome.golden.passed else f"FAIL ({len(outcome.golden.mismatches)} mismatches)"
        print(f"  golden {outcome.golden.golden_dir}: {verdict}")
        for mismatch in outcome.golden.mismatches[:10]:
            print(f"    {mismatch.file} {mismatch.location}: expected {mismatch.expected}, got {mismatch.actual}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    settings = get_settings()
    setup_logging(
        log_level=args.log_level or settings.logging.level,
        console_enabled=settings.logging.console_enabled,
        file_enabled=settings.logging.file_enabled and not args.no_file_log,
        json_format=settings.logging.json_format,
        logs_dir=settings.logging.logs_dir,
    )
    logger = get_logger("main")
    loader = ScenarioLoader(args.scenarios_dir)

    if args.command == "list":
        registry = ScenarioRegistry()
        registry.auto_discover_scenarios()
        print("kinds: " + ", ".join(registry.list_scenarios()))
        print("files: " + ", ".join(loader.available()))
        return 0

    kind = ScenarioKind(args.command)
    try:
        overrides = shortcut_overrides(args) + list(args.overrides)
        tolerances = parse_tolerances(args)
        manager = ScenarioManager(output_root=args.output_root, workers=args.workers)
        if args.sweep:
            configs = loader.load_sweep(args.sweep, kind, args.config, overrides)
            outcomes = manager.run_sweep(configs, args.golden, tolerances)
        else:
            config = loader.load(kind, args.config, overrides)
            outcomes = [manager.run(config, args.output, args.golden, tolerances)]
    except ValidationError as e:
        message = validation_message(e)
        logger.error(f"Invalid scenario: {message}")
        print(f"[error] invalid scenario: {message}", file=sys.stderr)
        return ConfigurationError.exit_code
    except ToolkitError as e:
        logger.error(f"Run failed: {e.message}", extra_data=e.to_dict())
        print(f"[error] {e.message}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error(f"IO failure: {e}")
        print(f"[error] {e}", file=sys.stderr)
        return 4

    for outcome in outcomes:
        _report(outcome)
    return next((o.exit_code for o in outcomes if o.exit_code), 0)


if __name__ == "__main__":
    sys.exit(main())
