#!/usr/bin/env python3
"""
finite-qm - Exact discrete-time quantum evolution on a phase lattice

Reduces a commensurable energy spectrum to its phase lattice and evolves
integer-amplitude states on it exactly.

Usage:
    # Reduce a spectrum
    python3 scripts/finite_qm.py reduce --spectrum ../sample-data/spectra/torus_4_9.txt

    # State after 10**18 steps
    python3 scripts/finite_qm.py evolve --spectrum S --state ST --from 1000000000000000000

    # Periods, recurrence and distinct states (exit 3 above --cap)
    python3 scripts/finite_qm.py period --spectrum S --state ST --cap 10000

    # Born probabilities, optionally against an analysis state
    python3 scripts/finite_qm.py born --spectrum S --state ST --analysis A

    # Lattice vs continuous evolution
    python3 scripts/finite_qm.py fidelity --spectrum S --state ST --from 0 --count 36

    # Torus trajectory as CSV or SVG
    python3 scripts/finite_qm.py torus --spectrum S --count 36 --format svg --out torus.svg

    # Random spectrum file and the N-growth study
    python3 scripts/finite_qm.py randspec --seed 7 --dimension 4 --out spec.txt
    python3 scripts/finite_qm.py stats --dims 2 3 4 5 --trials 100 --seed 0

Exit codes:
    0 success, 1 input error, 2 incommensurable spectrum, 3 cap exceeded

Logs go to stderr; reports go to stdout (or --out).
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import yaml
from dotenv import load_dotenv

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.commands import run_command
from src.config_loader import Command, OutputFormat, build_run_config, load_config
from src.errors import EXIT_INPUT_ERROR, FiniteQMError

logger = logging.getLogger("finite_qm")

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", help="Config profile (config/profiles/NAME.yaml)")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    common.add_argument("--out", dest="out_path", help="Write the report to PATH instead of stdout")

    numeric = argparse.ArgumentParser(add_help=False)
    numeric.add_argument("--tol", type=float, help="Rationalization tolerance (default: 1e-12)")
    numeric.add_argument("--max-den", dest="max_den", type=int,
                         help="Largest admissible denominator (default: 10^9)")

    spectrum = argparse.ArgumentParser(add_help=False)
    spectrum.add_argument("--spectrum", dest="spectrum_path", required=True, help="Spectrum file")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--state", dest="state_path", required=True, help="State file")

    parser = argparse.ArgumentParser(
        description="Exact discrete-time quantum evolution on a phase lattice"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser(Command.REDUCE.value, parents=[common, numeric, spectrum],
                   help="Reduce a spectrum to its phase lattice")

    evolve = sub.add_parser(Command.EVOLVE.value, parents=[common, numeric, spectrum, state],
                            help="State at a given step")
    evolve.add_argument("--steps", type=int, help="Steps to advance from the state's own step")
    evolve.add_argument("--from", dest="start", type=int, help="Absolute target step (wins over --steps)")

    period = sub.add_parser(Command.PERIOD.value, parents=[common, numeric, spectrum, state],
                            help="Minimal period, recurrence and distinct states")
    period.add_argument("--cap", type=int, help="Enumeration cap (default: 10^6)")
    period.add_argument("--workers", type=int, help="Threads for distinct-state counting")

    born = sub.add_parser(Command.BORN.value, parents=[common, numeric, spectrum, state],
                          help="Born probabilities")
    born.add_argument("--analysis", dest="analysis_path", help="Analysis state file")
    born.add_argument("--precision", type=int, help="Embedding precision in bits (default: 128)")

    fidelity = sub.add_parser(Command.FIDELITY.value, parents=[common, numeric, spectrum, state],
                              help="Lattice vs continuous evolution")
    fidelity.add_argument("--from", dest="start", type=int, help="First step (default: the state's step)")
    fidelity.add_argument("--count", type=int, help="Number of steps")

    torus = sub.add_parser(Command.TORUS.value, parents=[common, numeric, spectrum],
                           help="Torus trajectory as CSV or SVG")
    torus.add_argument("--from", dest="start", type=int, help="First step (default: 0)")
    torus.add_argument("--count", type=int, help="Number of points (default: 36)")
    torus.add_argument("--format", choices=[f.value for f in OutputFormat],
                       help="csv (default) or svg (D = 3 only)")

    randspec = sub.add_parser(Command.RANDSPEC.value, parents=[common],
                              help="Random commensurable spectrum file")
    randspec.add_argument("--seed", type=int)
    randspec.add_argument("--dimension", type=int)
    randspec.add_argument("--bound", type=int, help="p_k drawn from [1, bound]")

    stats = sub.add_parser(Command.STATS.value, parents=[common], help="N-growth study")
    stats.add_argument("--seed", type=int)
    stats.add_argument("--dims", type=int, nargs="+")
    stats.add_argument("--trials", type=int)
    stats.add_argument("--bound", type=int, help="p_k drawn from [1, bound]")

    return parser


def configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point; returns the exit code."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    flags = {
        key: value for key, value in vars(args).items()
        if key not in ("command", "profile", "verbose", "quiet")
    }

    try:
        run = build_run_config(load_config(args.profile), args.command, **flags)
        result = run_command(run)
    except FiniteQMError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return e.exit_code
    except (OSError, yaml.YAMLError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    if run.out_path is not None:
        run.out_path.write_text(result.output, encoding="utf-8")
        logger.info(f"Wrote {run.command.value} output to {run.out_path}")
    else:
        sys.stdout.write(result.output)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
