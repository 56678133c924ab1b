"""
This script defines the deltachannel command-line application.
It includes functions to create the argument parser, one function per command, and the main entry point.

Commands:
- run <config>: sweep the energy grid and write E, R, T_elastic, T_1n..., defect as CSV.
- validate <config>: report whether the model file describes a well-formed model.
- greens <config> --channel n: write G_n^0(x_n, x_n; E) over the grid as CSV.

Exit codes: 0 on success, 1 on a fatal error or failed points, 2 when a lenient
sweep had to skip or drop points.
"""

import argparse
import dataclasses
import logging
import sys

from deltachannel.config import load_config, sweep_violations
from deltachannel.effective import BORN, EXACT
from deltachannel.errors import DeltaChannelError, PoleProximity, ThresholdSingularity
from deltachannel.greens import greens_point
from deltachannel.log import get_logger, set_level
from deltachannel.model import validate_model
from deltachannel.oracle import oracle_sweep
from deltachannel.tables import (greens_frame, max_deviation, results_frame, transition_column,
                                 write_frame)
from deltachannel.transition import OK, energy_sweep

logger = get_logger(__name__)


# Function to create the argument parser


def create_parser():
    """
    Creates the argument parser with the run, validate and greens commands.
    Returns:
        argparse.ArgumentParser: The parser.
    """
    parser = argparse.ArgumentParser(
        prog="deltachannel",
        description="Multi-channel 1D scattering with delta couplings in a star topology.")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for debugging output")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="sweep the energy grid")
    run_parser.add_argument("config", help="model file")
    run_parser.add_argument("--mode", choices=[EXACT, BORN], default=None,
                            help="overrides the mode of the [sweep] section")
    run_parser.add_argument("--oracle", action="store_true",
                            help="also solve the full coupled-channel system and compare")
    run_parser.add_argument("--lenient", action="store_true",
                            help="skip channels sitting on a threshold instead of failing the point")
    run_parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    run_parser.add_argument("-o", "--output", default=None, help="CSV file (default: stdout)")

    validate_parser = commands.add_parser("validate", help="check a model file")
    validate_parser.add_argument("config", help="model file")

    greens_parser = commands.add_parser("greens", help="dump a point Green's function")
    greens_parser.add_argument("config", help="model file")
    greens_parser.add_argument("--channel", type=int, required=True, help="coupled channel index n")
    greens_parser.add_argument("-o", "--output", default=None, help="CSV file (default: stdout)")
    return parser


def run(config):
    """
    Runs a sweep and writes its table.

    Args:
        config (RunConfig): Resolved configuration.

    Returns:
        int: 0 on full success, 2 if a lenient sweep skipped or lost points,
        1 if points failed otherwise.
    """
    model = config.model
    channels = model.channel_indices
    results = energy_sweep(model, config.grid, config.mode, config.quad, config.jobs, config.lenient)
    oracle = None
    if config.compare_oracle:
        oracle = oracle_sweep(model, config.grid, config.quad, config.jobs)

    frame = results_frame(results, channels, oracle)
    write_frame(frame, config.output_path or sys.stdout)

    if oracle is not None:
        deviations = max_deviation(results, oracle, channels)
        summary = ", ".join(f"{transition_column(n)}={dev:.3g}" for n, dev in deviations.items())
        print(f"max |T_pipeline - T_oracle|: {summary}", file=sys.stderr)

    bad = [result for result in results if result.status != OK]
    for result in bad:
        logger.error("E=%.12g %s: %s", result.energy, result.status, result.message)
    if bad:
        return 2 if config.lenient else 1
    return 0


def validate(config):
    """
    Prints the validation report of a model.

    Returns:
        int: 0 when the model is valid, 1 otherwise.
    """
    report = validate_model(config.model)
    violations = list(report.violations) + sweep_violations(config.grid)
    for warning in report.warnings:
        print(f"warning: {warning}")
    for violation in violations:
        print(f"violation: {violation}")
    if not violations:
        print("ok")
    return 1 if violations else 0


def dump_greens(config, channel_index, output=None):
    """
    Writes G_n^0(x_n, x_n; E) of one coupled channel over the grid.

    Returns:
        int: 0, or 1 if the channel does not exist.
    """
    model = config.model
    try:
        channel = model.channel(channel_index)
    except KeyError as err:
        logger.error(err.args[0])
        return 1
    energies = config.grid.points()
    values = []
    for energy in energies:
        try:
            values.append(greens_point(channel.potential, channel.coupling.crossing_point, energy,
                                       model.units, config.quad, model.box))
        except ThresholdSingularity:
            values.append("threshold")
        except PoleProximity:
            values.append("pole")
        except DeltaChannelError as err:
            logger.warning("E=%.12g: %s", energy, err)
            values.append("failed")
    write_frame(greens_frame(energies, values), output or sys.stdout)
    return 0


def main(argv=None):
    """
    Entry point of the deltachannel command.

    Args:
        argv (list, optional): Arguments; defaults to sys.argv[1:].

    Returns:
        int: The exit code.
    """
    args = create_parser().parse_args(argv)
    if args.verbose:
        set_level(logging.DEBUG if args.verbose > 1 else logging.INFO)
    try:
        config = load_config(args.config, validate=args.command != "validate")
        if args.command == "validate":
            return validate(config)
        if args.command == "greens":
            return dump_greens(config, args.channel, args.output)
        # Command-line flags override the model file
        config = dataclasses.replace(
            config,
            mode=args.mode or config.mode,
            compare_oracle=args.oracle,
            lenient=args.lenient,
            output_path=args.output,
            jobs=args.jobs,
        )
        return run(config)
    except DeltaChannelError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        logger.debug("I/O failure", exc_info=True)
        return 1


if __name__ == '__main__':
    sys.exit(main())
