#!/usr/bin/env python3
"""
mimo-estim - Main Entry Point
Reduced-complexity channel estimation for massive MIMO: experiment runner
"""
import argparse
import logging
import os
import sys

from simulator import ExperimentKind, Simulator
from utils.config_loader import ScenarioConfig
from utils.constants import TITLE
from utils.errors import MimoEstimError

logger = logging.getLogger(TITLE)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
EXIT_ERROR = 2


def _seed(value):
    seed = int(value)
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {value}")
    return seed


def build_parser():
    """Argument parser with one subcommand per experiment"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="scenario TOML file (default: data/default_scenario.toml)")
    common.add_argument("--seed", type=_seed, default=None, help="root seed, overrides the config")
    common.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    common.add_argument("--full", action="store_true", help="lift the desk-scale sweep caps")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only, no progress bars")

    parser = argparse.ArgumentParser(prog=TITLE, description="Massive MIMO channel estimation experiments")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for kind in ExperimentKind:
        sub = subparsers.add_parser(kind.command, parents=[common], help=f"run the {kind.command} experiment")
        if kind is ExperimentKind.NMSE_VS_N:
            sub.add_argument("--array", choices=["upa", "ula"], default="upa", help="square UPA or ULA sweep")
        if kind is ExperimentKind.SE:
            sub.add_argument("--sweep", choices=["m", "rho"], default="m",
                             help="sweep the observation length or the transmit power")
    return parser


def configure_logging(verbose=False, quiet=False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv=None):
    """
    Main entry point for the experiment runner

    Returns:
        int: Exit status
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    try:
        config = ScenarioConfig.load(args.config)
        simulator = Simulator(config, seed=args.seed, full=args.full, show_progress=not args.quiet)
        simulator.run(ExperimentKind.from_command(args.command), out=args.out,
                      array=getattr(args, "array", "upa"), se_sweep=getattr(args, "sweep", "m"))
    except MimoEstimError as error:
        logger.error("%s", error)
        return EXIT_ERROR
    return 0


if __name__ == "__main__":
    # Add the src directory to the path so we can import modules
    src_dir = os.path.dirname(os.path.abspath(__file__))
    if src_dir not in sys.path:
        sys.path.append(src_dir)

    sys.exit(main())
