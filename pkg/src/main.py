#!/usr/bin/env python3
"""
Main entry point for the oscillatory quadrature CLI.
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from common import CommandType, IntegrandKind, TransfiniteBlend
from src.core.errors import NonConvergenceError, QuadratureError, UsageError
from src.operations.commands import EXIT_NONCONVERGENCE, EXIT_USAGE, create_command
from src.utils.config import LOG_LEVEL, load_settings

logger = logging.getLogger("main")

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage errors as exceptions (exit code 1, not 2)."""

    def error(self, message):
        raise UsageError(message)


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--out", help="Output path (default: standard output)")
    common.add_argument("--threads", type=int, help="Element worker threads (overrides OSC_THREADS)")
    common.add_argument("--log-level", help="Logging level", default=None, choices=LOG_LEVELS)
    common.add_argument("--no-timing", action="store_true", help="Leave time_ms blank for byte-comparable output")
    return common


def _integrand_flags() -> argparse.ArgumentParser:
    flags = _Parser(add_help=False)
    flags.add_argument("--mesh", help="Mesh file")
    flags.add_argument("--blend", default=TransfiniteBlend.PROJECTION.value, choices=[b.value for b in TransfiniteBlend])
    flags.add_argument("--integrand", choices=[k.value for k in IntegrandKind])
    flags.add_argument("--omega", type=float)
    flags.add_argument("--omegas", help="Comma-separated frequencies")
    flags.add_argument("--omega-range", help="lo:hi:points-per-decade")
    flags.add_argument("--dir", help="Plane-wave direction dx,dy")
    flags.add_argument("--center", help="Center cx,cy of quadratic/radial phases")
    return flags


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oscquad", description="Adaptive Levin quadrature over curved triangular meshes")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common, integrand = _common_flags(), _integrand_flags()

    sub.add_parser(CommandType.INTEGRATE.value, parents=[common, integrand], help="Single evaluation")
    sweep = sub.add_parser(CommandType.SWEEP.value, parents=[common, integrand], help="Frequency sweep")
    sweep.add_argument("--oracle", action="store_true", help="Add reference values and errors")
    oracle = sub.add_parser(CommandType.ORACLE.value, parents=[common, integrand], help="Reference value only")
    oracle.add_argument("--method", choices=["2d", "boundary"], help="Oracle (default by integrand)")
    gen = sub.add_parser(CommandType.GEN_DOMAIN.value, parents=[common], help="Write a built-in mesh")
    gen.add_argument("name", help="reftri, unitsquare or resonance")
    sub.add_parser(CommandType.SELFTEST.value, parents=[common], help="Run invariant checks")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the application."""
    logging.basicConfig(level=LOG_LEVEL.upper(), format=LOG_FORMAT, stream=sys.stderr)
    try:
        args = build_parser().parse_args(argv)
        if args.log_level:
            logging.getLogger().setLevel(getattr(logging, args.log_level))
        settings = load_settings(args.config, {"threads": args.threads})
        return create_command(args.command, args, settings).execute()
    except NonConvergenceError as e:
        logger.error(f"Did not converge: {e}")
        return EXIT_NONCONVERGENCE
    except (QuadratureError, ValidationError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Error executing command: {str(e)}", exc_info=True)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
