"""
Command handlers for the quadrature CLI.
"""
import argparse
import logging
import sys
from abc import ABC, abstractmethod
from typing import List, Optional, Tuple

import numpy as np

from common import CommandType, IntegrandKind, IntegrandSpec, OracleRow, RunSettings, SelftestRow, SweepRow, TransfiniteBlend
from src.core.errors import UsageError
from src.core.sweep_executor import SweepExecutor
from src.operations.domains import gen_domain
from src.operations.selftest import run_selftest
from src.utils.data_handler import DataHandler

logger = logging.getLogger("commands")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NONCONVERGENCE = 2
EXIT_SELFTEST = 3


def parse_pair(text: Optional[str], flag: str) -> Optional[Tuple[float, float]]:
    """'dx,dy' -> (dx, dy)."""
    if text is None:
        return None
    parts = text.split(",")
    try:
        if len(parts) != 2:
            raise ValueError
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"{flag} expects two comma-separated numbers, got '{text}'") from None


def parse_omega_range(text: str) -> List[float]:
    """'lo:hi:points-per-decade' -> log-spaced frequencies including both ends."""
    parts = text.split(":")
    try:
        if len(parts) != 3:
            raise ValueError
        lo, hi, per_decade = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"--omega-range expects lo:hi:points-per-decade, got '{text}'") from None
    if not 0.0 < lo <= hi or per_decade < 1:
        raise UsageError(f"--omega-range needs 0 < lo <= hi and at least one point per decade, got '{text}'")
    n = int(round(np.log10(hi / lo) * per_decade)) + 1
    omegas = np.logspace(np.log10(lo), np.log10(hi), n)
    omegas[0], omegas[-1] = lo, hi
    return [float(w) for w in omegas]


def parse_omegas(args: argparse.Namespace) -> List[float]:
    """Frequencies from --omega, --omegas or --omega-range (exactly one)."""
    given = [name for name in ("omega", "omegas", "omega_range") if getattr(args, name, None) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --omega, --omegas, --omega-range")
    if args.omega is not None:
        return [float(args.omega)]
    if args.omegas is not None:
        try:
            omegas = [float(w) for w in args.omegas.split(",") if w.strip()]
        except ValueError:
            raise UsageError(f"--omegas expects comma-separated numbers, got '{args.omegas}'") from None
        if not omegas:
            raise UsageError("--omegas is empty")
        return omegas
    return parse_omega_range(args.omega_range)


def integrand_spec(args: argparse.Namespace, omega: float = 0.0) -> IntegrandSpec:
    if args.integrand is None:
        raise UsageError(f"--integrand is required; choose one of: {', '.join(k.value for k in IntegrandKind)}")
    fields = dict(kind=IntegrandKind(args.integrand), omega=omega)
    direction = parse_pair(args.dir, "--dir")
    center = parse_pair(args.center, "--center")
    if direction is not None:
        fields["direction"] = direction
    if center is not None:
        fields["center"] = center
    return IntegrandSpec(**fields)


class Command(ABC):
    """Base class for all CLI commands."""

    def __init__(self, args: argparse.Namespace, settings: RunSettings):
        """
        Initialize the command.

        Args:
            args: Parsed command-line arguments
            settings: Merged and validated settings
        """
        self.args = args
        self.settings = settings
        self.handler = DataHandler(timing=not getattr(args, "no_timing", False))

    @abstractmethod
    def execute(self) -> int:
        """
        Run the command.

        Returns:
            Process exit code
        """
        pass

    def executor(self) -> SweepExecutor:
        if not self.args.mesh:
            raise UsageError("--mesh is required")
        executor = SweepExecutor(self.settings, self.handler)
        executor.load_mesh(self.args.mesh, TransfiniteBlend(self.args.blend))
        return executor


class IntegrateCommand(Command):
    """Single evaluation, one CSV row."""

    def execute(self) -> int:
        omegas = parse_omegas(self.args)
        if len(omegas) != 1:
            raise UsageError("integrate takes a single --omega")
        spec = integrand_spec(self.args, omegas[0])
        executor = self.executor()
        row = executor.integrate(spec)
        executor.save_results([row], type(row), self.args.out)
        return EXIT_OK


class SweepCommand(Command):
    """One CSV row per frequency."""

    def execute(self) -> int:
        omegas = parse_omegas(self.args)
        spec = integrand_spec(self.args)
        executor = self.executor()
        rows = executor.sweep(spec, omegas, with_oracle=self.args.oracle)
        executor.save_results(rows, SweepRow, self.args.out)
        return EXIT_OK


class OracleCommand(Command):
    """Reference value as one CSV row."""

    def execute(self) -> int:
        omegas = parse_omegas(self.args)
        if len(omegas) != 1:
            raise UsageError("oracle takes a single --omega")
        executor = self.executor()
        row = executor.oracle(integrand_spec(self.args, omegas[0]), self.args.method)
        executor.save_results([row], OracleRow, self.args.out)
        return EXIT_OK


class GenDomainCommand(Command):
    """Mesh text of a built-in domain."""

    def execute(self) -> int:
        text = gen_domain(self.args.name)
        if self.args.out:
            with open(self.args.out, "w") as f:
                f.write(text)
            logger.info(f"Wrote domain {self.args.name} to {self.args.out}")
        else:
            sys.stdout.write(text)
        return EXIT_OK


class SelftestCommand(Command):
    """Pass/fail table; exit 3 on any failure."""

    def execute(self) -> int:
        rows = run_selftest(self.settings)
        self.handler.save_rows(rows, SelftestRow, self.args.out)
        failed = [r.check for r in rows if r.status != "pass"]
        if failed:
            logger.error(f"Self-test failed: {', '.join(failed)}")
            return EXIT_SELFTEST
        return EXIT_OK


# Factory function to create the appropriate command
def create_command(command_type: str, args: argparse.Namespace, settings: RunSettings) -> Command:
    """
    Create a command based on the subcommand name.

    Raises:
        UsageError: If the command type is not supported
    """
    commands = {
        CommandType.INTEGRATE: IntegrateCommand,
        CommandType.SWEEP: SweepCommand,
        CommandType.ORACLE: OracleCommand,
        CommandType.GEN_DOMAIN: GenDomainCommand,
        CommandType.SELFTEST: SelftestCommand,
    }
    try:
        return commands[CommandType(command_type)](args, settings)
    except ValueError:
        raise UsageError(f"Unsupported command: {command_type}") from None
