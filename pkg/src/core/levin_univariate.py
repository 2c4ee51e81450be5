"""
Adaptive univariate Levin method for integrals of F(t) * exp(i G(t)) over [a, b].

Each slab solves p' + i G' p = F by Chebyshev collocation with a truncated
SVD; the integral is then p(b) e^{iG(b)} - p(a) e^{iG(a)}. Stationary points
of G are handled by bisection driven by whole-versus-halves agreement.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from common import Levin1dConfig
from src.core.errors import ContractError, NonConvergenceError
from src.core.numkernel import tsvd_solve
from src.core.spectral1d import cheb_grid

logger = logging.getLogger("levin_univariate")

DEGENERATE_WIDTH = 1e-15

RealFn = Callable[[np.ndarray], np.ndarray]


@dataclass
class WorkTally:
    """Work counters shared by the 1D and 2D solvers."""

    leaves: int = 0
    boundary_segments: int = 0
    svd_calls: int = 0
    error_1d: float = 0.0


@dataclass(frozen=True)
class LineOscillator:
    """F(t) exp(i G(t)) with Gp = G'. All callables act elementwise on arrays."""

    F: Callable[[np.ndarray], np.ndarray]
    Gp: RealFn
    G: RealFn

    def check_phase(self, a: float, b: float, samples: int = 7, step: float = 1e-6, rtol: float = 1e-6) -> bool:
        """Diagnostic: G' agrees with central differences of G."""
        t = np.linspace(a + step, b - step, samples)
        fd = (self.G(t + step) - self.G(t - step)) / (2.0 * step)
        return bool(np.all(np.abs(fd - self.Gp(t)) <= rtol * np.maximum(1.0, np.abs(fd))))


def levin1d_slab(
    osc: LineOscillator, a: float, b: float, cfg: Levin1dConfig, tally: Optional[WorkTally] = None
) -> complex:
    """
    Single-interval Levin collocation.

    Args:
        osc: Oscillator on [a, b]
        a: Left end
        b: Right end, b > a
        cfg: Solver settings (grid size, truncation)
        tally: Optional counters updated in place

    Returns:
        p(b) exp(i G(b)) - p(a) exp(i G(a))
    """
    if not b > a:
        raise ContractError(f"levin1d_slab needs b > a, got [{a}, {b}]")
    if b - a < DEGENERATE_WIDTH * (1.0 + abs(a) + abs(b)):
        return 0j

    grid = cheb_grid(cfg.n_points)
    half = 0.5 * (b - a)
    t = 0.5 * (a + b) + half * grid.points
    A = grid.diff_matrix / half + 1j * np.diag(np.asarray(osc.Gp(t), dtype=float))
    rhs = np.asarray(osc.F(t), dtype=complex)
    p, _ = tsvd_solve(A, rhs, cfg.eps_svd)
    if tally is not None:
        tally.svd_calls += 1
    Ga, Gb = osc.G(np.array([a, b]))
    # exp(i dG) - 1 in a form without cancellation for small dG
    half_dg = 0.5 * (Gb - Ga)
    expm1 = 2j * np.sin(half_dg) * np.exp(1j * half_dg)
    return complex(np.exp(1j * Ga) * ((p[-1] - p[0]) + p[-1] * expm1))


def levin1d_adaptive(
    osc: LineOscillator, a: float, b: float, cfg: Levin1dConfig, tally: Optional[WorkTally] = None
) -> Tuple[complex, float, int]:
    """
    Adaptive bisection over levin1d_slab.

    An interval is accepted when its single-slab value and the sum over its
    two halves differ by at most cfg.tol * (1 + |halves|).

    Returns:
        (value, error estimate, number of accepted segments)

    Raises:
        NonConvergenceError: If bisection goes deeper than cfg.max_depth
    """
    if not b > a:
        raise ContractError(f"levin1d_adaptive needs b > a, got [{a}, {b}]")
    local = WorkTally()
    whole = levin1d_slab(osc, a, b, cfg, local)
    value, err, segments = _bisect(osc, a, b, whole, 0, cfg, local)
    if tally is not None:
        tally.svd_calls += local.svd_calls
        tally.boundary_segments += segments
    return value, err, segments


def _bisect(
    osc: LineOscillator, a: float, b: float, whole: complex, depth: int, cfg: Levin1dConfig, tally: WorkTally
) -> Tuple[complex, float, int]:
    m = 0.5 * (a + b)
    left = levin1d_slab(osc, a, m, cfg, tally)
    right = levin1d_slab(osc, m, b, cfg, tally)
    halves = left + right
    diff = abs(whole - halves)
    if diff <= cfg.tol * (1.0 + abs(halves)):
        logger.debug(f"accepted [{a!r}, {b!r}] at depth {depth}, diff {diff:.2e}")
        return halves, diff, 1
    if depth + 1 > cfg.max_depth:
        raise NonConvergenceError("univariate Levin bisection exceeded max depth", interval=(a, b))
    lv, le, ln = _bisect(osc, a, m, left, depth + 1, cfg, tally)
    rv, re, rn = _bisect(osc, m, b, right, depth + 1, cfg, tally)
    return lv + rv, le + re, ln + rn
