"""
Self-test: quick invariant checks of every module under the active settings.
"""
import logging
from typing import Callable, List, Tuple

import numpy as np

from common import IntegrandKind, IntegrandSpec, RunSettings, SelftestRow
from src.core.geometry import REFERENCE_CELL, element_area, triangle_rule
from src.core.integrands import hankel_phase_amp, hankel_phase_derivative, make_integrand
from src.core.levin_multivariate import (
    CellFrame,
    LevinField,
    OscillatoryIntegrand,
    boundary_reduce,
    integrate_mesh,
    levin2d_solve,
    monomial_basis,
)
from src.core.levin_univariate import LineOscillator, levin1d_adaptive
from src.core.numkernel import tsvd_solve
from src.core.oracle import phi1, planewave_reference_triangle, planewave_unit_square
from src.core.spectral1d import cheb_grid, gauss_rule
from src.operations.domains import reference_triangle, resonance_sector, unit_square

logger = logging.getLogger("selftest")

CheckResult = Tuple[bool, str]


def _tsvd(settings: RunSettings) -> CheckResult:
    rng = np.random.default_rng(7)
    A = rng.standard_normal((12, 8)) + 1j * rng.standard_normal((12, 8))
    x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    sol, _ = tsvd_solve(A, A @ x, settings.levin.eps_svd)
    err = float(np.linalg.norm(sol - x) / np.linalg.norm(x))
    return err <= 1e-10, f"relative error {err:.2e}"


def _spectral(settings: RunSettings) -> CheckResult:
    grid = cheb_grid(settings.levin.cfg1d.n_points)
    x = grid.points
    d_err = float(np.max(np.abs(grid.diff_matrix @ x ** 3 - 3 * x ** 2)))
    rule = gauss_rule(10)
    q_err = abs(float(rule.weights @ rule.nodes ** 18) - 2.0 / 19.0)
    return max(d_err, q_err) <= 1e-12, f"derivative {d_err:.2e}, quadrature {q_err:.2e}"


def _sector_area(settings: RunSettings) -> CheckResult:
    mesh = resonance_sector()
    err = abs(sum(element_area(T) for T in mesh.elements) - np.pi / 2.0)
    return err <= 1e-10, f"area error {err:.2e}"


def _levin1d(settings: RunSettings) -> CheckResult:
    omega = 100.0
    osc = LineOscillator(F=lambda t: np.ones_like(t), Gp=lambda t: np.full_like(t, omega), G=lambda t: omega * t)
    value, _, _ = levin1d_adaptive(osc, 0.0, 1.0, settings.levin.cfg1d)
    err = abs(value - phi1(omega))
    return err <= 1e-10, f"error {err:.2e}"


def _residual(settings: RunSettings) -> CheckResult:
    omega = 50.0
    osc = OscillatoryIntegrand(
        f=lambda x: np.ones(x.shape[:-1], dtype=complex),
        g=lambda x: omega * x[..., 0],
        grad_g=lambda x: np.broadcast_to([omega, 0.0], x.shape).copy(),
    )
    field = levin2d_solve(osc, REFERENCE_CELL, settings.levin)
    bound = settings.levin.residual_tol * field.f_scale
    return field.residual_inf <= bound, f"residual {field.residual_inf:.2e} (bound {bound:.1e})"


def _divergence(settings: RunSettings) -> CheckResult:
    rng = np.random.default_rng(11)
    basis = monomial_basis(5)
    field = LevinField(
        rng.standard_normal((2, basis.size)) + 0j, basis, CellFrame.of(REFERENCE_CELL), 0.0, 1.0
    )
    flat = OscillatoryIntegrand(
        f=lambda x: np.ones(x.shape[:-1], dtype=complex),
        g=lambda x: np.zeros(x.shape[:-1]),
        grad_g=lambda x: np.zeros(x.shape),
    )
    closed = boundary_reduce(field, flat, REFERENCE_CELL, settings.levin.cfg1d)
    pts, w = triangle_rule(12)
    volume = complex(w @ field.divergence(pts))
    err = abs(closed - volume)
    return err <= 1e-12 * max(1.0, abs(volume)), f"mismatch {err:.2e}"


def _planewave(settings: RunSettings) -> CheckResult:
    errs = []
    for omega in (0.0, 1e3):
        osc = make_integrand(IntegrandSpec(kind=IntegrandKind.PLANEWAVE, omega=omega))
        value = integrate_mesh(reference_triangle(), osc, settings.levin).value
        errs.append(abs(value - planewave_reference_triangle(omega)))
    return max(errs) <= 1e-10, ", ".join(f"{e:.2e}" for e in errs)


def _hankel(settings: RunSettings) -> CheckResult:
    worst = 0.0
    for z in (0.5, 2.0, 20.0, 200.0):
        h = 1e-3 * z
        theta = hankel_phase_amp(np.array([z - 2 * h, z - h, z + h, z + 2 * h])).theta0
        fd = (theta[0] - 8 * theta[1] + 8 * theta[2] - theta[3]) / (12 * h)
        exact = float(hankel_phase_derivative(z))
        worst = max(worst, abs(fd - exact) / exact)
    return worst <= 1e-9, f"Wronskian mismatch {worst:.2e}"


def _determinism(settings: RunSettings) -> CheckResult:
    osc = make_integrand(IntegrandSpec(kind=IntegrandKind.PLANEWAVE, omega=10.0, direction=(1.0, 1.0)))
    mesh = unit_square()
    serial = integrate_mesh(mesh, osc, settings.levin, threads=1)
    pooled = integrate_mesh(mesh, osc, settings.levin, threads=4)
    err = abs(serial.value - planewave_unit_square(10.0, (2 ** -0.5, 2 ** -0.5)))
    return serial == pooled and err <= 1e-10, f"identical={serial == pooled}, error {err:.2e}"


CHECKS: List[Tuple[str, Callable[[RunSettings], CheckResult]]] = [
    ("numkernel.tsvd_solve", _tsvd),
    ("spectral1d.exactness", _spectral),
    ("geometry.sector_area", _sector_area),
    ("levin_univariate.planewave", _levin1d),
    ("levin_multivariate.residual", _residual),
    ("levin_multivariate.divergence", _divergence),
    ("levin_multivariate.planewave", _planewave),
    ("integrands.hankel_wronskian", _hankel),
    ("levin_multivariate.determinism", _determinism),
]


def run_selftest(settings: RunSettings) -> List[SelftestRow]:
    """Run every check; an exception counts as a failure."""
    rows = []
    for name, check in CHECKS:
        try:
            passed, detail = check(settings)
        except Exception as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        logger.info(f"{name}: {'pass' if passed else 'FAIL'} ({detail})")
        rows.append(SelftestRow(check=name, status="pass" if passed else "fail", detail=detail))
    return rows
