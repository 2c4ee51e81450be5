"""
Reference values independent of the Levin solvers.

- adaptive_gauss_legendre: 1D bisection with a fixed Gauss-Legendre rule
- oracle_2d: brute-force adaptive Duffy/Gauss quadrature of f exp(i g) per element
- oracle_helmholtz_boundary: the Helmholtz volume integral as a boundary integral
- closed forms for plane waves on the reference triangle and unit square
"""
import logging
from math import factorial
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import hankel1

from common import IntegrandKind, IntegrandSpec, OracleConfig
from src.core.errors import ContractError, IntegrandDomainError, NonConvergenceError
from src.core.geometry import REFERENCE_CELL, Mesh, RefCell, subdivide_reference, triangle_rule
from src.core.integrands import make_integrand, validate_integrand_domain
from src.core.levin_multivariate import Integrand, pullback
from src.core.spectral1d import gauss_rule

logger = logging.getLogger("oracle")

SERIES_SWITCH = 0.5
SERIES_TERMS = 24


def adaptive_gauss_legendre(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    n: int = 30,
    tol: float = 1e-12,
    max_depth: int = 30,
) -> complex:
    """
    Integrate func over [a, b] by bisection until one level of refinement
    changes a piece by at most tol * (1 + |value|).

    Raises:
        NonConvergenceError: If a piece needs more than max_depth bisections
    """
    if not b > a:
        raise ContractError(f"adaptive_gauss_legendre needs b > a, got [{a}, {b}]")
    rule = gauss_rule(n)

    def apply(lo: float, hi: float) -> complex:
        t, w = rule.on_interval(lo, hi)
        return complex(w @ np.asarray(func(t), dtype=complex))

    def refine(lo: float, hi: float, whole: complex, depth: int) -> complex:
        mid = 0.5 * (lo + hi)
        left, right = apply(lo, mid), apply(mid, hi)
        halves = left + right
        if abs(halves - whole) <= tol * (1.0 + abs(halves)):
            return halves
        if depth + 1 > max_depth:
            raise NonConvergenceError("adaptive Gauss-Legendre exceeded max depth", interval=(lo, hi))
        return refine(lo, mid, left, depth + 1) + refine(mid, hi, right, depth + 1)

    return refine(a, b, apply(a, b), 0)


def _cell_value(ref: Integrand, cell: RefCell, n: int) -> complex:
    pts, w = triangle_rule(n, cell)
    return complex(w @ ref.value(pts))


def oracle_2d(mesh: Mesh, osc: Integrand, cfg: OracleConfig = OracleConfig()) -> complex:
    """
    Adaptive 2D quadrature of f exp(i g) over the mesh.

    Each element is refined in reference coordinates; a cell is accepted when
    its value and the sum over its four children agree within tol * (1 + |children|).

    Raises:
        NonConvergenceError: With element index and cell path when max_depth is exceeded
    """
    total = 0j
    for T in mesh.elements:
        ref = pullback(T, osc)

        def refine(cell: RefCell, whole: complex) -> complex:
            children = subdivide_reference(cell)
            parts = [_cell_value(ref, child, cfg.gl_points) for child in children]
            together = sum(parts)
            if abs(together - whole) <= cfg.tol * (1.0 + abs(together)):
                return together
            if cell.depth + 1 > cfg.max_depth:
                raise NonConvergenceError(
                    "2D oracle exceeded max depth", cell_path=cell.path, element_index=T.index
                )
            return sum(refine(child, part) for child, part in zip(children, parts))

        total += refine(REFERENCE_CELL, _cell_value(ref, REFERENCE_CELL, cfg.gl_points))
    return total


def oracle_helmholtz_boundary(mesh: Mesh, omega: float, cfg: OracleConfig = OracleConfig()) -> complex:
    """
    Closed integral of n . (G(0, x) grad |x|^2) over the outer boundary of the mesh.

    With G = (i/4) H0(omega |x|) and a boundary curve c(t), the integrand is
    (i/2) H0(omega |c|) (c'_y c_x - c'_x c_y). Edges shared by two elements are skipped.

    Raises:
        IntegrandDomainError: If omega <= 0 or a boundary curve passes through the origin
        NonConvergenceError: Naming the boundary segment that did not converge
    """
    if omega <= 0.0:
        raise IntegrandDomainError("boundary oracle needs omega > 0")
    total = 0j
    for element_index, edge_index in mesh.boundary_edges:
        curve = mesh.elements[element_index].edges[edge_index - 1]

        def integrand(t, curve=curve):
            c, dc = curve.point(t), curve.tangent(t)
            r = np.hypot(c[:, 0], c[:, 1])
            if np.any(r == 0.0):
                raise IntegrandDomainError("boundary curve passes through the origin")
            return 0.5j * hankel1(0, omega * r) * (dc[:, 1] * c[:, 0] - dc[:, 0] * c[:, 1])

        try:
            total += adaptive_gauss_legendre(integrand, 0.0, 1.0, cfg.gl_points, cfg.tol, cfg.max_depth)
        except NonConvergenceError as e:
            raise NonConvergenceError(
                f"boundary oracle segment (element {element_index}, edge {edge_index}) did not converge",
                interval=e.interval,
            ) from e
    return total


def reference_value(spec: IntegrandSpec, mesh: Mesh, cfg: OracleConfig = OracleConfig()) -> Optional[complex]:
    """
    Reference for a sweep row: the boundary oracle for helmholtz, oracle_2d otherwise.

    Returns None when oracle_2d would run above cfg.max_omega_2d.
    """
    if spec.kind == IntegrandKind.HELMHOLTZ:
        return oracle_helmholtz_boundary(mesh, spec.omega, cfg)
    if spec.omega > cfg.max_omega_2d:
        logger.info(f"Skipping 2D oracle at omega={spec.omega:g} (limit {cfg.max_omega_2d:g})")
        return None
    validate_integrand_domain(spec, mesh)
    return oracle_2d(mesh, make_integrand(spec), cfg)


# ---------------------------------------------------------------------------
# closed forms


def _exp_series(a: complex, shift: int) -> complex:
    """sum_n (i a)^n / (n + shift)!"""
    return sum((1j * a) ** n / factorial(n + shift) for n in range(SERIES_TERMS))


def phi1(a: float) -> complex:
    """Integral of exp(i a t) over [0, 1]."""
    if abs(a) < SERIES_SWITCH:
        return _exp_series(a, 1)
    return (np.exp(1j * a) - 1.0) / (1j * a)


def phi2(a: float) -> complex:
    """Integral of (1 - t) exp(i a t) over [0, 1]."""
    if abs(a) < SERIES_SWITCH:
        return _exp_series(a, 2)
    return (np.exp(1j * a) - 1.0 - 1j * a) / (1j * a) ** 2


def planewave_reference_triangle(omega: float) -> complex:
    """Integral of exp(i omega x) over the triangle (0,0), (1,0), (0,1)."""
    return phi2(omega)


def planewave_unit_square(omega: float, direction: Sequence[float] = (1.0, 0.0)) -> complex:
    """Integral of exp(i omega d.x) over [0, 1]^2 for a unit direction d."""
    return phi1(omega * direction[0]) * phi1(omega * direction[1])
