import mpmath
import numpy as np
import pytest
from scipy.special import hankel1

from common import IntegrandKind, IntegrandSpec, OracleConfig
from src.core.errors import ContractError, IntegrandDomainError, NonConvergenceError
from src.core.geometry import boundary_area, build_mesh
from src.core.integrands import make_integrand
from src.core.oracle import (
    adaptive_gauss_legendre,
    oracle_2d,
    oracle_helmholtz_boundary,
    phi1,
    phi2,
    planewave_reference_triangle,
    planewave_unit_square,
    reference_value,
)


def test_adaptive_gauss_legendre_smooth():
    assert adaptive_gauss_legendre(np.sin, 0.0, np.pi) == pytest.approx(2.0, abs=1e-13)


def test_adaptive_gauss_legendre_oscillatory():
    value = adaptive_gauss_legendre(lambda t: np.exp(300j * t), 0.0, 1.0)
    assert value == pytest.approx(phi1(300.0), abs=1e-13)


def test_adaptive_gauss_legendre_rejects_reversed_interval():
    with pytest.raises(ContractError):
        adaptive_gauss_legendre(np.cos, 1.0, 0.0)


def test_adaptive_gauss_legendre_depth_limit():
    with pytest.raises(NonConvergenceError) as exc:
        adaptive_gauss_legendre(lambda t: np.exp(1e5j * t), 0.0, 1.0, n=8, max_depth=2)
    assert exc.value.interval is not None


@pytest.mark.parametrize("a", [0.0, 1e-8, 0.3, 0.4999, 0.5001, 2.0, 1e3])
def test_closed_forms_against_high_precision(a):
    with mpmath.workdps(40):
        ia = mpmath.mpc(0, a)
        if a == 0.0:
            ref1, ref2 = mpmath.mpf(1), mpmath.mpf("0.5")
        else:
            ref1 = (mpmath.exp(ia) - 1) / ia
            ref2 = (mpmath.exp(ia) - 1 - ia) / ia ** 2
        ref1, ref2 = complex(ref1), complex(ref2)
    assert abs(phi1(a) - ref1) <= 1e-15 * max(1.0, abs(ref1))
    assert abs(phi2(a) - ref2) <= 1e-14 * max(1.0, abs(ref2))


def test_unit_square_closed_form_is_separable():
    assert planewave_unit_square(10.0) == pytest.approx(phi1(10.0))
    d = (0.6, 0.8)
    assert planewave_unit_square(10.0, d) == pytest.approx(phi1(6.0) * phi1(8.0))


def test_oracle_area(unitsquare_mesh, flat_integrand, oracle_cfg):
    assert oracle_2d(unitsquare_mesh, flat_integrand, oracle_cfg) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("omega", [0.0, 5.0, 40.0])
def test_oracle_planewave(reftri_mesh, planewave, oracle_cfg, omega):
    value = oracle_2d(reftri_mesh, planewave(omega), oracle_cfg)
    assert abs(value - planewave_reference_triangle(omega)) <= 1e-12


def test_oracle_curved_element_area(curved_triangle, flat_integrand, oracle_cfg):
    mesh = build_mesh(curved_triangle.vertices, {1: curved_triangle.edges[1]}, [(1, 2, 3, 0, 1, 0)])
    assert oracle_2d(mesh, flat_integrand, oracle_cfg).real == pytest.approx(boundary_area(curved_triangle), abs=1e-12)


def test_oracle_depth_limit_names_element(reftri_mesh):
    with pytest.raises(NonConvergenceError) as exc:
        oracle_2d(reftri_mesh, make_integrand(IntegrandSpec(kind=IntegrandKind.QUADRATIC, omega=1e4)), OracleConfig(gl_points=4, max_depth=1))
    assert exc.value.element_index == 0
    # refinement reaches max_depth before giving up
    assert len(exc.value.cell_path) == 1


def test_boundary_oracle_needs_positive_frequency(resonance_mesh):
    with pytest.raises(IntegrandDomainError):
        oracle_helmholtz_boundary(resonance_mesh, 0.0)


def test_boundary_oracle_skips_shared_edges(resonance_mesh, oracle_cfg):
    """Summing every edge of every element equals the outer boundary alone, since interior edges cancel."""
    omega = 3.0
    total = 0j
    for T in resonance_mesh.elements:
        for curve in T.edges:

            def integrand(t, curve=curve):
                c, dc = curve.point(t), curve.tangent(t)
                r = np.hypot(c[:, 0], c[:, 1])
                return 0.5j * hankel1(0, omega * r) * (dc[:, 1] * c[:, 0] - dc[:, 0] * c[:, 1])

            total += adaptive_gauss_legendre(integrand, 0.0, 1.0)
    assert oracle_helmholtz_boundary(resonance_mesh, omega, oracle_cfg) == pytest.approx(total, abs=1e-11)


def test_interior_edge_contributes_nothing(oracle_cfg):
    """Splitting a triangle along a median leaves the boundary value unchanged."""
    P1, P2, P3 = [1.0, 0.2], [2.0, 0.2], [1.0, 1.2]
    whole = build_mesh(np.array([P1, P2, P3]), {}, [(1, 2, 3, 0, 0, 0)])
    split = build_mesh(np.array([P1, P2, P3, [1.5, 0.7]]), {}, [(1, 2, 4, 0, 0, 0), (1, 4, 3, 0, 0, 0)])
    assert len(split.adjacency) == 1
    assert len(split.boundary_edges) == 4

    omega = 5.0
    expected = oracle_helmholtz_boundary(whole, omega, oracle_cfg)
    assert abs(oracle_helmholtz_boundary(split, omega, oracle_cfg) - expected) <= 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("omega", [1.0, 10.0])
def test_boundary_and_area_oracles_agree(resonance_mesh, oracle_cfg, omega):
    osc = make_integrand(IntegrandSpec(kind=IntegrandKind.HELMHOLTZ, omega=omega))
    area = oracle_2d(resonance_mesh, osc, oracle_cfg)
    assert abs(area - oracle_helmholtz_boundary(resonance_mesh, omega, oracle_cfg)) <= 1e-10 * max(1.0, abs(area))


def test_reference_value_skips_high_frequency(reftri_mesh):
    spec = IntegrandSpec(kind=IntegrandKind.QUADRATIC, omega=1e4)
    assert reference_value(spec, reftri_mesh, OracleConfig(max_omega_2d=1e3)) is None


def test_reference_value_uses_boundary_for_helmholtz(resonance_mesh, oracle_cfg):
    spec = IntegrandSpec(kind=IntegrandKind.HELMHOLTZ, omega=1e3)
    assert reference_value(spec, resonance_mesh, oracle_cfg) == oracle_helmholtz_boundary(resonance_mesh, 1e3, oracle_cfg)


def test_reference_value_checks_domain(reftri_mesh, oracle_cfg):
    with pytest.raises(IntegrandDomainError):
        reference_value(IntegrandSpec(kind=IntegrandKind.RADIAL, omega=1.0), reftri_mesh, oracle_cfg)
