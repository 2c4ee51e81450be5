import time

import numpy as np
import pytest

from common import IntegrandKind, IntegrandSpec, Levin2dConfig
from src.core.errors import NonConvergenceError
from src.core.geometry import REFERENCE_CELL, CurvedTriangle, subdivide_reference, triangle_rule
from src.core.integrands import make_integrand
from src.core.levin_multivariate import (
    CellFrame,
    LevinField,
    OscillatoryIntegrand,
    boundary_reduce,
    collocation_nodes,
    collocation_set,
    integrate_element,
    integrate_mesh,
    levin2d_solve,
    monomial_basis,
    pullback,
    vandermonde_condition,
)
from src.core.oracle import oracle_2d, oracle_helmholtz_boundary, planewave_reference_triangle, planewave_unit_square


def _integrand(f, g, grad_g):
    return OscillatoryIntegrand(f=f, g=g, grad_g=grad_g)


def _quadratic(omega, center=(0.0, 0.0)):
    return make_integrand(IntegrandSpec(kind=IntegrandKind.QUADRATIC, omega=omega, center=center))


def _random_field(rng, degree, cell):
    basis = monomial_basis(degree)
    coeffs = rng.standard_normal((2, basis.size)) + 1j * rng.standard_normal((2, basis.size))
    return LevinField(coeffs, basis, CellFrame.of(cell), 0.0, 1.0)


# ---------------------------------------------------------------------------
# pullback


def test_pullback_identity_map(flat_integrand):
    ref = pullback(CurvedTriangle.straight([[0, 0], [1, 0], [0, 1]]), flat_integrand)
    pts = np.array([[0.2, 0.3], [0.0, 0.0]])
    np.testing.assert_allclose(ref.amplitude(pts), 1.0)
    np.testing.assert_allclose(ref.phase(pts), 0.0)


def test_pullback_scales_by_determinant(flat_integrand):
    ref = pullback(CurvedTriangle.straight([[0, 0], [2, 0], [0, 3]]), flat_integrand)
    np.testing.assert_allclose(ref.amplitude(np.array([[0.1, 0.1]])), 6.0)


def test_pullback_gradient_on_curved_element(curved_triangle):
    ref = pullback(curved_triangle, _quadratic(3.0, (-0.5, -0.5)))
    pts = np.array([[0.2, 0.3], [0.5, 0.1], [0.1, 0.7]])
    assert ref.check_gradient(pts)
    f, g, grad = ref.evaluate(pts)
    np.testing.assert_allclose(grad, ref.phase_gradient(pts))
    np.testing.assert_allclose(f, ref.amplitude(pts))


# ---------------------------------------------------------------------------
# basis and nodes


@pytest.mark.parametrize("degree", [1, 4, 8])
def test_basis_size(degree):
    assert monomial_basis(degree).size == (degree + 1) * (degree + 2) // 2


@pytest.mark.parametrize("degree", [2, 10, 12])
def test_collocation_nodes_are_unisolvent_and_well_conditioned(degree):
    nodes = collocation_nodes(degree)
    assert nodes.shape == ((degree + 1) * (degree + 2) // 2, 2)
    assert np.all(nodes >= 0.0) and np.all(nodes.sum(axis=1) <= 1.0 + 1e-14)
    assert len({tuple(np.round(p, 12)) for p in nodes}) == nodes.shape[0]
    assert vandermonde_condition(nodes, degree) < 1e6


def test_collocation_set_lives_in_sub_cell():
    cell = subdivide_reference(REFERENCE_CELL)[3]
    nodes = collocation_set(10, cell).nodes
    lo, hi = cell.vertices.min(axis=0), cell.vertices.max(axis=0)
    assert np.all(nodes >= lo - 1e-14) and np.all(nodes <= hi + 1e-14)


# ---------------------------------------------------------------------------
# single-cell solve


def test_constant_rhs_solves_exactly(flat_integrand):
    field = levin2d_solve(flat_integrand, REFERENCE_CELL, Levin2dConfig(k=2, ell=4))
    assert field.residual_inf <= 1e-12


def test_linear_phase_residual_meets_tolerance(levin_cfg):
    osc = _integrand(
        lambda x: np.ones(x.shape[:-1], dtype=complex),
        lambda x: 50.0 * x[..., 0],
        lambda x: np.broadcast_to([50.0, 0.0], x.shape).copy(),
    )
    field = levin2d_solve(osc, REFERENCE_CELL, levin_cfg)
    assert field.residual_inf <= levin_cfg.residual_tol * field.f_scale
    assert np.all(np.isfinite(field.coefficients))


def test_polynomial_rhs_has_polynomial_solution(levin_cfg):
    osc = _integrand(
        lambda x: x[..., 0] + 1j * x[..., 1],
        lambda x: np.zeros(x.shape[:-1]),
        lambda x: np.zeros(x.shape),
    )
    field = levin2d_solve(osc, REFERENCE_CELL, levin_cfg)
    assert field.residual_inf <= 1e-12
    pts, _ = triangle_rule(5)
    np.testing.assert_allclose(field.divergence(pts), pts[:, 0] + 1j * pts[:, 1], atol=1e-11)


# ---------------------------------------------------------------------------
# boundary reduction


def test_boundary_of_linear_field(flat_integrand, cfg1d):
    """p = (u, 0) has divergence 1, so the flux through the reference triangle is 1/2."""
    basis = monomial_basis(1)
    # u = 0.5 + 0.5 u_hat, so q_x = u / 0.5 = 1 + u_hat
    field = LevinField(np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 0.0]], dtype=complex), basis, CellFrame.of(REFERENCE_CELL), 0.0, 1.0)
    np.testing.assert_allclose(field.evaluate(np.array([[0.3, 0.6]])), [[0.3, 0.0]], atol=1e-15)
    assert boundary_reduce(field, flat_integrand, REFERENCE_CELL, cfg1d) == pytest.approx(0.5, abs=1e-13)


def test_zero_field_has_zero_flux(flat_integrand, cfg1d):
    basis = monomial_basis(3)
    field = LevinField(np.zeros((2, basis.size), dtype=complex), basis, CellFrame.of(REFERENCE_CELL), 0.0, 1.0)
    assert boundary_reduce(field, flat_integrand, REFERENCE_CELL, cfg1d) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("seed", range(20))
def test_divergence_theorem_for_random_fields(flat_integrand, cfg1d, seed):
    rng = np.random.default_rng(seed)
    cells = [REFERENCE_CELL, subdivide_reference(REFERENCE_CELL)[3], subdivide_reference(subdivide_reference(REFERENCE_CELL)[1])[2]]
    cell = cells[seed % 3]
    field = _random_field(rng, 1 + seed % 8, cell)
    pts, w = triangle_rule(12, cell)
    volume = complex(w @ field.divergence(pts))
    closed = boundary_reduce(field, flat_integrand, cell, cfg1d)
    assert abs(closed - volume) <= 1e-11 * max(1.0, abs(volume))


# ---------------------------------------------------------------------------
# adaptive integration


def test_area_of_reference_triangle(reftri_mesh, flat_integrand, levin_cfg):
    result = integrate_element(reftri_mesh.elements[0], flat_integrand, levin_cfg)
    assert result.value == pytest.approx(0.5, abs=1e-13)
    assert result.n_leaves == 1
    assert result.svd_calls >= 1


@pytest.mark.parametrize("omega", [0.0, 1e-3, 1.0, 1e2, 1e3, 1e5])
def test_planewave_on_reference_triangle(reftri_mesh, planewave, levin_cfg, omega):
    result = integrate_mesh(reftri_mesh, planewave(omega), levin_cfg)
    assert abs(result.value - planewave_reference_triangle(omega)) <= 1e-11


def test_leaf_count_independent_of_frequency(reftri_mesh, planewave, levin_cfg):
    leaves = {integrate_mesh(reftri_mesh, planewave(omega), levin_cfg).n_leaves for omega in (1e2, 1e3, 1e4, 1e5)}
    assert len(leaves) == 1


def test_unit_square_separable_planewave(unitsquare_mesh, planewave, levin_cfg):
    omega = 500.0 * np.sqrt(2.0)
    result = integrate_mesh(unitsquare_mesh, planewave(omega, (1.0, 1.0)), levin_cfg)
    expected = planewave_unit_square(omega, (2 ** -0.5, 2 ** -0.5))
    assert abs(result.value - expected) <= 1e-10
    assert abs(expected - ((np.exp(500j) - 1) / 500j) ** 2) <= 1e-14


def test_unit_square_area(unitsquare_mesh, flat_integrand, levin_cfg):
    assert integrate_mesh(unitsquare_mesh, flat_integrand, levin_cfg).value == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("omega", [0.0, 1e-3])
def test_low_frequency_quadratic_matches_oracle(reftri_mesh, levin_cfg, oracle_cfg, omega):
    osc = _quadratic(omega, (0.3, 0.2))
    value = integrate_mesh(reftri_mesh, osc, levin_cfg).value
    assert abs(value - oracle_2d(reftri_mesh, osc, oracle_cfg)) <= 1e-11


@pytest.mark.slow
def test_stationary_point_at_vertex(reftri_mesh, levin_cfg, oracle_cfg):
    osc = _quadratic(100.0)
    result = integrate_mesh(reftri_mesh, osc, levin_cfg)
    assert abs(result.value - oracle_2d(reftri_mesh, osc, oracle_cfg)) <= 1e-8
    assert result.n_leaves > 1


@pytest.mark.slow
@pytest.mark.parametrize("omega", [1e2, 1e3])
def test_stationary_point_inside_domain(unitsquare_mesh, levin_cfg, oracle_cfg, omega):
    osc = _quadratic(omega, (0.4, 0.3))
    result = integrate_mesh(unitsquare_mesh, osc, levin_cfg)
    assert abs(result.value - oracle_2d(unitsquare_mesh, osc, oracle_cfg)) <= 1e-8


@pytest.mark.slow
def test_forced_refinement_is_consistent(reftri_mesh, levin_cfg):
    osc = _quadratic(100.0)
    base = integrate_mesh(reftri_mesh, osc, levin_cfg)
    forced = integrate_mesh(reftri_mesh, osc, levin_cfg, force_levels=1)
    assert forced.n_leaves >= 4
    assert abs(forced.value - base.value) <= 10.0 * base.error_estimate + 1e-13


@pytest.mark.slow
@pytest.mark.parametrize("omega", [1e2, 1e3])
def test_helmholtz_on_resonance_domain(resonance_mesh, levin_cfg, oracle_cfg, omega):
    osc = make_integrand(IntegrandSpec(kind=IntegrandKind.HELMHOLTZ, omega=omega))
    value = integrate_mesh(resonance_mesh, osc, levin_cfg).value
    assert abs(value - oracle_helmholtz_boundary(resonance_mesh, omega, oracle_cfg)) <= 1e-8


def _best_time(run, repeats=2):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        result = run()
        best = min(best, time.perf_counter() - start)
    return result, best


@pytest.mark.slow
def test_stationary_point_leaf_growth_is_logarithmic(unitsquare_mesh, levin_cfg):
    """Ten times the frequency adds refinement levels around the stationary point, not ten times the leaves."""
    low = integrate_mesh(unitsquare_mesh, _quadratic(1e2, (0.4, 0.3)), levin_cfg)
    high = integrate_mesh(unitsquare_mesh, _quadratic(1e3, (0.4, 0.3)), levin_cfg)
    assert high.n_leaves <= 2.5 * low.n_leaves


@pytest.mark.slow
def test_radial_phase_on_resonance_domain_is_frequency_independent(resonance_mesh, levin_cfg):
    """The inner arc is resonant for g = omega r; leaves and run time stay flat from 1e2 to 1e5."""
    results, times = [], []
    for omega in (1e2, 1e3, 1e4, 1e5):
        osc = make_integrand(IntegrandSpec(kind=IntegrandKind.RADIAL, omega=omega))
        result, elapsed = _best_time(lambda: integrate_mesh(resonance_mesh, osc, levin_cfg))
        results.append(result)
        times.append(elapsed)
    assert len({r.n_leaves for r in results}) == 1
    assert results[-1].n_boundary_segments <= 2 * results[0].n_boundary_segments
    assert times[-1] <= 3.0 * times[0]


@pytest.mark.slow
def test_radial_phase_on_resonance_domain_is_accurate(resonance_mesh, levin_cfg, oracle_cfg):
    low = make_integrand(IntegrandSpec(kind=IntegrandKind.RADIAL, omega=1e2))
    assert abs(integrate_mesh(resonance_mesh, low, levin_cfg).value - oracle_2d(resonance_mesh, low, oracle_cfg)) <= 1e-8

    high = make_integrand(IntegrandSpec(kind=IntegrandKind.RADIAL, omega=1e3))
    base = integrate_mesh(resonance_mesh, high, levin_cfg)
    forced = integrate_mesh(resonance_mesh, high, levin_cfg, force_levels=1)
    assert abs(forced.value - base.value) <= 1e-9


@pytest.mark.slow
def test_helmholtz_run_time_is_frequency_independent(resonance_mesh, levin_cfg):
    timings = []
    for omega in (1e2, 1e3):
        osc = make_integrand(IntegrandSpec(kind=IntegrandKind.HELMHOLTZ, omega=omega))
        timings.append(_best_time(lambda: integrate_mesh(resonance_mesh, osc, levin_cfg))[1])
    assert timings[1] <= 3.0 * timings[0]


def test_thread_count_does_not_change_result(resonance_mesh, levin_cfg):
    osc = make_integrand(IntegrandSpec(kind=IntegrandKind.RADIAL, omega=20.0))
    serial = integrate_mesh(resonance_mesh, osc, levin_cfg, threads=1)
    pooled = integrate_mesh(resonance_mesh, osc, levin_cfg, threads=3)
    assert serial == pooled


def test_depth_limit_names_element_and_cell(reftri_mesh):
    cfg = Levin2dConfig(max_depth=0)
    with pytest.raises(NonConvergenceError) as exc:
        integrate_mesh(reftri_mesh, _quadratic(1e3), cfg)
    assert exc.value.element_index == 0
    assert exc.value.cell_path == ()
    assert "root" in str(exc.value)
