import mpmath
import numpy as np
import pytest
from pydantic import ValidationError
from scipy.special import hankel1

from common import IntegrandKind, IntegrandSpec
from src.core.errors import ContractError, IntegrandDomainError
from src.core.integrands import (
    hankel_phase_amp,
    hankel_phase_derivative,
    make_integrand,
    validate_integrand_domain,
)


def test_amplitude_phase_reproduces_hankel():
    """M e^{i theta} against mpmath at 30 digits on 200 log-spaced points of [0.1, 1e4]."""
    z = np.logspace(-1.0, 4.0, 200)
    with mpmath.workdps(30):
        h0 = np.array([complex(mpmath.hankel1(0, mpmath.mpf(s))) for s in z])
        h1 = np.array([complex(mpmath.hankel1(1, mpmath.mpf(s))) for s in z])
    h = hankel_phase_amp(z)
    # theta is a float of size about z, so its last bit sets a floor
    tol = 1e-12 + 4.0 * np.finfo(float).eps * z
    assert np.all(np.abs(h.M0 * np.exp(1j * h.theta0) - h0) <= tol * np.abs(h0))
    assert np.all(np.abs(h.M1 * np.exp(1j * h.theta1) - h1) <= tol * np.abs(h1))


@pytest.mark.parametrize("z", [0.3, 25.0, 1e5])
def test_amplitude_against_high_precision(z):
    """Moduli agree with mpmath evaluated at 30 digits."""
    with mpmath.workdps(30):
        m0 = float(abs(mpmath.hankel1(0, z)))
        m1 = float(abs(mpmath.hankel1(1, z)))
    h = hankel_phase_amp(z)
    assert h.M0 == pytest.approx(m0, rel=1e-12)
    assert h.M1 == pytest.approx(m1, rel=1e-12)


def test_phase_is_continuous_and_increasing():
    z = np.linspace(0.1, 60.0, 4001)
    theta0 = hankel_phase_amp(z).theta0
    steps = np.diff(theta0)
    assert np.all(steps > 0.0)
    # no branch jumps: each step is bounded by the local derivative
    assert np.max(steps) < 2.0 * np.max(hankel_phase_derivative(z)) * (z[1] - z[0])


def test_phase_tends_to_asymptote():
    z = np.array([1e3, 1e4, 1e5])
    h = hankel_phase_amp(z)
    np.testing.assert_allclose(h.theta0 - (z - 0.25 * np.pi), -0.125 / z, rtol=1e-3)
    np.testing.assert_allclose(h.phase_gap, -0.5 * np.pi, atol=1e-3)


@pytest.mark.parametrize("z", [0.5, 2.0, 7.5, 40.0])
def test_phase_gap_matches_difference(z):
    h = hankel_phase_amp(z)
    assert h.phase_gap == pytest.approx(h.theta1 - h.theta0, abs=1e-13)


@pytest.mark.parametrize("z", [0.5, 2.0, 20.0])
def test_wronskian_phase_derivative(z):
    """theta_0' from the Wronskian against a fourth-order central difference."""
    h = 1e-3
    theta = lambda s: hankel_phase_amp(s).theta0
    fd = (-theta(z + 2 * h) + 8 * theta(z + h) - 8 * theta(z - h) + theta(z - 2 * h)) / (12 * h)
    assert hankel_phase_derivative(z) == pytest.approx(fd, rel=1e-9)


@pytest.mark.parametrize("z", [0.0, -1.0, np.nan])
def test_hankel_domain(z):
    with pytest.raises(IntegrandDomainError):
        hankel_phase_amp(z)


def test_helmholtz_value_is_divergence_of_green_flux():
    """f exp(i g) = i H0(omega r) - (i omega r / 2) H1(omega r)."""
    omega = 100.0
    osc = make_integrand(IntegrandSpec(kind=IntegrandKind.HELMHOLTZ, omega=omega))
    x = np.array([[1.0, 0.0], [0.6, 0.8], [1.2, 1.1]])
    r = np.linalg.norm(x, axis=1)
    expected = 1j * hankel1(0, omega * r) - 0.5j * omega * r * hankel1(1, omega * r)
    np.testing.assert_allclose(osc.value(x), expected, rtol=1e-12)


@pytest.mark.parametrize(
    "spec",
    [
        IntegrandSpec(kind=IntegrandKind.PLANEWAVE, omega=7.0, direction=(1.0, 2.0)),
        IntegrandSpec(kind=IntegrandKind.QUADRATIC, omega=5.0, center=(0.2, -0.3)),
        IntegrandSpec(kind=IntegrandKind.RADIAL, omega=12.0, center=(-0.1, 0.4)),
        IntegrandSpec(kind=IntegrandKind.HELMHOLTZ, omega=10.0),
    ],
)
def test_analytic_gradients(spec):
    osc = make_integrand(spec)
    x = np.array([[0.9, 0.3], [1.1, 0.7], [0.5, 1.4]])
    assert osc.check_gradient(x)
    assert osc.amplitude(x).dtype == complex
    assert osc.phase(x).shape == (3,)


def test_planewave_direction_is_normalized():
    spec = IntegrandSpec(kind=IntegrandKind.PLANEWAVE, omega=1.0, direction=(3.0, 4.0))
    assert spec.direction == pytest.approx((0.6, 0.8))
    osc = make_integrand(spec)
    assert osc.phase(np.array([[1.0, 1.0]]))[0] == pytest.approx(1.4)


def test_zero_direction_is_rejected():
    with pytest.raises(ValidationError):
        IntegrandSpec(kind=IntegrandKind.PLANEWAVE, omega=1.0, direction=(0.0, 0.0))


def test_negative_frequency_is_rejected():
    with pytest.raises(ValidationError):
        IntegrandSpec(kind=IntegrandKind.QUADRATIC, omega=-1.0)


def test_helmholtz_needs_positive_frequency():
    with pytest.raises(IntegrandDomainError):
        make_integrand(IntegrandSpec(kind=IntegrandKind.HELMHOLTZ, omega=0.0))


def test_helmholtz_target_is_the_origin():
    with pytest.raises(ContractError):
        make_integrand(IntegrandSpec(kind=IntegrandKind.HELMHOLTZ, omega=1.0, center=(1.0, 0.0)))


def test_radial_center_on_mesh_is_rejected(reftri_mesh):
    with pytest.raises(IntegrandDomainError):
        validate_integrand_domain(IntegrandSpec(kind=IntegrandKind.RADIAL, omega=1.0), reftri_mesh)


def test_centers_away_from_mesh_are_accepted(reftri_mesh, resonance_mesh):
    validate_integrand_domain(IntegrandSpec(kind=IntegrandKind.RADIAL, omega=1.0, center=(2.0, 2.0)), reftri_mesh)
    validate_integrand_domain(IntegrandSpec(kind=IntegrandKind.HELMHOLTZ, omega=1.0), resonance_mesh)
    # phases without a singular point need no check
    validate_integrand_domain(IntegrandSpec(kind=IntegrandKind.QUADRATIC, omega=1.0), reftri_mesh)
