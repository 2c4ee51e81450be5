import numpy as np
import pytest

from common import IntegrandKind, IntegrandSpec, Levin1dConfig, Levin2dConfig, OracleConfig, RunSettings
from src.core.geometry import CurvedTriangle, EdgeCurve
from src.core.integrands import make_integrand
from src.core.levin_multivariate import OscillatoryIntegrand
from src.operations.domains import reference_triangle, resonance_sector, unit_square


@pytest.fixture
def cfg1d():
    """Default univariate Levin settings."""
    return Levin1dConfig()


@pytest.fixture
def levin_cfg():
    """Default multivariate Levin settings (k = 8, ell = 10)."""
    return Levin2dConfig()


@pytest.fixture
def oracle_cfg():
    return OracleConfig()


@pytest.fixture
def settings():
    return RunSettings(threads=1)


@pytest.fixture(scope="session")
def reftri_mesh():
    return reference_triangle()


@pytest.fixture(scope="session")
def unitsquare_mesh():
    return unit_square()


@pytest.fixture(scope="session")
def resonance_mesh():
    return resonance_sector()


@pytest.fixture
def curved_triangle():
    """Reference triangle whose hypotenuse bulges outward by 0.05 at its midpoint."""
    vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    hypotenuse = EdgeCurve.from_coefficients([0.525, -0.5, -0.025], [0.525, 0.5, -0.025], 1)
    edges = (EdgeCurve.straight(vertices[0], vertices[1]), hypotenuse, EdgeCurve.straight(vertices[2], vertices[0]))
    return CurvedTriangle(vertices, edges)


@pytest.fixture
def planewave():
    """Factory for plane-wave integrands exp(i omega d.x)."""

    def build(omega, direction=(1.0, 0.0)):
        return make_integrand(IntegrandSpec(kind=IntegrandKind.PLANEWAVE, omega=omega, direction=direction))

    return build


@pytest.fixture
def flat_integrand():
    """Amplitude 1, zero phase."""
    return OscillatoryIntegrand(
        f=lambda x: np.ones(x.shape[:-1], dtype=complex),
        g=lambda x: np.zeros(x.shape[:-1]),
        grad_g=lambda x: np.zeros(x.shape),
        name="flat",
    )
