"""
Built-in oscillatory integrands.

planewave   f = 1, g = omega d.x
quadratic   f = 1, g = omega |x - c|^2
radial      f = 1, g = omega |x - c|
helmholtz   div(G grad u) with G = (i/4) H0(omega |x|) and u = |x|^2, split
            into a slowly varying amplitude and the Hankel phase theta_0
"""
import logging
from typing import NamedTuple

import numpy as np
from scipy.special import hankel1e

from common import IntegrandKind, IntegrandSpec
from src.core.errors import ContractError, IntegrandDomainError
from src.core.geometry import Mesh
from src.core.levin_multivariate import OscillatoryIntegrand

logger = logging.getLogger("integrands")

# smallest admissible distance from a radial/helmholtz center to the mesh
MIN_CENTER_DISTANCE = 1e-8


class HankelAmplitudePhase(NamedTuple):
    """H_nu(z) = M_nu(z) exp(i theta_nu(z)) for nu = 0, 1."""

    M0: np.ndarray
    theta0: np.ndarray
    M1: np.ndarray
    theta1: np.ndarray
    # theta1 - theta0 without the cancellation of two large phases
    phase_gap: np.ndarray


def _checked_argument(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)) or np.any(z <= 0.0):
        raise IntegrandDomainError("Hankel amplitude/phase requires finite z > 0")
    return z


def _offset_phase(nu: int, z: np.ndarray):
    """Modulus and theta_nu - (z - (2nu+1) pi/4), which stays inside (-pi/4, pi/4)."""
    h = hankel1e(nu, z) * np.exp(0.25j * (2 * nu + 1) * np.pi)
    return np.abs(h), np.angle(h)


def hankel_phase_amp(z) -> HankelAmplitudePhase:
    """
    Moduli and continuous phases of the first-kind Hankel functions of order 0 and 1.

    The phase is the asymptotic phase z - (2nu+1) pi/4 plus a bounded correction,
    so it needs no unwrapping and tends to the standard branch as z grows.

    Raises:
        IntegrandDomainError: If any z <= 0
    """
    z = _checked_argument(z)
    M0, a0 = _offset_phase(0, z)
    M1, a1 = _offset_phase(1, z)
    theta0 = (z - 0.25 * np.pi) + a0
    theta1 = (z - 0.75 * np.pi) + a1
    return HankelAmplitudePhase(M0, theta0, M1, theta1, -0.5 * np.pi + (a1 - a0))


def hankel_phase_derivative(z, M0=None) -> np.ndarray:
    """theta_0'(z) from the Wronskian, M0^2 theta_0' = 2 / (pi z)."""
    z = _checked_argument(z)
    if M0 is None:
        M0 = hankel_phase_amp(z).M0
    return 2.0 / (np.pi * z * M0 ** 2)


def _planewave(spec: IntegrandSpec) -> OscillatoryIntegrand:
    d = np.array(spec.direction)
    omega = spec.omega
    return OscillatoryIntegrand(
        f=lambda x: np.ones(x.shape[:-1], dtype=complex),
        g=lambda x: omega * (x @ d),
        grad_g=lambda x: np.broadcast_to(omega * d, x.shape).copy(),
        name=f"planewave(omega={omega:g})",
    )


def _quadratic(spec: IntegrandSpec) -> OscillatoryIntegrand:
    c = np.array(spec.center)
    omega = spec.omega
    return OscillatoryIntegrand(
        f=lambda x: np.ones(x.shape[:-1], dtype=complex),
        g=lambda x: omega * np.sum((x - c) ** 2, axis=-1),
        grad_g=lambda x: 2.0 * omega * (x - c),
        name=f"quadratic(omega={omega:g})",
    )


def _radial(spec: IntegrandSpec) -> OscillatoryIntegrand:
    c = np.array(spec.center)
    omega = spec.omega

    def grad(x):
        dx = x - c
        return omega * dx / np.linalg.norm(dx, axis=-1)[..., None]

    return OscillatoryIntegrand(
        f=lambda x: np.ones(x.shape[:-1], dtype=complex),
        g=lambda x: omega * np.linalg.norm(x - c, axis=-1),
        grad_g=grad,
        name=f"radial(omega={omega:g})",
    )


def _helmholtz(spec: IntegrandSpec) -> OscillatoryIntegrand:
    omega = spec.omega
    if omega <= 0.0:
        raise IntegrandDomainError("helmholtz integrand needs omega > 0 (H0 is singular at 0)")
    if spec.center != (0.0, 0.0):
        raise ContractError("helmholtz integrand is defined for the target at the origin only")

    def amplitude(x):
        r = np.linalg.norm(x, axis=-1)
        h = hankel_phase_amp(omega * r)
        return 1j * h.M0 - (0.5j * omega * r) * h.M1 * np.exp(1j * h.phase_gap)

    def phase(x):
        return hankel_phase_amp(omega * np.linalg.norm(x, axis=-1)).theta0

    def grad(x):
        r = np.linalg.norm(x, axis=-1)
        dtheta = hankel_phase_derivative(omega * r)
        return (omega * dtheta / r)[..., None] * x

    return OscillatoryIntegrand(f=amplitude, g=phase, grad_g=grad, name=f"helmholtz(omega={omega:g})")


_BUILDERS = {
    IntegrandKind.PLANEWAVE: _planewave,
    IntegrandKind.QUADRATIC: _quadratic,
    IntegrandKind.RADIAL: _radial,
    IntegrandKind.HELMHOLTZ: _helmholtz,
}


def make_integrand(spec: IntegrandSpec) -> OscillatoryIntegrand:
    """
    Build the integrand described by spec.

    Args:
        spec: Kind, frequency and per-kind parameters

    Returns:
        OscillatoryIntegrand with analytic phase gradient
    """
    osc = _BUILDERS[spec.kind](spec)
    logger.debug(f"Built integrand {osc.name}")
    return osc


def validate_integrand_domain(spec: IntegrandSpec, mesh: Mesh) -> None:
    """
    Reject radial/helmholtz integrands whose center touches the mesh.

    Checked on the physical images of a reference lattice of every element.

    Raises:
        IntegrandDomainError: If the center is closer than MIN_CENTER_DISTANCE to a sampled node
    """
    if spec.kind not in (IntegrandKind.RADIAL, IntegrandKind.HELMHOLTZ):
        return
    center = np.zeros(2) if spec.kind == IntegrandKind.HELMHOLTZ else np.array(spec.center)
    distance = float(np.min(np.linalg.norm(mesh.reference_nodes - center, axis=1)))
    if distance <= MIN_CENTER_DISTANCE:
        raise IntegrandDomainError(
            f"{spec.kind} integrand is singular at ({center[0]:g}, {center[1]:g}), which lies on the mesh"
        )
    logger.debug(f"{spec.kind} center is {distance:.3g} away from the mesh")
