"""
One-dimensional spectral toolkit.

Chebyshev extrema grids with their differentiation matrices, Chebyshev
expansions on an interval, and Gauss-Legendre rules.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import legendre as L

from src.core.errors import ContractError

logger = logging.getLogger("spectral1d")

DOMAIN_SLACK = 1e-12
MAX_GAUSS_POINTS = 128

ArrayLike = Union[float, np.ndarray, Sequence[float]]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ChebGrid:
    """Chebyshev extrema on [-1, 1] in ascending order."""

    n: int
    points: np.ndarray
    diff_matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class GaussRule:
    n: int
    nodes: np.ndarray
    weights: np.ndarray

    def on_interval(self, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
        """Nodes and weights mapped affinely to [a, b]."""
        half = 0.5 * (b - a)
        return 0.5 * (a + b) + half * self.nodes, half * self.weights


@lru_cache(maxsize=None)
def cheb_grid(n: int) -> ChebGrid:
    """
    Chebyshev extrema grid of n points with its spectral differentiation matrix.

    Args:
        n: Number of points, at least 2

    Returns:
        ChebGrid with ascending points -cos(j*pi/(n-1))
    """
    if n < 2:
        raise ContractError(f"Chebyshev grid needs at least 2 points, got {n}")
    N = n - 1
    j = np.arange(n)
    # sine form keeps the grid exactly antisymmetric
    x = np.sin(np.pi * (2 * j - N) / (2 * N))
    w = np.where(j % 2 == 0, 1.0, -1.0)
    w[0] *= 0.5
    w[-1] *= 0.5

    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    D = (w[None, :] / w[:, None]) / dx
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return ChebGrid(n, _frozen(x), _frozen(D))


@lru_cache(maxsize=None)
def _fit_matrix(n: int) -> np.ndarray:
    """Values on the n-point extrema grid -> Chebyshev coefficients (discrete orthogonality)."""
    N = n - 1
    x = cheb_grid(n).points
    T = C.chebvander(x, N).T
    h = np.ones(n)
    h[0] = h[-1] = 0.5
    gamma = np.ones(n)
    gamma[0] = gamma[-1] = 2.0
    return _frozen((2.0 / N) * (T * h[None, :]) / gamma[:, None])


@dataclass(frozen=True, eq=False)
class ChebExpansion:
    """Chebyshev-T series on [a, b]."""

    coefficients: np.ndarray
    a: float = -1.0
    b: float = 1.0

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coefficients, dtype=complex))
        if coeffs.ndim != 1 or coeffs.size == 0 or not np.all(np.isfinite(coeffs)):
            raise ContractError("Chebyshev coefficients must be a nonempty finite sequence")
        if not self.b > self.a:
            raise ContractError(f"invalid expansion domain [{self.a}, {self.b}]")
        object.__setattr__(self, "coefficients", _frozen(coeffs))

    @property
    def domain(self) -> Tuple[float, float]:
        return (self.a, self.b)

    def to_reference(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        slack = DOMAIN_SLACK * max(1.0, abs(self.a), abs(self.b))
        if np.any(t < self.a - slack) or np.any(t > self.b + slack):
            raise ContractError(f"evaluation point outside [{self.a}, {self.b}]")
        s = (2.0 * t - self.a - self.b) / (self.b - self.a)
        return np.clip(s, -1.0, 1.0)

    def __call__(self, t: ArrayLike) -> np.ndarray:
        return C.chebval(self.to_reference(t), self.coefficients)


def cheb_fit(values: Sequence[complex], domain: Tuple[float, float] = (-1.0, 1.0)) -> ChebExpansion:
    """
    Interpolate samples on the Chebyshev extrema grid mapped to domain.

    Args:
        values: Samples at cheb_grid(len(values)) points mapped to domain
        domain: Interval (a, b)

    Returns:
        ChebExpansion of degree len(values) - 1
    """
    values = np.asarray(values, dtype=complex)
    if values.ndim != 1 or values.size < 2:
        raise ContractError(f"cheb_fit needs at least 2 samples, got shape {values.shape}")
    coeffs = _fit_matrix(values.size) @ values
    return ChebExpansion(coeffs, float(domain[0]), float(domain[1]))


def cheb_sample_points(n: int, domain: Tuple[float, float]) -> np.ndarray:
    """Grid points of cheb_grid(n) mapped to domain."""
    a, b = domain
    return 0.5 * (a + b) + 0.5 * (b - a) * cheb_grid(n).points


def cheb_eval(e: ChebExpansion, t: ArrayLike) -> np.ndarray:
    """Clenshaw evaluation of e at t (scalar or array)."""
    return e(t)


def cheb_deriv(e: ChebExpansion) -> ChebExpansion:
    """Derivative expansion on the same domain."""
    coeffs = C.chebder(e.coefficients) * (2.0 / (e.b - e.a))
    if coeffs.size == 0:
        coeffs = np.zeros(1, dtype=complex)
    return ChebExpansion(coeffs, e.a, e.b)


def cheb_quotient(d: ChebExpansion) -> ChebExpansion:
    """
    Smooth quotient q(t) = d(t) / (t (1 - t)) of an expansion on [0, 1] vanishing at both ends.

    Endpoint values come from l'Hopital: q(0) = d'(0), q(1) = -d'(1).
    """
    if d.a != 0.0 or d.b != 1.0:
        raise ContractError("cheb_quotient expects an expansion on [0, 1]")
    n = d.coefficients.size + 2
    t = cheb_sample_points(n, (0.0, 1.0))
    dd = cheb_deriv(d)
    q = np.empty(n, dtype=complex)
    interior = t[1:-1]
    q[1:-1] = d(interior) / (interior * (1.0 - interior))
    q[0] = dd(0.0)
    q[-1] = -dd(1.0)
    return cheb_fit(q, (0.0, 1.0))


@lru_cache(maxsize=None)
def gauss_rule(n: int) -> GaussRule:
    """
    n-point Gauss-Legendre rule on [-1, 1].

    Args:
        n: Number of nodes, 1 <= n <= 128

    Returns:
        GaussRule exact for polynomials of degree <= 2n - 1
    """
    if not 1 <= n <= MAX_GAUSS_POINTS:
        raise ContractError(f"Gauss-Legendre rule size must be in [1, {MAX_GAUSS_POINTS}], got {n}")
    nodes, weights = L.leggauss(n)
    return GaussRule(n, _frozen(nodes), _frozen(weights))
