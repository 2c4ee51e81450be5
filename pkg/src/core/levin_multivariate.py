"""
Multivariate adaptive Levin method on curved triangular elements.

On each reference sub-cell the Levin PDE  div p + i grad g . p = f  is
collocated with a monomial vector field, solved by truncated SVD, and the
integral is reduced by the divergence theorem to three straight boundary
segments that go to the univariate adaptive Levin solver. Cells whose
residual is too large are split in four.
"""
import logging
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.special import eval_jacobi

from common import Levin1dConfig, Levin2dConfig, QuadratureResult
from src.core.errors import NonConvergenceError
from src.core.geometry import REFERENCE_CELL, CurvedTriangle, Mesh, RefCell, subdivide_reference
from src.core.levin_univariate import LineOscillator, WorkTally, levin1d_adaptive
from src.core.numkernel import tsvd_solve
from src.core.spectral1d import cheb_grid

logger = logging.getLogger("levin_multivariate")

CONDITION_BOUND = 1e6

Field2 = Callable[[np.ndarray], np.ndarray]


# ---------------------------------------------------------------------------
# integrands


class Integrand(ABC):
    """Amplitude f, real phase g and grad g, evaluated on point arrays of shape (N, 2)."""

    @abstractmethod
    def amplitude(self, x: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def phase(self, x: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def phase_gradient(self, x: np.ndarray) -> np.ndarray:
        pass

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.amplitude(x), self.phase(x), self.phase_gradient(x)

    def value(self, x: np.ndarray) -> np.ndarray:
        """Full oscillatory integrand f exp(i g)."""
        f, g = self.amplitude(x), self.phase(x)
        return f * np.exp(1j * g)

    def check_gradient(self, x: np.ndarray, step: float = 1e-6, rtol: float = 1e-5) -> bool:
        """Diagnostic: grad g against central differences of g."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        grad = self.phase_gradient(x)
        fd = np.empty_like(grad)
        for axis in range(2):
            e = np.zeros(2)
            e[axis] = step
            fd[:, axis] = (self.phase(x + e) - self.phase(x - e)) / (2.0 * step)
        scale = np.maximum(1.0, np.linalg.norm(fd, axis=1))
        return bool(np.all(np.linalg.norm(fd - grad, axis=1) <= rtol * scale))


@dataclass(frozen=True)
class OscillatoryIntegrand(Integrand):
    """Integrand given by three vectorized callables."""

    f: Field2
    g: Field2
    grad_g: Field2
    name: str = "custom"

    def amplitude(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.f(x), dtype=complex), x.shape[:-1])

    def phase(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.g(x), dtype=float), x.shape[:-1])

    def phase_gradient(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.grad_g(x), dtype=float), x.shape)


class PulledBackIntegrand(Integrand):
    """
    Integrand on the reference triangle of a curved element.

    f~ = f(map) det J,  g~ = g(map),  grad g~ = J^T grad g(map).
    """

    def __init__(self, element: CurvedTriangle, osc: Integrand):
        self.element = element
        self.osc = osc

    def _geometry(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        return self.element.map_and_jacobian(x[..., 0], x[..., 1])

    def amplitude(self, x: np.ndarray) -> np.ndarray:
        X, J = self._geometry(x)
        return self.osc.amplitude(X) * self.element.check_jacobian(J)

    def phase(self, x: np.ndarray) -> np.ndarray:
        X, _ = self._geometry(x)
        return self.osc.phase(X)

    def phase_gradient(self, x: np.ndarray) -> np.ndarray:
        X, J = self._geometry(x)
        return np.einsum("...ij,...i->...j", J, self.osc.phase_gradient(X))

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        X, J = self._geometry(x)
        det = self.element.check_jacobian(J)
        f, g, grad = self.osc.evaluate(X)
        return f * det, g, np.einsum("...ij,...i->...j", J, grad)


def pullback(T: CurvedTriangle, osc: Integrand) -> PulledBackIntegrand:
    return PulledBackIntegrand(T, osc)


# ---------------------------------------------------------------------------
# basis and nodes


@dataclass(frozen=True, eq=False)
class MonomialBasis:
    """Monomials u^a v^b, a + b <= degree, in the scaled-centered coordinates of a cell."""

    degree: int
    exponents: np.ndarray

    @property
    def size(self) -> int:
        return self.exponents.shape[0]

    def evaluate(self, local: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Values and first partials at local points (N, 2); each result is (N, size)."""
        a, b = self.exponents[:, 0], self.exponents[:, 1]
        uh, vh = local[:, :1], local[:, 1:2]
        ua, vb = uh ** a, vh ** b
        du = a * uh ** np.maximum(a - 1, 0) * vb
        dv = b * vh ** np.maximum(b - 1, 0) * ua
        return ua * vb, du, dv


@lru_cache(maxsize=None)
def monomial_basis(degree: int) -> MonomialBasis:
    exps = np.array([(d - j, j) for d in range(degree + 1) for j in range(d + 1)])
    exps.flags.writeable = False
    return MonomialBasis(degree, exps)


@dataclass(frozen=True)
class CellFrame:
    """Affine map of a cell's bounding box onto [-1, 1]^2."""

    center: Tuple[float, float]
    half: Tuple[float, float]

    @classmethod
    def of(cls, cell: RefCell) -> "CellFrame":
        lo, hi = cell.vertices.min(axis=0), cell.vertices.max(axis=0)
        c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
        return cls((float(c[0]), float(c[1])), (float(h[0]), float(h[1])))

    def local(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - np.array(self.center)) / np.array(self.half)


@lru_cache(maxsize=None)
def collocation_nodes(degree: int) -> np.ndarray:
    """
    Blyth-Pozrikidis nodes of the given degree on the unit right triangle.

    Built from Chebyshev-Lobatto points z on [0, 1]; the node of multi-index
    (i, j, k), i + j + k = degree, is ((1 + 2z_i - z_j - z_k) / 3, (1 + 2z_j - z_i - z_k) / 3).
    """
    z = 0.5 * (1.0 + cheb_grid(degree + 1).points) if degree > 0 else np.zeros(1)
    nodes = []
    for j in range(degree + 1):
        for i in range(degree + 1 - j):
            k = degree - i - j
            nodes.append(((1.0 + 2.0 * z[i] - z[j] - z[k]) / 3.0, (1.0 + 2.0 * z[j] - z[i] - z[k]) / 3.0))
    nodes = np.clip(np.array(nodes), 0.0, 1.0)
    nodes.flags.writeable = False
    return nodes


@dataclass(frozen=True, eq=False)
class CollocationSet:
    degree: int
    nodes: np.ndarray

    @property
    def size(self) -> int:
        return self.nodes.shape[0]


def collocation_set(degree: int, cell: RefCell = REFERENCE_CELL) -> CollocationSet:
    return CollocationSet(degree, cell.to_physical(collocation_nodes(degree)))


def dubiner_vandermonde(points: np.ndarray, degree: int) -> np.ndarray:
    """Orthonormal (Dubiner) polynomial Vandermonde on the unit right triangle."""
    r, s = 2.0 * points[:, 0] - 1.0, 2.0 * points[:, 1] - 1.0
    denom = np.where(np.isclose(s, 1.0), 1.0, 1.0 - s)
    a = np.where(np.isclose(s, 1.0), -1.0, 2.0 * (1.0 + r) / denom - 1.0)
    cols = []
    for i in range(degree + 1):
        h1 = eval_jacobi(i, 0.0, 0.0, a) * np.sqrt((2 * i + 1) / 2.0)
        for j in range(degree + 1 - i):
            alpha = 2 * i + 1
            h2 = eval_jacobi(j, alpha, 0.0, s) * np.sqrt((2 * j + alpha + 1) / 2.0 ** (alpha + 1))
            cols.append(np.sqrt(2.0) * h1 * h2 * (1.0 - s) ** i)
    return np.column_stack(cols)


def vandermonde_condition(points: np.ndarray, degree: int) -> float:
    return float(np.linalg.cond(dubiner_vandermonde(points, degree)))


# ---------------------------------------------------------------------------
# Levin solve on one cell


@dataclass(frozen=True, eq=False)
class LevinField:
    """
    Vector field p solving the Levin PDE on one reference sub-cell.

    coefficients[c] are the monomial coefficients of the scaled component
    q_c; the reference-coordinate field is p_c = half_c * q_c.
    """

    coefficients: np.ndarray
    basis: MonomialBasis
    frame: CellFrame
    residual_inf: float
    f_scale: float

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        phi, _, _ = self.basis.evaluate(self.frame.local(x))
        q = phi @ self.coefficients.T
        return q * np.array(self.frame.half)

    def divergence(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        _, du, dv = self.basis.evaluate(self.frame.local(x))
        return du @ self.coefficients[0] + dv @ self.coefficients[1]


def _assemble(
    osc_ref: Integrand, nodes: np.ndarray, frame: CellFrame, basis: MonomialBasis
) -> Tuple[np.ndarray, np.ndarray]:
    f, _, grad = osc_ref.evaluate(nodes)
    phi, du, dv = basis.evaluate(frame.local(nodes))
    hx, hy = frame.half
    cols_x = du + 1j * (hx * grad[:, 0])[:, None] * phi
    cols_y = dv + 1j * (hy * grad[:, 1])[:, None] * phi
    return np.hstack([cols_x, cols_y]), np.asarray(f, dtype=complex)


def levin2d_solve(
    osc_ref: Integrand, cell: RefCell, cfg: Levin2dConfig, tally: Optional[WorkTally] = None
) -> LevinField:
    """
    Collocate the Levin PDE on a reference sub-cell.

    Args:
        osc_ref: Integrand in reference coordinates
        cell: Sub-cell of the reference triangle
        cfg: Degrees k < ell and truncation threshold
        tally: Optional counters

    Returns:
        LevinField with the sup-norm residual over an independent degree ell + 2 node set
    """
    frame = CellFrame.of(cell)
    basis = monomial_basis(cfg.k)
    A, f = _assemble(osc_ref, cell.to_physical(collocation_nodes(cfg.ell)), frame, basis)
    x, _ = tsvd_solve(A, f, cfg.eps_svd)
    if tally is not None:
        tally.svd_calls += 1

    A_check, f_check = _assemble(osc_ref, cell.to_physical(collocation_nodes(cfg.ell + 2)), frame, basis)
    residual = float(np.max(np.abs(A_check @ x - f_check)))
    f_scale = max(1.0, float(np.max(np.abs(f))))
    return LevinField(x.reshape(2, basis.size), basis, frame, residual, f_scale)


def boundary_reduce(
    field: LevinField,
    osc_ref: Integrand,
    cell: RefCell,
    cfg1d: Levin1dConfig,
    tally: Optional[WorkTally] = None,
) -> complex:
    """
    Closed integral of n . p exp(i g~) around the cell, edge by edge.

    Each straight edge gamma(t) = A + t (B - A) becomes a LineOscillator with
    F = p(gamma) . (e_y, -e_x), G = g~(gamma), G' = grad g~(gamma) . e.
    """
    total = 0j
    for start, end in cell.edges():
        e = end - start
        n_speed = np.array([e[1], -e[0]])

        def along(t, start=start, e=e):
            return start + np.asarray(t, dtype=float)[..., None] * e

        line = LineOscillator(
            F=lambda t, along=along, n_speed=n_speed: field.evaluate(along(t)) @ n_speed,
            Gp=lambda t, along=along, e=e: osc_ref.phase_gradient(along(t)) @ e,
            G=lambda t, along=along: osc_ref.phase(along(t)),
        )
        try:
            value, err, _ = levin1d_adaptive(line, 0.0, 1.0, cfg1d, tally)
        except NonConvergenceError as ex:
            raise NonConvergenceError(
                "boundary integral did not converge", interval=ex.interval, cell_path=cell.path
            ) from ex
        if tally is not None:
            tally.error_1d += err
        total += value
    return total


# ---------------------------------------------------------------------------
# adaptive drivers


def integrate_element(
    T: CurvedTriangle,
    osc: Integrand,
    cfg: Levin2dConfig,
    tally: Optional[WorkTally] = None,
    force_levels: int = 0,
) -> QuadratureResult:
    """
    Integral of f exp(i g) over one curved element.

    Depth-first refinement in reference coordinates: a cell is accepted when
    residual_inf <= residual_tol * max(1, max |f~| at its nodes). force_levels
    subdivides unconditionally down to that depth first.

    Raises:
        NonConvergenceError: If a cell deeper than cfg.max_depth would be needed
    """
    tally = tally if tally is not None else WorkTally()
    start = WorkTally(tally.leaves, tally.boundary_segments, tally.svd_calls, tally.error_1d)
    ref = pullback(T, osc)
    residual_error = 0.0

    def refine(cell: RefCell) -> complex:
        nonlocal residual_error
        if cell.depth >= force_levels:
            field = levin2d_solve(ref, cell, cfg, tally)
            if field.residual_inf <= cfg.residual_tol * field.f_scale:
                tally.leaves += 1
                residual_error += field.residual_inf * cell.area
                return boundary_reduce(field, ref, cell, cfg.cfg1d, tally)
            logger.debug(
                f"element {T.index} cell {cell.path}: residual {field.residual_inf:.2e} > "
                f"{cfg.residual_tol * field.f_scale:.2e}, refining"
            )
        if cell.depth + 1 > max(cfg.max_depth, force_levels):
            raise NonConvergenceError(
                "residual criterion not met at max depth (interior singularity?)",
                cell_path=cell.path,
                element_index=T.index,
            )
        total = 0j
        for child in subdivide_reference(cell):
            total += refine(child)
        return total

    try:
        value = refine(REFERENCE_CELL)
    except NonConvergenceError as ex:
        if ex.element_index is None:
            raise NonConvergenceError(str(ex), element_index=T.index) from ex
        raise

    return QuadratureResult(
        value=value,
        error_estimate=residual_error + (tally.error_1d - start.error_1d),
        n_leaves=tally.leaves - start.leaves,
        n_boundary_segments=tally.boundary_segments - start.boundary_segments,
        svd_calls=tally.svd_calls - start.svd_calls,
    )


def integrate_mesh(
    mesh: Mesh,
    osc: Integrand,
    cfg: Levin2dConfig,
    threads: int = 1,
    force_levels: int = 0,
) -> QuadratureResult:
    """
    Sum of integrate_element over all elements.

    Elements may run on a thread pool; the reduction is always in element-index
    order so results do not depend on the thread count.
    """

    def run(T: CurvedTriangle) -> QuadratureResult:
        return integrate_element(T, osc, cfg, WorkTally(), force_levels)

    if threads <= 1 or len(mesh.elements) <= 1:
        results: List[QuadratureResult] = [run(T) for T in mesh.elements]
    else:
        with ThreadPoolExecutor(max_workers=min(threads, len(mesh.elements))) as pool:
            results = list(pool.map(run, mesh.elements))

    value, err, leaves, segments, svds = 0j, 0.0, 0, 0, 0
    for r in results:
        value += r.value
        err += r.error_estimate
        leaves += r.n_leaves
        segments += r.n_boundary_segments
        svds += r.svd_calls
    logger.info(f"Integrated {len(results)} elements: {leaves} leaves, {segments} boundary segments, {svds} SVDs")
    return QuadratureResult(value, err, leaves, segments, svds)
