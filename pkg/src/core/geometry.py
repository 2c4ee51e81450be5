"""
Curved triangular elements built by transfinite interpolation.

Elements are parameterized over the reference triangle
{(u, v): u >= 0, v >= 0, u + v <= 1} with barycentric coordinates
l1 = 1 - u - v, l2 = u, l3 = v. Edge curves are Chebyshev expansions
on [0, 1], t = 0 at the first vertex of the edge.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C

from common import TransfiniteBlend
from src.core.errors import ContractError, GeometryError, InvalidElementError, MeshParseError
from src.core.spectral1d import ChebExpansion, cheb_quotient, gauss_rule

logger = logging.getLogger("geometry")

REFERENCE_SLACK = 1e-12
ENDPOINT_TOL = 1e-9
SHARED_EDGE_TOL = 1e-10
VALIDATION_DEGREE = 12
SPEED_SAMPLES = 33
MESH_HEADER = ("MESHTRI", "1")

# (first vertex, second vertex) of edges c12, c23, c31
EDGE_VERTICES = ((0, 1), (1, 2), (2, 0))
# gradients of l1, l2, l3 with respect to (u, v)
_GRAD_LAMBDA = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])


# ---------------------------------------------------------------------------
# reference cells


@dataclass(frozen=True, eq=False)
class RefCell:
    """A straight sub-triangle of the reference triangle, counterclockwise."""

    vertices: np.ndarray
    path: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", np.asarray(self.vertices, dtype=float).reshape(3, 2))

    @property
    def depth(self) -> int:
        return len(self.path)

    @property
    def area(self) -> float:
        return 0.5 * _signed_double_area(self.vertices)

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def to_physical(self, xi: np.ndarray) -> np.ndarray:
        """Map points of the unit simplex (columns xi, eta) into this cell."""
        v0, v1, v2 = self.vertices
        xi = np.asarray(xi, dtype=float)
        return v0 + xi[..., :1] * (v1 - v0) + xi[..., 1:2] * (v2 - v0)

    def edges(self) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        for a, b in EDGE_VERTICES:
            yield self.vertices[a], self.vertices[b]


REFERENCE_CELL = RefCell(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))


def _signed_double_area(vertices: np.ndarray) -> float:
    (x1, y1), (x2, y2), (x3, y3) = vertices
    return float((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1))


def subdivide_reference(cell: RefCell) -> List[RefCell]:
    """
    Midpoint 4-way split of a reference sub-cell.

    Returns:
        Three corner children followed by the middle child, all counterclockwise
    """
    if not cell.area > 0.0:
        raise ContractError(f"cannot subdivide a cell of area {cell.area}")
    a, b, c = cell.vertices
    mab, mbc, mca = 0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)
    children = (
        (a, mab, mca),
        (mab, b, mbc),
        (mca, mbc, c),
        (mab, mbc, mca),
    )
    return [RefCell(np.array(v), cell.path + (i,)) for i, v in enumerate(children)]


@lru_cache(maxsize=None)
def _duffy_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    rule = gauss_rule(n)
    a, wa = rule.on_interval(0.0, 1.0)
    A, B = np.meshgrid(a, a, indexing="ij")
    WA, WB = np.meshgrid(wa, wa, indexing="ij")
    pts = np.column_stack([(A * (1.0 - B)).ravel(), B.ravel()])
    w = (WA * WB * (1.0 - B)).ravel()
    pts.flags.writeable = False
    w.flags.writeable = False
    return pts, w


def triangle_rule(n: int, cell: RefCell = REFERENCE_CELL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Duffy-collapsed tensor Gauss-Legendre rule with n*n nodes on a sub-cell.

    Returns:
        Points (n*n, 2) in reference coordinates and weights summing to the cell area
    """
    pts, w = _duffy_rule(n)
    return cell.to_physical(pts), w * (2.0 * cell.area)


def lattice_nodes(degree: int) -> np.ndarray:
    """Equispaced lattice {(i/d, j/d): i + j <= d} on the reference triangle."""
    return np.array([(i / degree, j / degree) for j in range(degree + 1) for i in range(degree + 1 - j)])


# ---------------------------------------------------------------------------
# edge curves


class _PlaneSeries:
    """Vector-valued Chebyshev series on [0, 1] with real (n, 2) coefficients."""

    def __init__(self, coefficients: np.ndarray):
        self.coefficients = np.asarray(coefficients, dtype=float).reshape(-1, 2)

    def __call__(self, t) -> np.ndarray:
        s = 2.0 * np.clip(np.asarray(t, dtype=float), 0.0, 1.0) - 1.0
        return np.moveaxis(C.chebval(s, self.coefficients), 0, -1)

    def deriv(self) -> "_PlaneSeries":
        if self.coefficients.shape[0] == 1:
            return _PlaneSeries(np.zeros((1, 2)))
        return _PlaneSeries(C.chebder(self.coefficients, axis=0) * 2.0)


@dataclass(frozen=True, eq=False)
class EdgeCurve:
    """Planar curve c(t), t in [0, 1], as a pair of Chebyshev expansions."""

    expansion_x: ChebExpansion
    expansion_y: ChebExpansion
    curve_id: int = 0

    def __post_init__(self):
        for e in (self.expansion_x, self.expansion_y):
            if e.domain != (0.0, 1.0):
                raise ContractError(f"edge expansions must live on [0, 1], got {e.domain}")
        n = max(self.expansion_x.coefficients.size, self.expansion_y.coefficients.size)
        coeffs = np.zeros((n, 2))
        coeffs[: self.expansion_x.coefficients.size, 0] = self.expansion_x.coefficients.real
        coeffs[: self.expansion_y.coefficients.size, 1] = self.expansion_y.coefficients.real
        object.__setattr__(self, "_series", _PlaneSeries(coeffs))
        object.__setattr__(self, "_dseries", self._series.deriv())

    @classmethod
    def from_coefficients(cls, cx: Sequence[float], cy: Sequence[float], curve_id: int = 0) -> "EdgeCurve":
        return cls(ChebExpansion(np.asarray(cx), 0.0, 1.0), ChebExpansion(np.asarray(cy), 0.0, 1.0), curve_id)

    @classmethod
    def straight(cls, pa: Sequence[float], pb: Sequence[float]) -> "EdgeCurve":
        """Degree-1 expansion of the segment pa -> pb."""
        pa, pb = np.asarray(pa, dtype=float), np.asarray(pb, dtype=float)
        mid, half = 0.5 * (pa + pb), 0.5 * (pb - pa)
        return cls.from_coefficients([mid[0], half[0]], [mid[1], half[1]], 0)

    @property
    def coefficients(self) -> np.ndarray:
        return self._series.coefficients

    @property
    def endpoints(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.point(0.0), self.point(1.0)

    @property
    def is_straight(self) -> bool:
        return bool(np.all(self.coefficients[2:] == 0.0))

    def point(self, t) -> np.ndarray:
        return self._series(t)

    def tangent(self, t) -> np.ndarray:
        return self._dseries(t)

    def reversed(self) -> "EdgeCurve":
        """Same curve traversed from t = 1 to t = 0 (T_k(-s) = (-1)^k T_k(s))."""
        signs = (-1.0) ** np.arange(self.coefficients.shape[0])
        flipped = self.coefficients * signs[:, None]
        return EdgeCurve.from_coefficients(flipped[:, 0], flipped[:, 1], -self.curve_id)

    def displacement(self) -> _PlaneSeries:
        """c(t) minus its chord (1-t) c(0) + t c(1); vanishes at both ends."""
        start, end = self.endpoints
        coeffs = self.coefficients.copy()
        coeffs[0] -= 0.5 * (start + end)
        if coeffs.shape[0] < 2:
            coeffs = np.vstack([coeffs, np.zeros(2)])
        coeffs[1] -= 0.5 * (end - start)
        return _PlaneSeries(coeffs)


# ---------------------------------------------------------------------------
# curved triangles


@dataclass(frozen=True, eq=False)
class CurvedTriangle:
    """
    Curved triangle with counterclockwise vertices P1, P2, P3 and edges c12, c23, c31.

    The transfinite map reproduces each edge curve on the matching reference edge.
    """

    vertices: np.ndarray
    edges: Tuple[EdgeCurve, EdgeCurve, EdgeCurve]
    index: int = 0
    blend: TransfiniteBlend = TransfiniteBlend.PROJECTION
    _bubbles: tuple = field(init=False, repr=False)

    def __post_init__(self):
        vertices = np.asarray(self.vertices, dtype=float).reshape(3, 2)
        object.__setattr__(self, "vertices", vertices)
        if len(self.edges) != 3:
            raise ContractError("a triangle needs exactly three edge curves")
        if not _signed_double_area(vertices) > 0.0:
            raise InvalidElementError("vertices are not counterclockwise", self.index)

        bubbles = []
        for edge in self.edges:
            d = edge.displacement()
            if edge.is_straight:
                bubbles.append(None)
                continue
            if self.blend == TransfiniteBlend.PROJECTION:
                qx = cheb_quotient(ChebExpansion(d.coefficients[:, 0], 0.0, 1.0))
                qy = cheb_quotient(ChebExpansion(d.coefficients[:, 1], 0.0, 1.0))
                n = max(qx.coefficients.size, qy.coefficients.size)
                coeffs = np.zeros((n, 2))
                coeffs[: qx.coefficients.size, 0] = qx.coefficients.real
                coeffs[: qy.coefficients.size, 1] = qy.coefficients.real
                d = _PlaneSeries(coeffs)
            bubbles.append((d, d.deriv()))
        object.__setattr__(self, "_bubbles", tuple(bubbles))

    @classmethod
    def straight(cls, vertices: Sequence[Sequence[float]], index: int = 0) -> "CurvedTriangle":
        vertices = np.asarray(vertices, dtype=float)
        edges = tuple(EdgeCurve.straight(vertices[a], vertices[b]) for a, b in EDGE_VERTICES)
        return cls(vertices, edges, index)

    @property
    def is_affine(self) -> bool:
        return all(b is None for b in self._bubbles)

    def map_and_jacobian(self, u, v) -> Tuple[np.ndarray, np.ndarray]:
        """
        Transfinite map and its Jacobian at reference points.

        Returns:
            x of shape (..., 2) and J of shape (..., 2, 2) with J[..., i, j] = dx_i / d(u, v)_j
        """
        u, v = _check_reference(u, v)
        lam = np.stack([1.0 - u - v, u, v], axis=-1)
        x = lam @ self.vertices
        J = np.broadcast_to((_GRAD_LAMBDA.T @ self.vertices).T, u.shape + (2, 2)).copy()

        for (a, b), bubble in zip(EDGE_VERTICES, self._bubbles):
            if bubble is None:
                continue
            series, dseries = bubble
            la, lb = lam[..., a], lam[..., b]
            ga, gb = _GRAD_LAMBDA[a], _GRAD_LAMBDA[b]
            if self.blend == TransfiniteBlend.PROJECTION:
                t = 0.5 * (1.0 + lb - la)
                q, dq = series(t), dseries(t)
                w = la * lb
                x += w[..., None] * q
                dw = lb[..., None] * ga + la[..., None] * gb
                dt = 0.5 * (gb - ga)
                J += q[..., :, None] * dw[..., None, :] + (w[..., None] * dq)[..., :, None] * dt[None, :]
            else:
                s = la + lb
                safe = np.where(s > 0.0, s, 1.0)
                t = np.where(s > 0.0, lb / safe, 0.0)
                d, dd = series(t), dseries(t)
                x += s[..., None] * d
                ds = ga + gb
                dt = gb - t[..., None] * ds
                J += d[..., :, None] * ds[None, :] + dd[..., :, None] * dt[..., None, :]
        return x, J

    def check_jacobian(self, J: np.ndarray) -> np.ndarray:
        det = J[..., 0, 0] * J[..., 1, 1] - J[..., 0, 1] * J[..., 1, 0]
        if np.any(det <= 0.0):
            raise InvalidElementError(f"nonpositive Jacobian determinant (min {float(np.min(det))!r})", self.index)
        return det


def _check_reference(u, v) -> Tuple[np.ndarray, np.ndarray]:
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    if np.any(u < -REFERENCE_SLACK) or np.any(v < -REFERENCE_SLACK) or np.any(u + v > 1.0 + REFERENCE_SLACK):
        raise ContractError("point outside the reference triangle")
    return u, v


def transfinite_map(T: CurvedTriangle, u, v) -> np.ndarray:
    """Physical point(s) of reference coordinates (u, v)."""
    return T.map_and_jacobian(u, v)[0]


def jacobian(T: CurvedTriangle, u, v) -> np.ndarray:
    """
    Jacobian matrix of the transfinite map.

    Raises:
        InvalidElementError: If the determinant is nonpositive anywhere requested
    """
    J = T.map_and_jacobian(u, v)[1]
    T.check_jacobian(J)
    return J


def edge_trace(T: CurvedTriangle, edge_index: int, t) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Point, outward unit normal and speed along edge 1 (c12), 2 (c23) or 3 (c31).

    The normal is the tangent rotated by -90 degrees.
    """
    if edge_index not in (1, 2, 3):
        raise ContractError(f"edge index must be 1, 2 or 3, got {edge_index}")
    edge = T.edges[edge_index - 1]
    t = np.asarray(t, dtype=float)
    if np.any(t < -REFERENCE_SLACK) or np.any(t > 1.0 + REFERENCE_SLACK):
        raise ContractError("edge parameter outside [0, 1]")
    tangent = edge.tangent(t)
    speed = np.hypot(tangent[..., 0], tangent[..., 1])
    if np.any(speed == 0.0):
        raise GeometryError(f"cusp on edge {edge_index} of element {T.index}")
    normal = np.stack([tangent[..., 1], -tangent[..., 0]], axis=-1) / speed[..., None]
    return edge.point(t), normal, speed


def element_area(T: CurvedTriangle, n: int = 20) -> float:
    """Area as the reference-triangle quadrature of det J."""
    pts, w = triangle_rule(n)
    _, J = T.map_and_jacobian(pts[:, 0], pts[:, 1])
    return float(w @ T.check_jacobian(J))


def boundary_area(T: CurvedTriangle, n: int = 30) -> float:
    """Area from (1/2) * closed integral of (x dy - y dx), Gauss-Legendre per edge."""
    t, w = gauss_rule(n).on_interval(0.0, 1.0)
    total = 0.0
    for edge in T.edges:
        p, dp = edge.point(t), edge.tangent(t)
        total += 0.5 * float(w @ (p[:, 0] * dp[:, 1] - p[:, 1] * dp[:, 0]))
    return total


# ---------------------------------------------------------------------------
# meshes


@dataclass(frozen=True)
class SharedEdge:
    """Edge edge_a (1..3) of element_a coincides with edge edge_b of element_b, opposite direction."""

    element_a: int
    edge_a: int
    element_b: int
    edge_b: int


@dataclass(frozen=True, eq=False)
class Mesh:
    vertices: np.ndarray
    curves: Mapping[int, EdgeCurve]
    triangles: Tuple[Tuple[int, int, int, int, int, int], ...]
    elements: Tuple[CurvedTriangle, ...]
    adjacency: Tuple[SharedEdge, ...]

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def boundary_edges(self) -> Tuple[Tuple[int, int], ...]:
        """(element index, edge index 1..3) of every edge not shared with a neighbor."""
        shared = {(s.element_a, s.edge_a) for s in self.adjacency} | {(s.element_b, s.edge_b) for s in self.adjacency}
        return tuple(
            (i, e) for i in range(len(self.elements)) for e in (1, 2, 3) if (i, e) not in shared
        )

    @property
    def reference_nodes(self) -> np.ndarray:
        """Physical images of the degree-12 lattice of every element, stacked."""
        nodes = lattice_nodes(VALIDATION_DEGREE)
        return np.concatenate([transfinite_map(T, nodes[:, 0], nodes[:, 1]) for T in self.elements])


def build_mesh(
    vertices: np.ndarray,
    curves: Mapping[int, EdgeCurve],
    triangles: Sequence[Sequence[int]],
    blend: TransfiniteBlend = TransfiniteBlend.PROJECTION,
) -> Mesh:
    """
    Assemble and validate a mesh.

    Args:
        vertices: (N, 2) vertex coordinates
        curves: Curve id (> 0) -> EdgeCurve
        triangles: Rows (v1, v2, v3, e12, e23, e31), 1-based vertex ids; curve id 0 is straight
            and a negative id traverses the curve backwards
        blend: Transfinite blend used by every element

    Raises:
        GeometryError: Endpoint mismatch, cusps or non-coincident shared edges
        InvalidElementError: Orientation or Jacobian failures
    """
    vertices = np.asarray(vertices, dtype=float).reshape(-1, 2)
    nodes = lattice_nodes(VALIDATION_DEGREE)
    samples = np.linspace(0.0, 1.0, SPEED_SAMPLES)
    elements = []
    for idx, row in enumerate(triangles):
        vids, cids = [int(r) for r in row[:3]], [int(r) for r in row[3:]]
        if any(not 1 <= vid <= len(vertices) for vid in vids):
            raise GeometryError(f"element {idx} references an unknown vertex: {vids}")
        P = vertices[[vid - 1 for vid in vids]]
        edges = []
        for (a, b), cid in zip(EDGE_VERTICES, cids):
            if cid == 0:
                edges.append(EdgeCurve.straight(P[a], P[b]))
                continue
            if abs(cid) not in curves:
                raise GeometryError(f"element {idx} references unknown curve id {cid}")
            curve = curves[abs(cid)] if cid > 0 else curves[abs(cid)].reversed()
            start, end = curve.endpoints
            scale = max(1.0, float(np.max(np.abs(P))))
            mismatch = max(np.linalg.norm(start - P[a]), np.linalg.norm(end - P[b]))
            if mismatch > ENDPOINT_TOL * scale:
                raise GeometryError(f"curve {abs(cid)} endpoints miss vertices of element {idx} by {mismatch:.3e}")
            tangent = curve.tangent(samples)
            if np.any(np.hypot(tangent[:, 0], tangent[:, 1]) <= 0.0):
                raise GeometryError(f"curve {abs(cid)} has a cusp")
            edges.append(curve)
        T = CurvedTriangle(P, tuple(edges), idx, blend)
        _, J = T.map_and_jacobian(nodes[:, 0], nodes[:, 1])
        T.check_jacobian(J)
        elements.append(T)

    adjacency = _build_adjacency(triangles, elements)
    _spot_check_overlap(elements)
    logger.info(f"Built mesh with {len(elements)} elements and {len(adjacency)} shared edges")
    return Mesh(
        vertices=vertices,
        curves=dict(curves),
        triangles=tuple(tuple(int(r) for r in row) for row in triangles),
        elements=tuple(elements),
        adjacency=tuple(adjacency),
    )


def _build_adjacency(triangles: Sequence[Sequence[int]], elements: Sequence[CurvedTriangle]) -> List[SharedEdge]:
    owners: Dict[frozenset, List[Tuple[int, int]]] = {}
    for idx, row in enumerate(triangles):
        for e, (a, b) in enumerate(EDGE_VERTICES, start=1):
            owners.setdefault(frozenset((int(row[a]), int(row[b]))), []).append((idx, e))

    samples = np.linspace(0.0, 1.0, 10)
    adjacency = []
    for key, pair in owners.items():
        if len(pair) == 1:
            continue
        if len(pair) > 2:
            raise GeometryError(f"edge {sorted(key)} is shared by {len(pair)} elements")
        (ia, ea), (ib, eb) = pair
        ca, cb = elements[ia].edges[ea - 1], elements[ib].edges[eb - 1]
        gap = float(np.max(np.linalg.norm(ca.point(samples) - cb.point(1.0 - samples), axis=-1)))
        if gap > SHARED_EDGE_TOL:
            raise GeometryError(f"shared edge between elements {ia} and {ib} does not coincide (gap {gap:.3e})")
        adjacency.append(SharedEdge(ia, ea, ib, eb))
    return adjacency


def _spot_check_overlap(elements: Sequence[CurvedTriangle]) -> None:
    for T in elements:
        c = transfinite_map(T, 1.0 / 3.0, 1.0 / 3.0)
        for other in elements:
            if other.index == T.index:
                continue
            lam = np.linalg.solve(np.vstack([other.vertices.T, np.ones(3)]), np.append(c, 1.0))
            if np.all(lam > 1e-9):
                logger.warning(f"centroid of element {T.index} lies inside element {other.index}")


# ---------------------------------------------------------------------------
# mesh text format


class _Tokens:
    def __init__(self, text: str):
        self.items: List[Tuple[str, int]] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0]
            self.items.extend((tok, lineno) for tok in line.split())
        self.pos = 0

    @property
    def line(self) -> int:
        if self.pos < len(self.items):
            return self.items[self.pos][1]
        return self.items[-1][1] if self.items else 1

    def next(self, what: str) -> str:
        if self.pos >= len(self.items):
            raise MeshParseError(f"unexpected end of file, expected {what}", self.line)
        tok = self.items[self.pos][0]
        self.pos += 1
        return tok

    def keyword(self, word: str) -> None:
        line = self.line
        tok = self.next(f"'{word}'")
        if tok != word:
            raise MeshParseError(f"expected '{word}', found '{tok}'", line)

    def integer(self, what: str) -> int:
        line = self.line
        tok = self.next(what)
        try:
            return int(tok)
        except ValueError:
            raise MeshParseError(f"expected integer {what}, found '{tok}'", line) from None

    def real(self, what: str) -> float:
        line = self.line
        tok = self.next(what)
        try:
            value = float(tok)
        except ValueError:
            raise MeshParseError(f"expected number {what}, found '{tok}'", line) from None
        if not np.isfinite(value):
            raise MeshParseError(f"non-finite {what}", line)
        return value


def load_mesh(text: str, blend: TransfiniteBlend = TransfiniteBlend.PROJECTION) -> Mesh:
    """
    Parse and validate mesh text.

    Format (whitespace separated, '#' starts a comment):
        MESHTRI 1
        vertices N, then N lines "x y"
        curves C, then per curve "id n" and n x-coefficients, n y-coefficients
        triangles M, then M lines "v1 v2 v3 e12 e23 e31"

    Raises:
        MeshParseError: Malformed text, with the line number
        GeometryError / InvalidElementError: Validation failures
    """
    tokens = _Tokens(text)
    for word in MESH_HEADER:
        tokens.keyword(word)

    tokens.keyword("vertices")
    n_vertices = tokens.integer("vertex count")
    vertices = np.array([[tokens.real("x"), tokens.real("y")] for _ in range(n_vertices)]).reshape(-1, 2)

    tokens.keyword("curves")
    n_curves = tokens.integer("curve count")
    curves: Dict[int, EdgeCurve] = {}
    for _ in range(n_curves):
        line = tokens.line
        cid = tokens.integer("curve id")
        n = tokens.integer("coefficient count")
        if cid <= 0 or cid in curves:
            raise MeshParseError(f"curve ids must be positive and unique, got {cid}", line)
        if n < 1:
            raise MeshParseError(f"curve {cid} needs at least one coefficient", line)
        cx = [tokens.real(f"x-coefficient of curve {cid}") for _ in range(n)]
        cy = [tokens.real(f"y-coefficient of curve {cid}") for _ in range(n)]
        curves[cid] = EdgeCurve.from_coefficients(cx, cy, cid)

    tokens.keyword("triangles")
    n_triangles = tokens.integer("triangle count")
    triangles = [[tokens.integer("triangle entry") for _ in range(6)] for _ in range(n_triangles)]
    if tokens.pos != len(tokens.items):
        raise MeshParseError(f"trailing content '{tokens.items[tokens.pos][0]}'", tokens.line)

    logger.info(f"Parsed mesh: {n_vertices} vertices, {n_curves} curves, {n_triangles} triangles")
    return build_mesh(vertices, curves, triangles, blend)


def mesh_to_text(mesh: Mesh) -> str:
    """Serialize a mesh in the format read by load_mesh."""
    lines = [" ".join(MESH_HEADER), f"vertices {len(mesh.vertices)}"]
    lines += [f"{x!r} {y!r}" for x, y in mesh.vertices.tolist()]
    lines.append(f"curves {len(mesh.curves)}")
    for cid in sorted(mesh.curves):
        coeffs = mesh.curves[cid].coefficients
        lines.append(f"{cid} {coeffs.shape[0]}")
        lines.append(" ".join(repr(c) for c in coeffs[:, 0].tolist()))
        lines.append(" ".join(repr(c) for c in coeffs[:, 1].tolist()))
    lines.append(f"triangles {len(mesh.triangles)}")
    lines += [" ".join(str(r) for r in row) for row in mesh.triangles]
    return "\n".join(lines) + "\n"
