"""
Built-in test domains.

reftri      the reference triangle (0,0), (1,0), (0,1)
unitsquare  [0,1]^2 as two straight triangles
resonance   annular sector 1 <= r <= 2, pi/12 <= angle <= 5pi/12, four curved
            triangles whose inner and outer arcs are Chebyshev edge curves
"""
import logging

import numpy as np

from common import DomainName, TransfiniteBlend
from src.core.errors import UsageError
from src.core.geometry import EdgeCurve, Mesh, build_mesh, mesh_to_text
from src.core.spectral1d import cheb_fit, cheb_sample_points

logger = logging.getLogger("domains")

ARC_COEFFICIENTS = 24
INNER_RADIUS, OUTER_RADIUS = 1.0, 2.0
SECTOR_ANGLES = (np.pi / 12.0, np.pi / 4.0, 5.0 * np.pi / 12.0)


def arc_curve(radius: float, start: float, end: float, curve_id: int, n: int = ARC_COEFFICIENTS) -> EdgeCurve:
    """Chebyshev interpolant of the circular arc from angle start to angle end."""
    t = cheb_sample_points(n, (0.0, 1.0))
    angle = start + t * (end - start)
    cx = cheb_fit(radius * np.cos(angle), (0.0, 1.0)).coefficients.real
    cy = cheb_fit(radius * np.sin(angle), (0.0, 1.0)).coefficients.real
    return EdgeCurve.from_coefficients(cx, cy, curve_id)


def _polar(radius: float, angle: float):
    return (radius * np.cos(angle), radius * np.sin(angle))


def reference_triangle(blend: TransfiniteBlend = TransfiniteBlend.PROJECTION) -> Mesh:
    return build_mesh(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), {}, [(1, 2, 3, 0, 0, 0)], blend)


def unit_square(blend: TransfiniteBlend = TransfiniteBlend.PROJECTION) -> Mesh:
    vertices = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    return build_mesh(vertices, {}, [(1, 2, 3, 0, 0, 0), (1, 3, 4, 0, 0, 0)], blend)


def resonance_sector(blend: TransfiniteBlend = TransfiniteBlend.PROJECTION) -> Mesh:
    """
    Vertices: A, B, C on the inner arc and D, E, F on the outer arc at the
    three sector angles. Curves 1, 2 are the inner arcs A->B, B->C and
    curves 3, 4 the outer arcs D->E, E->F.
    """
    a0, a1, a2 = SECTOR_ANGLES
    vertices = np.array(
        [_polar(INNER_RADIUS, a) for a in SECTOR_ANGLES] + [_polar(OUTER_RADIUS, a) for a in SECTOR_ANGLES]
    )
    curves = {
        1: arc_curve(INNER_RADIUS, a0, a1, 1),
        2: arc_curve(INNER_RADIUS, a1, a2, 2),
        3: arc_curve(OUTER_RADIUS, a0, a1, 3),
        4: arc_curve(OUTER_RADIUS, a1, a2, 4),
    }
    A, B, C, D, E, F = range(1, 7)
    triangles = [
        (A, E, B, 0, 0, -1),
        (A, D, E, 0, 3, 0),
        (B, F, C, 0, 0, -2),
        (B, E, F, 0, 4, 0),
    ]
    return build_mesh(vertices, curves, triangles, blend)


_DOMAINS = {
    DomainName.REFTRI: reference_triangle,
    DomainName.UNITSQUARE: unit_square,
    DomainName.RESONANCE: resonance_sector,
}


def build_domain(name: str, blend: TransfiniteBlend = TransfiniteBlend.PROJECTION) -> Mesh:
    """
    Raises:
        UsageError: Unknown name, listing the options
    """
    try:
        key = DomainName(name)
    except ValueError:
        options = ", ".join(d.value for d in DomainName)
        raise UsageError(f"unknown domain '{name}'; choose one of: {options}") from None
    mesh = _DOMAINS[key](blend)
    logger.info(f"Generated domain {key} with {len(mesh)} elements")
    return mesh


def gen_domain(name: str) -> str:
    """Mesh text of a built-in domain."""
    return mesh_to_text(build_domain(name))
