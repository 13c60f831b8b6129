"""Regular triangulations of the unit sphere from the Platonic solids."""
import logging
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .. import config
from ..errors import GeometryDomainError, UnsupportedDegreeError
from ..mesh import EdgeType, ETYPE_CODE, Geometry, Mesh, assemble_mesh

logger = logging.getLogger(__name__)

PHI = (1.0 + math.sqrt(5.0)) / 2.0
SOLIDS = {3: 'tetrahedron', 4: 'octahedron', 5: 'icosahedron'}


@dataclass(frozen=True)
class SPoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if abs(math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2) - 1.0) > config.UNIT_SPHERE_TOL:
            raise GeometryDomainError(f"({self.x}, {self.y}, {self.z}) is not a unit vector")

    def __iter__(self):
        yield from (self.x, self.y, self.z)


def _tetrahedron() -> np.ndarray:
    pts = np.array([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], dtype=float)
    return pts / math.sqrt(3.0)


def _octahedron() -> np.ndarray:
    return np.array([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)], dtype=float)


def _icosahedron() -> np.ndarray:
    pts = []
    for s1, s2 in product((1.0, -1.0), repeat=2):
        base = (0.0, s1, s2 * PHI)
        for shift in range(3):
            pts.append(base[-shift:] + base[:-shift] if shift else base)
    pts = np.array(pts)
    return pts / math.sqrt(1.0 + PHI ** 2)


def _nearest_pairs(pts: np.ndarray) -> np.ndarray:
    """Vertex pairs at the largest dot product, i.e. the edges of the solid."""
    dots = pts @ pts.T
    iu, ju = np.triu_indices(len(pts), k=1)
    best = dots[iu, ju].max()
    keep = np.isclose(dots[iu, ju], best, atol=1e-9)
    return np.stack([iu[keep], ju[keep]], axis=1)


def generate_sphere(k: int) -> Mesh:
    """k-regular triangulation of the sphere for k in {3, 4, 5}."""
    if k not in SOLIDS:
        raise UnsupportedDegreeError(
            f"no k-regular triangulation of the sphere for k={k}: the vertex count "
            "12/(6-k) is a positive integer only for k in {3, 4, 5}")
    pts = {3: _tetrahedron, 4: _octahedron, 5: _icosahedron}[k]()
    edges = _nearest_pairs(pts)
    etypes = np.full(len(edges), ETYPE_CODE[EdgeType.GENERIC], np.int8)
    mesh = assemble_mesh(Geometry.SPHERICAL, pts, edges, etypes,
                         params={'k': k, 'solid': SOLIDS[k]})
    logger.info("[Generate] %s: V=%d E=%d F=%d", SOLIDS[k], mesh.num_vertices, mesh.num_edges, mesh.num_faces)
    return mesh


def spherical_edge_length(p, q) -> float:
    """Great-circle distance between unit vectors, via atan2 for accuracy at 0 and pi."""
    p = np.asarray(tuple(p), dtype=float)
    q = np.asarray(tuple(q), dtype=float)
    return float(math.atan2(np.linalg.norm(np.cross(p, q)), float(p @ q)))


def spherical_edge_length_many(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return np.arctan2(np.linalg.norm(np.cross(p, q), axis=1), np.einsum('ij,ij->i', p, q))
