"""
Six-regular combinatorics shared by the hexagonal lattice patch and the
hyperbolic construction, plus the combinatorial torus fixture.

Ring n (n >= 1) holds 6n vertices; vertex (n, s, k) is the k-th vertex of
sector s, k = 0..n-1, and (n, s, n) is the same vertex as (n, s+1, 0).
Vertex ids are layer-major, then sector, then index, with the centre at 0.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..mesh import ETYPE_CODE, EdgeType, Geometry, Mesh, assemble_mesh

logger = logging.getLogger(__name__)

T0, T1, T2 = (ETYPE_CODE[t] for t in (EdgeType.TYPE0, EdgeType.TYPE1, EdgeType.TYPE2))


def ring_vertex_id(n, s, k):
    """Id of vertex (n, s, k); accepts numpy arrays, k may equal n."""
    return 1 + 3 * n * (n - 1) + ((s + k // n) % 6) * n + k % n


@dataclass(frozen=True)
class HexTopology:
    layers: np.ndarray
    indices: np.ndarray
    sectors: np.ndarray
    edges: np.ndarray
    etypes: np.ndarray
    faces: np.ndarray

    @property
    def num_vertices(self) -> int:
        return len(self.layers)


def ring_coordinates(n: int):
    """(sector, index) arrays for the 6n vertices of ring n in id order."""
    s = np.repeat(np.arange(6), n)
    k = np.tile(np.arange(n), 6)
    return s, k


def hexagonal_topology(layers: int) -> HexTopology:
    """Vertices, typed edges and ccw faces of the six-sector patch with the given rings."""
    if layers < 1:
        raise ValueError(f"layers must be at least 1, got {layers}")
    L = layers
    lay = [np.zeros(1, np.int64)]
    idx = [np.zeros(1, np.int64)]
    sec = [np.full(1, -1, np.int64)]
    edges, etypes, faces = [], [], []

    sectors = np.arange(6)
    # origin star and its six triangles
    edges.append(np.stack([np.zeros(6, np.int64), ring_vertex_id(1, sectors, 0)], axis=1))
    etypes.append(np.full(6, T0, np.int8))
    faces.append(np.stack([np.zeros(6, np.int64), ring_vertex_id(1, sectors, 0),
                           ring_vertex_id(1, sectors, 1)], axis=1))

    for n in range(1, L + 1):
        s, k = ring_coordinates(n)
        lay.append(np.full(6 * n, n, np.int64))
        idx.append(k.astype(np.int64))
        sec.append(s.astype(np.int64))

        edges.append(np.stack([ring_vertex_id(n, s, k), ring_vertex_id(n, s, k + 1)], axis=1))
        etypes.append(np.full(6 * n, T1, np.int8))
        if n == L:
            continue

        edges.append(np.stack([ring_vertex_id(n, sectors, 0), ring_vertex_id(n + 1, sectors, 0)], axis=1))
        etypes.append(np.full(6, T0, np.int8))
        # (n,s,k)-(n+1,s,k+1) for k = 0..n-1
        edges.append(np.stack([ring_vertex_id(n, s, k), ring_vertex_id(n + 1, s, k + 1)], axis=1))
        etypes.append(np.full(6 * n, T2, np.int8))
        # (n,s,k)-(n+1,s,k) for k = 1..n
        edges.append(np.stack([ring_vertex_id(n, s, k + 1), ring_vertex_id(n + 1, s, k + 1)], axis=1))
        etypes.append(np.full(6 * n, T2, np.int8))

        inner, inner_next = ring_vertex_id(n, s, k), ring_vertex_id(n, s, k + 1)
        faces.append(np.stack([inner, ring_vertex_id(n + 1, s, k + 1), inner_next], axis=1))
        s_b = np.repeat(np.arange(6), n + 1)
        k_b = np.tile(np.arange(n + 1), 6)
        faces.append(np.stack([ring_vertex_id(n, s_b, k_b), ring_vertex_id(n + 1, s_b, k_b),
                               ring_vertex_id(n + 1, s_b, k_b + 1)], axis=1))

    return HexTopology(
        layers=np.concatenate(lay), indices=np.concatenate(idx), sectors=np.concatenate(sec),
        edges=np.concatenate(edges).astype(np.int64), etypes=np.concatenate(etypes),
        faces=np.concatenate(faces).astype(np.int64),
    )


def hexagonal_positions(layers: int) -> np.ndarray:
    """Unit-spaced lattice positions, (n, s, k) -> n c_s + k (c_{s+1} - c_s)."""
    corners = np.array([(math.cos(j * math.pi / 3), math.sin(j * math.pi / 3)) for j in range(7)])
    pts = [np.zeros((1, 2))]
    for n in range(1, layers + 1):
        s, k = ring_coordinates(n)
        pts.append(n * corners[s] + k[:, None] * (corners[s + 1] - corners[s]))
    return np.concatenate(pts)


def generate_hexagonal(layers: int) -> Mesh:
    """Patch of the unit triangular lattice: the centre plus rings 1..layers."""
    topo = hexagonal_topology(layers)
    mesh = assemble_mesh(Geometry.EUCLIDEAN, hexagonal_positions(layers), topo.edges, topo.etypes,
                         layers=topo.layers, indices=topo.indices, sectors=topo.sectors,
                         faces=topo.faces, params={'k': 6, 'layers': layers, 'lattice': 'hexagonal'})
    logger.info("[Generate] hexagonal patch, %d rings: V=%d", layers, mesh.num_vertices)
    return mesh


TORUS_SIZE = 3
TORUS_STEPS = ((1, 0), (0, 1), (-1, 1))


def generate_torus() -> Mesh:
    """
    Six-regular torus: the triangular lattice modulo 3Z x 3Z.

    Combinatorial only; V = 9, E = 27, F = 18.
    """
    m = TORUS_SIZE

    def vid(x, y):
        return (x % m) + m * (y % m)

    edges, faces = [], []
    for y in range(m):
        for x in range(m):
            for dx, dy in TORUS_STEPS:
                edges.append((vid(x, y), vid(x + dx, y + dy)))
            faces.append((vid(x, y), vid(x + 1, y), vid(x, y + 1)))
            faces.append((vid(x, y), vid(x, y + 1), vid(x - 1, y + 1)))
    layers = np.zeros(m * m, np.int64)
    return assemble_mesh(Geometry.COMBINATORIAL, None, edges, layers=layers, faces=faces,
                         params={'k': 6, 'genus': 1, 'size': m})
