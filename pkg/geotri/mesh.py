"""
Geometry-tagged triangulations and their combinatorial validators.

A Mesh is immutable once built. Storage is array based (positions, edge
pairs, faces) so that generated patches with hundreds of thousands of
vertices stay cheap; Vertex and Edge objects are materialised on demand.
Faces are derived from the rotation system: the neighbours of each vertex
sorted by the direction of the outgoing geodesic.
"""
import logging
from collections import Counter
from dataclasses import asdict, dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from . import config
from .errors import (
    DanglingEndpointError,
    DuplicateEdgeError,
    FaceMismatchError,
    GeometryDomainError,
    MeshError,
    NotADiskError,
    NotClosedError,
    SelfLoopError,
)
from .utils.predicates import SegmentRelation, classify_segments, orient2d_many
from .utils.spatial_grid import SegmentGrid

logger = logging.getLogger(__name__)


class Geometry(str, Enum):
    EUCLIDEAN = "Euclidean"
    SPHERICAL = "Spherical"
    HYPERBOLIC = "Hyperbolic"
    COMBINATORIAL = "Combinatorial"

    @property
    def planar(self) -> bool:
        return self in (Geometry.EUCLIDEAN, Geometry.HYPERBOLIC)

    @property
    def dim(self) -> int:
        return {Geometry.EUCLIDEAN: 2, Geometry.HYPERBOLIC: 2,
                Geometry.SPHERICAL: 3, Geometry.COMBINATORIAL: 0}[self]


class EdgeType(str, Enum):
    TYPE0 = "Type0"     # ray edges along sector boundaries
    TYPE1 = "Type1"     # same-layer edges
    TYPE2 = "Type2"     # inter-layer edges
    GENERIC = "Generic"


ETYPES = tuple(EdgeType)
ETYPE_CODE = {t: i for i, t in enumerate(ETYPES)}


@dataclass(frozen=True)
class Vertex:
    id: int
    position: Optional[tuple] = None
    layer: int = 0
    index: Optional[int] = None     # None means "use the id"
    sector: Optional[int] = None


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    etype: EdgeType = EdgeType.GENERIC

    def __post_init__(self):
        if self.u == self.v:
            raise SelfLoopError(f"edge ({self.u}, {self.v}) is a self-loop")
        object.__setattr__(self, 'etype', EdgeType(self.etype))


@dataclass(frozen=True)
class Violation:
    elements: tuple
    values: dict = field(default_factory=dict)


@dataclass
class ValidationReport:
    check: str
    violations: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    exempt: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        out = {
            'check': self.check,
            'passed': self.passed,
            'violations': [{'elements': list(v.elements), **v.values} for v in self.violations],
            'summary': self.summary,
        }
        if self.exempt:
            out['exempt'] = [{'elements': list(v.elements), **v.values} for v in self.exempt]
        return out


@dataclass(frozen=True)
class Feasibility:
    k: int
    genus: int
    feasible: bool
    V: Optional[int] = None
    E: Optional[int] = None
    F: Optional[int] = None

    def to_dict(self) -> dict:
        return asdict(self)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Mesh:
    """Immutable triangulation. Construct with build_mesh or assemble_mesh."""

    def __init__(self, geometry, positions, layers, indices, sectors, edges, etypes, faces, params):
        self.geometry = Geometry(geometry)
        self.positions = _readonly(positions)
        self.layers = _readonly(layers)
        self.indices = _readonly(indices)
        self.sectors = _readonly(sectors)
        self.edges = _readonly(edges)
        self.etypes = _readonly(etypes)
        self.faces = _readonly(faces)
        self.params = dict(params or {})

    def __repr__(self):
        return (f"Mesh({self.geometry.value}, V={self.num_vertices}, "
                f"E={self.num_edges}, F={self.num_faces})")

    @property
    def num_vertices(self) -> int:
        return len(self.layers)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @cached_property
    def vertices(self) -> list:
        sectors = [None if s < 0 else int(s) for s in self.sectors]
        if self.positions.shape[1]:
            pos = [tuple(float(c) for c in row) for row in self.positions]
        else:
            pos = [None] * self.num_vertices
        return [Vertex(i, pos[i], int(self.layers[i]), int(self.indices[i]), sectors[i])
                for i in range(self.num_vertices)]

    @cached_property
    def edge_list(self) -> list:
        return [Edge(int(u), int(v), ETYPES[c]) for (u, v), c in zip(self.edges, self.etypes)]

    def edge_type(self, i: int) -> EdgeType:
        return ETYPES[self.etypes[i]]

    @cached_property
    def edge_face_counts(self) -> np.ndarray:
        return _readonly(_face_counts(self.edges, self.faces, self.num_vertices))

    @cached_property
    def boundary_edges(self) -> np.ndarray:
        """Indices of edges adjacent to fewer than two faces."""
        return _readonly(np.flatnonzero(self.edge_face_counts < 2))

    @cached_property
    def boundary(self) -> frozenset:
        return frozenset(int(v) for v in np.unique(self.edges[self.boundary_edges]))

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.num_vertices, dtype=bool)
        mask[self.edges[self.boundary_edges].ravel()] = True
        return _readonly(mask)

    @cached_property
    def degrees(self) -> np.ndarray:
        return _readonly(np.bincount(self.edges.ravel(), minlength=self.num_vertices))


# --- construction ---

def build_mesh(geometry, vertices: Iterable[Vertex], edges: Iterable[Edge], *,
               faces=None, params=None) -> Mesh:
    """
    Build a mesh from Vertex and Edge records.

    Vertex ids must be exactly 0..V-1 in any order. Faces are derived from
    the rotation system; for a combinatorial mesh they must be supplied, for a
    geometric mesh supplied faces are checked against the derived ones.
    """
    geometry = Geometry(geometry)
    vertices = sorted(vertices, key=lambda v: v.id)
    if [v.id for v in vertices] != list(range(len(vertices))):
        raise MeshError("vertex ids must be exactly 0..V-1")
    edges = list(edges)

    if geometry is Geometry.COMBINATORIAL:
        positions = np.zeros((len(vertices), 0))
    else:
        positions = np.array([tuple(v.position) for v in vertices], dtype=float).reshape(len(vertices), geometry.dim)

    layers = np.array([v.layer for v in vertices], dtype=np.int64)
    indices = np.array([v.id if v.index is None else v.index for v in vertices], dtype=np.int64)
    sectors = np.array([-1 if v.sector is None else v.sector for v in vertices], dtype=np.int64)
    pairs = np.array([(e.u, e.v) for e in edges], dtype=np.int64).reshape(len(edges), 2)
    etypes = np.array([ETYPE_CODE[EdgeType(e.etype)] for e in edges], dtype=np.int8)
    return assemble_mesh(geometry, positions, pairs, etypes, layers=layers, indices=indices,
                         sectors=sectors, faces=faces, params=params)


def assemble_mesh(geometry, positions, edges, etypes=None, *, layers=None, indices=None,
                  sectors=None, faces=None, params=None) -> Mesh:
    """Array form of build_mesh, used by the generators."""
    geometry = Geometry(geometry)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    n_vertices = len(positions) if positions is not None else 0
    if geometry is Geometry.COMBINATORIAL:
        if layers is not None:
            n_vertices = len(layers)
        positions = np.zeros((n_vertices, 0))
    else:
        positions = np.array(positions, dtype=float).reshape(-1, geometry.dim)
        _check_positions(geometry, positions)

    layers = np.zeros(n_vertices, np.int64) if layers is None else np.array(layers, dtype=np.int64)
    indices = np.arange(n_vertices, dtype=np.int64) if indices is None else np.array(indices, dtype=np.int64)
    sectors = np.full(n_vertices, -1, np.int64) if sectors is None else np.array(sectors, dtype=np.int64)
    etypes = (np.full(len(edges), ETYPE_CODE[EdgeType.GENERIC], np.int8) if etypes is None
              else np.array(etypes, dtype=np.int8))
    if not (len(layers) == len(indices) == len(sectors) == n_vertices) or len(etypes) != len(edges):
        raise MeshError("per-vertex or per-edge arrays have inconsistent lengths")

    _check_edges(edges, n_vertices)
    _check_provenance(layers, indices, sectors)

    if geometry is Geometry.COMBINATORIAL:
        if faces is None:
            raise MeshError("a combinatorial mesh needs explicit faces")
        faces = canonical_faces(np.asarray(faces, dtype=np.int64).reshape(-1, 3))
        _check_faces_on_edges(faces, edges, n_vertices)
    else:
        derived = derive_faces(geometry, positions, edges)
        if faces is not None:
            supplied = canonical_faces(np.asarray(faces, dtype=np.int64).reshape(-1, 3))
            if supplied.shape != derived.shape or not np.array_equal(supplied, derived):
                raise FaceMismatchError(
                    f"{len(supplied)} supplied faces disagree with {len(derived)} derived faces")
        faces = derived

    mesh = Mesh(geometry, positions, layers, indices, sectors, edges, etypes, faces, params)
    logger.debug("[Mesh] built %r", mesh)
    return mesh


def _check_positions(geometry: Geometry, positions: np.ndarray):
    if not np.all(np.isfinite(positions)):
        raise GeometryDomainError("non-finite vertex coordinates")
    if geometry is Geometry.HYPERBOLIC:
        bad = np.flatnonzero(np.hypot(positions[:, 0], positions[:, 1]) >= 1.0)
        if bad.size:
            raise GeometryDomainError(f"vertex {bad[0]} lies outside the Klein disk")
    elif geometry is Geometry.SPHERICAL:
        bad = np.flatnonzero(np.abs(np.linalg.norm(positions, axis=1) - 1.0) > config.UNIT_SPHERE_TOL)
        if bad.size:
            raise GeometryDomainError(f"vertex {bad[0]} is not a unit vector")


def _check_edges(edges: np.ndarray, n_vertices: int):
    if len(edges) == 0:
        return
    loops = np.flatnonzero(edges[:, 0] == edges[:, 1])
    if loops.size:
        raise SelfLoopError(f"edge {tuple(edges[loops[0]])} is a self-loop")
    dangling = np.flatnonzero((edges < 0).any(axis=1) | (edges >= n_vertices).any(axis=1))
    if dangling.size:
        raise DanglingEndpointError(f"edge {tuple(edges[dangling[0]])} references a missing vertex")
    keys = _edge_keys(edges, n_vertices)
    uniq, counts = np.unique(keys, return_counts=True)
    if np.any(counts > 1):
        dup = uniq[counts > 1][0]
        raise DuplicateEdgeError(f"edge ({dup // n_vertices}, {dup % n_vertices}) appears more than once")


def _check_provenance(layers, indices, sectors):
    if len(layers) < 2:
        return
    triples = np.stack([layers, sectors, indices], axis=1)
    if len(np.unique(triples, axis=0)) != len(triples):
        raise MeshError("(layer, index, sector) triples are not unique")


def _edge_keys(edges: np.ndarray, n_vertices: int) -> np.ndarray:
    lo = np.minimum(edges[:, 0], edges[:, 1])
    hi = np.maximum(edges[:, 0], edges[:, 1])
    return lo * n_vertices + hi


def _face_edge_keys(faces: np.ndarray, n_vertices: int) -> np.ndarray:
    rolled = np.roll(faces, -1, axis=1)
    sides = np.stack([faces.ravel(), rolled.ravel()], axis=1)
    return _edge_keys(sides, n_vertices)


def _face_counts(edges, faces, n_vertices) -> np.ndarray:
    keys = _edge_keys(edges, n_vertices)
    if len(faces) == 0:
        return np.zeros(len(edges), dtype=np.int64)
    order = np.argsort(keys)
    pos = np.searchsorted(keys[order], _face_edge_keys(faces, n_vertices))
    return np.bincount(order[pos], minlength=len(edges))


def _check_faces_on_edges(faces, edges, n_vertices):
    if len(faces) == 0:
        return
    if faces.min() < 0 or faces.max() >= n_vertices:
        raise DanglingEndpointError("face references a missing vertex")
    keys = np.sort(_edge_keys(edges, n_vertices))
    fkeys = _face_edge_keys(faces, n_vertices)
    pos = np.clip(np.searchsorted(keys, fkeys), 0, max(len(keys) - 1, 0))
    missing = np.flatnonzero(keys[pos] != fkeys) if len(keys) else np.arange(len(fkeys))
    if missing.size:
        raise MeshError(f"face {tuple(faces[missing[0] // 3])} uses an edge that is not in the mesh")


def canonical_faces(faces: np.ndarray) -> np.ndarray:
    """Rotate each face so its smallest id comes first, then sort rows."""
    if len(faces) == 0:
        return np.zeros((0, 3), dtype=np.int64)
    shift = np.argmin(faces, axis=1)
    cols = (shift[:, None] + np.arange(3)) % 3
    rotated = np.take_along_axis(faces, cols, axis=1)
    order = np.lexsort(rotated.T[::-1])
    return rotated[order]


def _outgoing_angles(geometry, positions, src, dst) -> np.ndarray:
    if geometry.planar:
        d = positions[dst] - positions[src]
        return np.arctan2(d[:, 1], d[:, 0])
    # tangent-plane frame at each vertex, oriented by the outward normal
    p = positions
    helper = np.where(np.abs(p[:, 2:3]) < 0.9, [[0.0, 0.0, 1.0]], [[1.0, 0.0, 0.0]])
    e1 = np.cross(helper, p)
    e1 /= np.linalg.norm(e1, axis=1)[:, None]
    e2 = np.cross(p, e1)
    t = positions[dst]
    return np.arctan2(np.einsum('ij,ij->i', t, e2[src]), np.einsum('ij,ij->i', t, e1[src]))


def derive_faces(geometry, positions: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """
    Positively oriented triangular faces of the rotation system.

    For a half-edge u->v the next half-edge of its face leaves v towards the
    neighbour that precedes u in the counter-clockwise order around v. Every
    3-cycle of this permutation with positive orientation is a face; the
    outer face of a patch is traversed clockwise and drops out.
    """
    geometry = Geometry(geometry)
    n_edges = len(edges)
    if n_edges == 0:
        return np.zeros((0, 3), dtype=np.int64)
    n_vertices = len(positions)
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    angles = _outgoing_angles(geometry, positions, src, dst)

    order = np.lexsort((angles, src))
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    degree = np.bincount(src, minlength=n_vertices)
    start = np.cumsum(degree) - degree

    half = np.arange(2 * n_edges)
    twin = (half + n_edges) % (2 * n_edges)
    local = rank[twin] - start[dst]
    nxt = order[start[dst] + (local - 1) % degree[dst]]

    n2 = nxt[nxt]
    lead = (nxt[n2] == half) & (half < nxt) & (half < n2)
    h = np.flatnonzero(lead)
    tri = np.stack([src[h], dst[h], dst[nxt[h]]], axis=1)

    if geometry.planar:
        pa, pb, pc = positions[tri[:, 0]], positions[tri[:, 1]], positions[tri[:, 2]]
        positive = orient2d_many(pa, pb, pc) > 0
    else:
        det = np.einsum('ij,ij->i', positions[tri[:, 0]],
                        np.cross(positions[tri[:, 1]], positions[tri[:, 2]]))
        positive = det > 0
    return canonical_faces(tri[positive])


# --- validators ---

def vertex_degrees(m: Mesh) -> dict:
    return {i: int(d) for i, d in enumerate(m.degrees)}


def check_regular(m: Mesh, k: int) -> ValidationReport:
    """Every interior vertex has degree k; boundary vertices are listed as exempt."""
    deg = m.degrees
    interior = ~m.boundary_mask
    bad = np.flatnonzero(interior & (deg != k))
    report = ValidationReport(
        'degree',
        violations=[Violation((int(i),), {'degree': int(deg[i])}) for i in bad],
        exempt=[Violation((int(i),), {'degree': int(deg[i])}) for i in np.flatnonzero(~interior)],
    )
    report.summary = {
        'k': k,
        'interior': int(interior.sum()),
        'boundary': int((~interior).sum()),
        'boundary_degrees': {int(d): c for d, c in sorted(Counter(deg[~interior].tolist()).items())},
    }
    logger.info("[Validate] degree k=%d: %d violations", k, len(bad))
    return report


def euler_characteristic(m: Mesh) -> int:
    return m.num_vertices - m.num_edges + m.num_faces


def closed_surface_identity(m: Mesh) -> ValidationReport:
    """Sum of (6 - d) equals 6 * (V - E + F) on a closed surface."""
    if m.boundary:
        raise NotClosedError(f"mesh has {len(m.boundary)} boundary vertices")
    lhs = int(np.sum(6 - m.degrees))
    rhs = 6 * euler_characteristic(m)
    report = ValidationReport('closed', summary={'lhs': lhs, 'rhs': rhs})
    if lhs != rhs:
        report.violations.append(Violation((), {'lhs': lhs, 'rhs': rhs}))
    return report


def _boundary_cycle_count(m: Mesh) -> int:
    """Number of boundary cycles, or -1 if the boundary is not a union of cycles."""
    bedges = m.edges[m.boundary_edges]
    bdeg = np.bincount(bedges.ravel(), minlength=m.num_vertices)
    if np.any((bdeg != 0) & (bdeg != 2)):
        return -1
    adj = {}
    for u, v in bedges.tolist():
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen = set()
    cycles = 0
    for s in adj:
        if s in seen:
            continue
        cycles += 1
        stack = [s]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(y for y in adj[x] if y not in seen)
    return cycles


def _is_connected(m: Mesh) -> bool:
    n = m.num_vertices
    if n == 0:
        return False
    label = np.arange(n)
    u, v = m.edges[:, 0], m.edges[:, 1]
    # min-label propagation with pointer jumping
    while True:
        lu, lv = label[u], label[v]
        low = np.minimum(lu, lv)
        new = label.copy()
        np.minimum.at(new, u, low)
        np.minimum.at(new, v, low)
        new = new[new]
        if np.array_equal(new, label):
            break
        label = new
    return bool(np.all(label == label[0]))


def disk_identity(m: Mesh) -> ValidationReport:
    """Sum over interior (6 - d) equals 6 + sum over boundary (d - 4)."""
    chi = euler_characteristic(m)
    cycles = _boundary_cycle_count(m)
    if chi != 1 or cycles != 1 or not _is_connected(m):
        raise NotADiskError(f"mesh is not a triangulated disk (chi={chi}, boundary cycles={cycles})")
    deg = m.degrees
    interior = ~m.boundary_mask
    lhs = int(np.sum(6 - deg[interior]))
    rhs = 6 + int(np.sum(deg[~interior] - 4))
    report = ValidationReport('disk', summary={'lhs': lhs, 'rhs': rhs})
    if lhs != rhs:
        report.violations.append(Violation((), {'lhs': lhs, 'rhs': rhs}))
    return report


def noncrossing_check(m: Mesh) -> ValidationReport:
    """
    No two edges cross properly or overlap; pairs sharing an endpoint are fine.

    Candidate pairs come from a uniform grid whose cell size is the
    GRID_CELL_QUANTILE quantile of edge lengths. Non-planar meshes pass with
    a 'skipped' summary.
    """
    if not m.geometry.planar:
        return ValidationReport('crossing', summary={'skipped': f"{m.geometry.value} mesh is not planar"})
    if m.num_edges < 2:
        return ValidationReport('crossing', summary={'pairs_tested': 0})

    p0 = m.positions[m.edges[:, 0]]
    p1 = m.positions[m.edges[:, 1]]
    lengths = np.hypot(*(p1 - p0).T)
    cell = float(np.quantile(lengths, config.GRID_CELL_QUANTILE))
    if cell <= 0:
        cell = float(lengths.max()) or 1.0
    grid = SegmentGrid(p0, p1, cell)

    violations = []
    tested = 0
    for i, j in grid.candidate_pairs():
        tested += len(i)
        for a, b, rel in _classify_pairs(m, p0, p1, i, j):
            violations.append(Violation((int(a), int(b)), {
                'edges': [m.edges[a].tolist(), m.edges[b].tolist()],
                'relation': rel.value,
            }))
    violations.sort(key=lambda v: v.elements)
    logger.info("[Validate] crossing: %d pairs tested, %d violations", tested, len(violations))
    return ValidationReport('crossing', violations=violations,
                            summary={'pairs_tested': tested, 'cell_size': cell})


def _classify_pairs(m: Mesh, p0, p1, i, j):
    eu, ev = m.edges[i], m.edges[j]
    first = (eu[:, 0] == ev[:, 0]) | (eu[:, 0] == ev[:, 1])
    second = (eu[:, 1] == ev[:, 0]) | (eu[:, 1] == ev[:, 1])
    shared = first | second

    # adjacent edges only conflict when they leave the shared vertex together
    if np.any(shared):
        su, sv = eu[shared], ev[shared]
        hub = np.where(first[shared], su[:, 0], su[:, 1])
        other_a = np.where(first[shared], su[:, 1], su[:, 0])
        other_b = np.where(sv[:, 0] == hub, sv[:, 1], sv[:, 0])
        o = m.positions[hub]
        da = m.positions[other_a] - o
        db = m.positions[other_b] - o
        cross = da[:, 0] * db[:, 1] - da[:, 1] * db[:, 0]
        dot = np.einsum('ij,ij->i', da, db)
        scale = np.hypot(*da.T) * np.hypot(*db.T)
        together = (dot > 0) & (np.abs(cross) <= config.EPS_COLLINEAR * scale)
        for a, b in zip(i[shared][together], j[shared][together]):
            yield a, b, SegmentRelation.OVERLAP

    i, j = i[~shared], j[~shared]
    if len(i) == 0:
        return
    a0, a1, b0, b1 = p0[i], p1[i], p0[j], p1[j]
    o1 = orient2d_many(a0, a1, b0)
    o2 = orient2d_many(a0, a1, b1)
    o3 = orient2d_many(b0, b1, a0)
    o4 = orient2d_many(b0, b1, a1)
    proper = (o1 * o2 < 0) & (o3 * o4 < 0)
    for a, b in zip(i[proper], j[proper]):
        yield a, b, SegmentRelation.PROPER_CROSSING
    touching = ~proper & ((o1 == 0) | (o2 == 0) | (o3 == 0) | (o4 == 0))
    for a, b in zip(i[touching], j[touching]):
        rel = classify_segments(p0[a], p1[a], p0[b], p1[b])
        if rel in (SegmentRelation.PROPER_CROSSING, SegmentRelation.OVERLAP):
            yield a, b, rel


def feasibility(k: int, g: int) -> Feasibility:
    """
    Whether a k-regular triangulation of the closed genus-g surface can exist
    by counting, and its vertex, edge and face counts.

    V = 12(1 - g) / (6 - k), E = kV/2, F = kV/3. For k = 6 only the torus
    qualifies and the counts are unconstrained.
    """
    if k < 3:
        raise ValueError(f"degree must be at least 3, got {k}")
    if g < 0:
        raise ValueError(f"genus must be non-negative, got {g}")
    chi = 2 - 2 * g
    if k == 6:
        return Feasibility(k, g, g == 1)

    num, den = 6 * chi, 6 - k
    if num % den != 0 or num // den <= 0 or (k * (num // den)) % 6 != 0:
        return Feasibility(k, g, False)
    V = num // den
    E, F = k * V // 2, k * V // 3
    assert k * V == 2 * E == 3 * F
    assert V - E + F == chi
    assert F + (4 - k) * V == 8 * (1 - g)
    return Feasibility(k, g, True, V, E, F)
