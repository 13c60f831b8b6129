"""
Measurements over generated meshes: edge lengths per layer and type,
minimum angles, log-log slope fits and area bookkeeping.
"""
import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import AnalysisError
from .hyp_kernel import angles_from_sides, hyp_distance_many, lhuilier_area
from .mesh import ETYPES, EdgeType, Geometry, Mesh, ValidationReport, Violation

logger = logging.getLogger(__name__)

STATS_COLUMNS = ('layer', 'etype', 'count', 'min', 'max', 'mean', 'min_angle', 'area')
CURVATURE = {Geometry.EUCLIDEAN: 0, Geometry.HYPERBOLIC: -1, Geometry.SPHERICAL: 1}


@dataclass(frozen=True)
class TypeStats:
    count: int
    min: float
    max: float
    mean: float


@dataclass
class LayerStats:
    layer: int
    by_type: dict = field(default_factory=dict)    # EdgeType -> TypeStats
    min_angle: Optional[float] = None
    total_area: Optional[float] = None


@dataclass(frozen=True)
class SlopeFit:
    exponent: float
    intercept: float
    r2: float
    range: tuple

    def to_dict(self) -> dict:
        out = asdict(self)
        out['range'] = list(self.range)
        return out


@dataclass(frozen=True)
class AreaCheck:
    sum_of_triangles: float
    gauss_bonnet_total: float

    @property
    def difference(self) -> float:
        return abs(self.sum_of_triangles - self.gauss_bonnet_total)


def _require_metric(m: Mesh) -> int:
    if m.geometry not in CURVATURE:
        raise AnalysisError(f"{m.geometry.value} mesh has no metric")
    return CURVATURE[m.geometry]


def segment_lengths(geometry: Geometry, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    if geometry is Geometry.HYPERBOLIC:
        return hyp_distance_many(p, q)
    if geometry is Geometry.SPHERICAL:
        return np.arctan2(np.linalg.norm(np.cross(p, q), axis=1), np.einsum('ij,ij->i', p, q))
    return np.linalg.norm(p - q, axis=1)


def edge_lengths(m: Mesh) -> np.ndarray:
    """Geodesic length of every edge, in edge order."""
    _require_metric(m)
    return segment_lengths(m.geometry, m.positions[m.edges[:, 0]], m.positions[m.edges[:, 1]])


def edge_layers(m: Mesh) -> np.ndarray:
    return np.minimum(m.layers[m.edges[:, 0]], m.layers[m.edges[:, 1]])


def face_side_lengths(m: Mesh):
    """Side lengths (a, b, c) opposite face vertices 0, 1, 2."""
    _require_metric(m)
    pos, f = m.positions, m.faces
    return (segment_lengths(m.geometry, pos[f[:, 1]], pos[f[:, 2]]),
            segment_lengths(m.geometry, pos[f[:, 0]], pos[f[:, 2]]),
            segment_lengths(m.geometry, pos[f[:, 0]], pos[f[:, 1]]))


def face_angles(m: Mesh) -> np.ndarray:
    """(F, 3) interior angles at the face vertices."""
    a, b, c = face_side_lengths(m)
    return np.stack(angles_from_sides(a, b, c, curvature=CURVATURE[m.geometry]), axis=1)


def face_areas(m: Mesh) -> np.ndarray:
    curvature = _require_metric(m)
    if curvature == 0:
        pos, f = m.positions, m.faces
        u = pos[f[:, 1]] - pos[f[:, 0]]
        v = pos[f[:, 2]] - pos[f[:, 0]]
        return 0.5 * np.abs(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])
    if curvature < 0:
        return lhuilier_area(*face_side_lengths(m))
    return face_angles(m).sum(axis=1) - math.pi


def face_layers(m: Mesh) -> np.ndarray:
    return m.layers[m.faces].min(axis=1)


def edge_length_stats(m: Mesh) -> list:
    """LayerStats per layer, with per-edge-type length summaries, min angle and area."""
    lengths = edge_lengths(m)
    elayer = edge_layers(m)
    flayer = face_layers(m) if m.num_faces else np.zeros(0, np.int64)
    angles = face_angles(m).min(axis=1) if m.num_faces else np.zeros(0)
    areas = face_areas(m) if m.num_faces else np.zeros(0)

    out = []
    for layer in np.unique(np.concatenate([elayer, flayer])):
        st = LayerStats(int(layer))
        emask = elayer == layer
        for code in np.unique(m.etypes[emask]):
            sel = lengths[emask & (m.etypes == code)]
            st.by_type[ETYPES[code]] = TypeStats(int(sel.size), float(sel.min()), float(sel.max()),
                                                 float(sel.mean()))
        fmask = flayer == layer
        if np.any(fmask):
            st.min_angle = float(angles[fmask].min())
            st.total_area = float(areas[fmask].sum())
        out.append(st)
    return out


def min_angle_series(m: Mesh) -> list:
    """(layer, smallest angle) over faces grouped by their innermost vertex layer."""
    if m.num_faces == 0:
        return []
    angles = face_angles(m).min(axis=1)
    flayer = face_layers(m)
    return [(int(n), float(angles[flayer == n].min())) for n in np.unique(flayer)]


def type_series(stats: Iterable[LayerStats], etype=EdgeType.TYPE1, stat: str = 'max') -> list:
    """(layer, stat) for one edge type, layers where the type occurs."""
    etype = EdgeType(etype)
    return [(s.layer, getattr(s.by_type[etype], stat)) for s in stats if etype in s.by_type]


def loglog_slope(series, n_lo: int, n_hi: int) -> SlopeFit:
    """Least-squares fit of log(value) against log(n) for n_lo <= n <= n_hi."""
    if not n_hi > n_lo >= 1:
        raise AnalysisError(f"fit range needs n_hi > n_lo >= 1, got {n_lo}:{n_hi}")
    pts = np.array([(n, v) for n, v in series if n_lo <= n <= n_hi], dtype=float).reshape(-1, 2)
    if len(pts) < 2:
        raise AnalysisError(f"fewer than two points in range {n_lo}:{n_hi}")
    if np.any(pts[:, 1] <= 0) or np.any(pts[:, 0] <= 0):
        raise AnalysisError("log-log fit needs strictly positive values")
    x, y = np.log(pts[:, 0]), np.log(pts[:, 1])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return SlopeFit(float(slope), float(intercept), min(max(r2, 0.0), 1.0), (int(n_lo), int(n_hi)))


def area_conservation(m: Mesh) -> AreaCheck:
    """Sum of per-triangle areas against pi * F minus the sum of all angles."""
    if m.geometry is not Geometry.HYPERBOLIC:
        raise AnalysisError("area conservation is defined for hyperbolic meshes")
    sides = face_side_lengths(m)
    total = float(np.sum(lhuilier_area(*sides)))
    angles = np.stack(angles_from_sides(*sides, curvature=-1), axis=1)
    gauss_bonnet = math.pi * m.num_faces - float(np.sum(angles))
    logger.info("[Analysis] area: triangles %.12g, Gauss-Bonnet %.12g", total, gauss_bonnet)
    return AreaCheck(total, gauss_bonnet)


def type1_bound_report(m: Mesh, form: str = 'arc') -> ValidationReport:
    """
    Same-ring edges against (pi / 3n) sinh r_n, with r_n = atanh of the Klein
    radius. form='arc' tests len < bound (the chord is shorter than the arc
    of its ring); form='sinh' tests sinh(len) < bound.
    """
    if m.geometry is not Geometry.HYPERBOLIC:
        raise AnalysisError("Type1 bounds are defined for hyperbolic meshes")
    if form not in ('arc', 'sinh'):
        raise AnalysisError(f"unknown bound form {form!r}")
    sel = np.flatnonzero(m.etypes == ETYPES.index(EdgeType.TYPE1))
    u = m.edges[sel, 0]
    n = m.layers[u]
    r = np.arctanh(np.hypot(m.positions[u, 0], m.positions[u, 1]))
    bound = (np.pi / (3 * n)) * np.sinh(r)
    lengths = edge_lengths(m)[sel]
    measured = lengths if form == 'arc' else np.sinh(lengths)
    bad = np.flatnonzero(~(measured < bound))
    report = ValidationReport(f"type1-{form}", violations=[
        Violation((int(sel[i]),), {'layer': int(n[i]), 'value': float(measured[i]), 'bound': float(bound[i])})
        for i in bad])
    report.summary = {'edges': int(sel.size), 'failed': int(bad.size)}
    if bad.size:
        report.summary['first_failing_layer'] = int(n[bad].min())
    return report


# --- tables ---

def stats_rows(stats: Iterable[LayerStats]) -> list:
    rows = []
    for st in stats:
        if not st.by_type:
            rows.append({'layer': st.layer, 'etype': '', 'count': 0, 'min': None, 'max': None,
                         'mean': None, 'min_angle': st.min_angle, 'area': st.total_area})
        for etype, ts in sorted(st.by_type.items(), key=lambda kv: ETYPES.index(kv[0])):
            rows.append({'layer': st.layer, 'etype': etype.value, 'count': ts.count, 'min': ts.min,
                         'max': ts.max, 'mean': ts.mean, 'min_angle': st.min_angle,
                         'area': st.total_area})
    return rows


def _cell(value) -> str:
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows, stream, fit: Optional[SlopeFit] = None):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(STATS_COLUMNS)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in STATS_COLUMNS])
    if fit is not None:
        writer.writerow(['fit_exponent', 'fit_intercept', 'fit_r2', 'fit_lo', 'fit_hi'])
        writer.writerow([repr(fit.exponent), repr(fit.intercept), repr(fit.r2), fit.range[0], fit.range[1]])


def write_json(rows, stream, fit: Optional[SlopeFit] = None):
    payload = {'rows': rows}
    if fit is not None:
        payload['fit'] = fit.to_dict()
    json.dump(payload, stream, indent=2)
    stream.write('\n')
