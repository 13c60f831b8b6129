"""
Hyperbolic plane primitives in the Klein disk model.

Points are stored in Klein coordinates, where geodesics are straight chords,
so segment tests reduce to planar predicates. The Poincare disk is kept only
as an independent distance oracle and for conformal rendering.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import DegenerateTriangleError, GeometryDomainError
from .utils.predicates import SegmentRelation, classify_segments

logger = logging.getLogger(__name__)


def _one_minus_norm2(x: float, y: float) -> float:
    rho = math.hypot(x, y)
    return (1.0 - rho) * (1.0 + rho)


@dataclass(frozen=True)
class HPoint:
    """Point of the hyperbolic plane in Klein coordinates."""
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryDomainError(f"non-finite Klein point ({self.x}, {self.y})")
        if self.x * self.x + self.y * self.y >= 1.0:
            raise GeometryDomainError(f"Klein point ({self.x}, {self.y}) is not inside the unit disk")

    @classmethod
    def origin(cls) -> "HPoint":
        return cls(0.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def __iter__(self):
        yield self.x
        yield self.y

    def __getitem__(self, i):
        return (self.x, self.y)[i]


@dataclass(frozen=True)
class PoincarePoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryDomainError(f"non-finite Poincare point ({self.x}, {self.y})")
        if self.x * self.x + self.y * self.y >= 1.0:
            raise GeometryDomainError(f"Poincare point ({self.x}, {self.y}) is not inside the unit disk")

    def __iter__(self):
        yield self.x
        yield self.y

    def __getitem__(self, i):
        return (self.x, self.y)[i]


@dataclass(frozen=True)
class HSegment:
    """Geodesic segment; in the Klein model the Euclidean chord a-b."""
    a: HPoint
    b: HPoint

    def __post_init__(self):
        if abs(self.a.x - self.b.x) <= config.EPS_POINT and abs(self.a.y - self.b.y) <= config.EPS_POINT:
            raise GeometryDomainError(f"segment endpoints coincide at ({self.a.x}, {self.a.y})")

    @property
    def length(self) -> float:
        return hyp_distance(self.a, self.b)


def _as_hpoint(p) -> HPoint:
    return p if isinstance(p, HPoint) else HPoint(float(p[0]), float(p[1]))


# --- distances ---

def hyp_distance(p, q) -> float:
    """
    Hyperbolic distance between two Klein points.

    cosh d = (1 - p.q) / sqrt((1 - |p|^2)(1 - |q|^2)); evaluated as
    d = 2 asinh(sqrt((cosh d - 1) / 2)) with the numerator rewritten as
    |p - q|^2 - (p x q)^2 so nearby points keep full relative precision.
    Points within NEAR_BOUNDARY of the circle go through the Poincare form.
    """
    p, q = _as_hpoint(p), _as_hpoint(q)
    wp = _one_minus_norm2(p.x, p.y)
    wq = _one_minus_norm2(q.x, q.y)
    if min(wp, wq) < config.NEAR_BOUNDARY:
        return _distance_via_poincare(p, q, wp, wq)

    a = 1.0 - (p.x * q.x + p.y * q.y)
    b = math.sqrt(wp * wq)
    dx, dy = p.x - q.x, p.y - q.y
    cross = p.x * q.y - p.y * q.x
    excess = (dx * dx + dy * dy - cross * cross) / (b * (a + b))
    return 2.0 * math.asinh(math.sqrt(max(excess, 0.0) / 2.0))


def _distance_via_poincare(p: HPoint, q: HPoint, wp: float, wq: float) -> float:
    sp, sq = math.sqrt(wp), math.sqrt(wq)
    ux, uy = p.x / (1.0 + sp), p.y / (1.0 + sp)
    vx, vy = q.x / (1.0 + sq), q.y / (1.0 + sq)
    # 1 - |u|^2 = 2s / (1 + s) without cancellation
    denom = math.sqrt((2.0 * sp / (1.0 + sp)) * (2.0 * sq / (1.0 + sq)))
    return 2.0 * math.asinh(math.hypot(ux - vx, uy - vy) / denom)


def hyp_distance_many(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Row-wise hyp_distance for (N, 2) arrays of Klein coordinates."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    rp = np.hypot(p[:, 0], p[:, 1])
    rq = np.hypot(q[:, 0], q[:, 1])
    if np.any(rp >= 1.0) or np.any(rq >= 1.0):
        raise GeometryDomainError("Klein coordinates outside the unit disk")
    wp = (1.0 - rp) * (1.0 + rp)
    wq = (1.0 - rq) * (1.0 + rq)

    a = 1.0 - np.einsum('ij,ij->i', p, q)
    b = np.sqrt(wp * wq)
    diff = p - q
    cross = p[:, 0] * q[:, 1] - p[:, 1] * q[:, 0]
    excess = (np.einsum('ij,ij->i', diff, diff) - cross * cross) / (b * (a + b))
    out = 2.0 * np.arcsinh(np.sqrt(np.maximum(excess, 0.0) / 2.0))

    near = np.minimum(wp, wq) < config.NEAR_BOUNDARY
    if np.any(near):
        sp, sq = np.sqrt(wp[near]), np.sqrt(wq[near])
        u = p[near] / (1.0 + sp)[:, None]
        v = q[near] / (1.0 + sq)[:, None]
        denom = np.sqrt((2.0 * sp / (1.0 + sp)) * (2.0 * sq / (1.0 + sq)))
        out[near] = 2.0 * np.arcsinh(np.linalg.norm(u - v, axis=1) / denom)
    return out


def poincare_distance(u, v) -> float:
    """Poincare-disk metric, arccosh(1 + 2|u-v|^2 / ((1-|u|^2)(1-|v|^2)))."""
    ux, uy = u
    vx, vy = v
    du = 1.0 - (ux * ux + uy * uy)
    dv = 1.0 - (vx * vx + vy * vy)
    if du <= 0.0 or dv <= 0.0:
        raise GeometryDomainError("Poincare point outside the unit disk")
    dist2 = (ux - vx) ** 2 + (uy - vy) ** 2
    return math.acosh(1.0 + 2.0 * dist2 / (du * dv))


# --- construction and model conversion ---

def radial_point(r: float, theta: float) -> HPoint:
    """Point at hyperbolic distance r from the origin in direction theta."""
    if r < 0:
        raise GeometryDomainError(f"negative hyperbolic radius {r}")
    rho = math.tanh(r)
    return HPoint(rho * math.cos(theta), rho * math.sin(theta))


def klein_to_poincare(p) -> PoincarePoint:
    p = _as_hpoint(p)
    s = math.sqrt(_one_minus_norm2(p.x, p.y))
    return PoincarePoint(p.x / (1.0 + s), p.y / (1.0 + s))


def poincare_to_klein(u) -> HPoint:
    u = u if isinstance(u, PoincarePoint) else PoincarePoint(float(u[0]), float(u[1]))
    scale = 2.0 / (1.0 + u.x * u.x + u.y * u.y)
    return HPoint(scale * u.x, scale * u.y)


def klein_to_poincare_many(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    rho = np.hypot(p[:, 0], p[:, 1])
    s = np.sqrt((1.0 - rho) * (1.0 + rho))
    return p / (1.0 + s)[:, None]


# --- triangles ---

def angles_from_sides(a, b, c, curvature: int = -1):
    """
    Interior angles opposite sides a, b, c (scalars or arrays).

    Half-angle form sin(g/2) = sqrt(f(s-a) f(s-b) / (f(a) f(b))) with
    f = sinh, identity or sin for curvature -1, 0, +1; accurate for the thin
    triangles near the disk boundary where the plain law of cosines cancels.
    """
    f = {-1: np.sinh, 0: lambda t: t, 1: np.sin}[curvature]
    a, b, c = (np.asarray(t, dtype=float) for t in (a, b, c))
    s = 0.5 * (a + b + c)
    sa, sb, sc = (np.maximum(s - t, 0.0) for t in (a, b, c))

    def half(opp_adj1, opp_adj2, adj1, adj2):
        ratio = f(opp_adj1) * f(opp_adj2) / (f(adj1) * f(adj2))
        return 2.0 * np.arcsin(np.sqrt(np.clip(ratio, 0.0, 1.0)))

    alpha = half(sb, sc, b, c)
    beta = half(sa, sc, a, c)
    gamma = half(sa, sb, a, b)
    return alpha, beta, gamma


def _check_triangle(a: HPoint, b: HPoint, c: HPoint):
    sides = (hyp_distance(b, c), hyp_distance(a, c), hyp_distance(a, b))
    if min(sides) < config.EPS_POINT:
        raise DegenerateTriangleError(f"triangle side shorter than {config.EPS_POINT}")
    ux, uy = b.x - a.x, b.y - a.y
    vx, vy = c.x - a.x, c.y - a.y
    sine = abs(ux * vy - uy * vx) / (math.hypot(ux, uy) * math.hypot(vx, vy))
    if sine < config.EPS_COLLINEAR:
        raise DegenerateTriangleError("triangle vertices are collinear")
    return sides


def triangle_angles(a, b, c) -> tuple:
    """Angles at a, b and c of the geodesic triangle abc."""
    a, b, c = _as_hpoint(a), _as_hpoint(b), _as_hpoint(c)
    la, lb, lc = _check_triangle(a, b, c)
    return tuple(float(t) for t in angles_from_sides(la, lb, lc, curvature=-1))


def triangle_area(a, b, c) -> float:
    """Gauss-Bonnet area, pi minus the angle sum."""
    return math.pi - sum(triangle_angles(a, b, c))


def lhuilier_area(a, b, c) -> np.ndarray:
    """Area from the three side lengths, tan(A/4) = sqrt(prod tanh(half-excesses))."""
    a, b, c = (np.asarray(t, dtype=float) for t in (a, b, c))
    s = 0.5 * (a + b + c)
    prod = (np.tanh(s / 2.0) * np.tanh(np.maximum(s - a, 0.0) / 2.0)
            * np.tanh(np.maximum(s - b, 0.0) / 2.0) * np.tanh(np.maximum(s - c, 0.0) / 2.0))
    return 4.0 * np.arctan(np.sqrt(prod))


def right_hypotenuse(a: float, b: float) -> float:
    """Hypotenuse of a right triangle with legs a and b (cosh c = cosh a cosh b)."""
    if a < 0 or b < 0:
        raise GeometryDomainError(f"negative leg length ({a}, {b})")
    # cosh c - 1 = 2 sinh^2(a/2) cosh b + 2 sinh^2(b/2)
    half = math.sinh(a / 2.0) ** 2 * math.cosh(b) + math.sinh(b / 2.0) ** 2
    return 2.0 * math.asinh(math.sqrt(half))


def segment_intersect(s1: HSegment, s2: HSegment) -> SegmentRelation:
    return classify_segments(s1.a, s1.b, s2.a, s2.b)
