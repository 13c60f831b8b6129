"""
Orientation predicates and segment classification.

orient2d follows the usual sign convention (ccw positive, returns twice the
signed area). Float results whose magnitude is below the forward error bound
are recomputed exactly with Fractions, so signs are never wrong because of
roundoff.
"""
import logging
from enum import Enum
from fractions import Fraction

import numpy as np

from .. import config

logger = logging.getLogger(__name__)

# Error bound for the 2x2 determinant evaluated in double precision.
CCW_ERRBOUND = (3.0 + 16.0 * np.finfo(float).eps) * np.finfo(float).eps / 2.0


class SegmentRelation(str, Enum):
    DISJOINT = "disjoint"
    SHARE_ENDPOINT = "share-endpoint"
    PROPER_CROSSING = "proper-crossing"
    OVERLAP = "overlap"


def _orient2d_exact(pa, pb, pc) -> int:
    ax, ay = Fraction(pa[0]), Fraction(pa[1])
    bx, by = Fraction(pb[0]), Fraction(pb[1])
    cx, cy = Fraction(pc[0]), Fraction(pc[1])
    det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    return (det > 0) - (det < 0)


def orient2d(pa, pb, pc) -> int:
    """Sign of the turn pa -> pb -> pc: +1 left (ccw), 0 straight, -1 right."""
    detleft = (pa[0] - pc[0]) * (pb[1] - pc[1])
    detright = (pa[1] - pc[1]) * (pb[0] - pc[0])
    det = detleft - detright
    if abs(det) > CCW_ERRBOUND * (abs(detleft) + abs(detright)):
        return 1 if det > 0 else -1
    return _orient2d_exact(pa, pb, pc)


def orient2d_many(pa: np.ndarray, pb: np.ndarray, pc: np.ndarray) -> np.ndarray:
    """Vectorised orient2d over (N, 2) arrays; returns int8 signs."""
    detleft = (pa[:, 0] - pc[:, 0]) * (pb[:, 1] - pc[:, 1])
    detright = (pa[:, 1] - pc[:, 1]) * (pb[:, 0] - pc[:, 0])
    det = detleft - detright
    signs = np.sign(det).astype(np.int8)
    uncertain = np.flatnonzero(np.abs(det) <= CCW_ERRBOUND * (np.abs(detleft) + np.abs(detright)))
    if uncertain.size:
        logger.debug("[Predicates] exact fallback for %d orientations", uncertain.size)
        for i in uncertain:
            signs[i] = _orient2d_exact(pa[i], pb[i], pc[i])
    return signs


def _close(p, q, eps) -> bool:
    return abs(p[0] - q[0]) <= eps and abs(p[1] - q[1]) <= eps


def _within_box(p, a, b) -> bool:
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _collinear_overlap(a0, a1, b0, b1) -> float:
    """Length of the common part of two collinear segments (negative if apart)."""
    axis = 0 if abs(a1[0] - a0[0]) >= abs(a1[1] - a0[1]) else 1
    lo_a, hi_a = sorted((a0[axis], a1[axis]))
    lo_b, hi_b = sorted((b0[axis], b1[axis]))
    return min(hi_a, hi_b) - max(lo_a, lo_b)


def _nearly_parallel(o, p, q, eps) -> bool:
    """Rays o->p and o->q point the same way within a sine of eps."""
    ux, uy = p[0] - o[0], p[1] - o[1]
    vx, vy = q[0] - o[0], q[1] - o[1]
    cross = ux * vy - uy * vx
    dot = ux * vx + uy * vy
    return dot > 0 and abs(cross) <= eps * np.hypot(ux, uy) * np.hypot(vx, vy)


def classify_segments(a0, a1, b0, b1, eps: float = config.EPS_POINT) -> SegmentRelation:
    """
    Classify two straight segments a0-a1 and b0-b1.

    Shared endpoints are detected within eps; a shared endpoint with the two
    segments leaving in the same direction (sine below EPS_COLLINEAR) is an
    overlap. An endpoint resting on the interior of the other segment counts
    as a proper crossing.
    """
    same = _close(a0, b0, eps) and _close(a1, b1, eps)
    flipped = _close(a0, b1, eps) and _close(a1, b0, eps)
    if same or flipped:
        return SegmentRelation.OVERLAP

    for p, p_other, q, q_other in ((a0, a1, b0, b1), (a0, a1, b1, b0),
                                   (a1, a0, b0, b1), (a1, a0, b1, b0)):
        if _close(p, q, eps):
            if _nearly_parallel(p, p_other, q_other, config.EPS_COLLINEAR):
                return SegmentRelation.OVERLAP
            return SegmentRelation.SHARE_ENDPOINT

    o1 = orient2d(a0, a1, b0)
    o2 = orient2d(a0, a1, b1)
    o3 = orient2d(b0, b1, a0)
    o4 = orient2d(b0, b1, a1)

    if o1 == o2 == o3 == o4 == 0:
        if _collinear_overlap(a0, a1, b0, b1) >= 0:
            return SegmentRelation.OVERLAP
        return SegmentRelation.DISJOINT

    if o1 * o2 < 0 and o3 * o4 < 0:
        return SegmentRelation.PROPER_CROSSING

    # T-junctions
    if (o1 == 0 and _within_box(b0, a0, a1)) or (o2 == 0 and _within_box(b1, a0, a1)) \
            or (o3 == 0 and _within_box(a0, b0, b1)) or (o4 == 0 and _within_box(a1, b0, b1)):
        return SegmentRelation.PROPER_CROSSING

    return SegmentRelation.DISJOINT
