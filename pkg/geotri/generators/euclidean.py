"""
k-regular geodesic triangulations of the Euclidean plane, k >= 7.

Layer n carries a_n vertices evenly spaced on the circle of radius r_n,
where a_0 = 0, a_1 = k and a_{n+1} = (k - 4) a_n - a_{n-1}. Consecutive
layers are joined by contiguous fans: every inner vertex sends its
remaining degree outward, and neighbouring fans share their end vertex.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .. import config
from ..errors import AssignmentInfeasibleError, LayerOverflowError, MeshTooLargeError, UnsupportedDegreeError
from ..mesh import ETYPE_CODE, EdgeType, Geometry, Mesh, assemble_mesh
from .lattice import generate_hexagonal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y


class Schedule(str, Enum):
    UNIT = "unit"            # r_n = n
    GEOMETRIC = "geometric"  # r_n = base ** n


def _reject_small_degree(k: int):
    if k <= 5:
        raise UnsupportedDegreeError(
            f"no k-regular geodesic triangulation of the plane for k={k}: a disk patch satisfies "
            "sum over interior (6 - d) = 6 + sum over boundary (d - 4), which cannot hold "
            "for arbitrarily large patches when every interior degree is below 6")


@dataclass(frozen=True)
class EuclideanParams:
    k: int
    layers: int
    schedule: Schedule = Schedule.UNIT
    base: float = 2.0

    def __post_init__(self):
        _reject_small_degree(self.k)
        if self.layers < 1:
            raise ValueError(f"layers must be at least 1, got {self.layers}")
        object.__setattr__(self, 'schedule', Schedule(self.schedule))
        if self.schedule is Schedule.GEOMETRIC and not self.base > 1.0:
            raise ValueError(f"geometric base must exceed 1, got {self.base}")

    def radius(self, n: int) -> float:
        if self.schedule is Schedule.UNIT:
            return float(n)
        return self.base ** n

    def to_dict(self) -> dict:
        out = {'k': self.k, 'layers': self.layers, 'schedule': self.schedule.value}
        if self.schedule is Schedule.GEOMETRIC:
            out['base'] = self.base
        return out


def layer_count(k: int, n: int) -> int:
    """a_n by the integer recurrence (exact Python ints)."""
    if k < 6:
        raise UnsupportedDegreeError(f"layer counts are defined for k >= 6, got {k}")
    if n < 0:
        raise ValueError(f"layer index must be non-negative, got {n}")
    prev, cur = 0, k
    if n == 0:
        return 0
    for i in range(2, n + 1):
        prev, cur = cur, (k - 4) * cur - prev
        if cur > config.LAYER_COUNT_LIMIT:
            raise LayerOverflowError(k, i)
    return cur


def growth_root(k: int) -> float:
    """Larger root of x^2 - (k - 4) x + 1 = 0."""
    m = k - 4
    return (m + math.sqrt(m * m - 4)) / 2.0


def layer_count_closed_form(k: int, n: int) -> float:
    if k < 7:
        raise UnsupportedDegreeError(f"closed form needs distinct roots, k >= 7, got {k}")
    alpha = growth_root(k)
    beta = 1.0 / alpha
    return k * (alpha ** n - beta ** n) / (alpha - beta)


def _spread(count: int, total: int) -> np.ndarray:
    """Boolean mask of `count` positions spread over `total` by floor rounding."""
    j = np.arange(total)
    return (((j + 1) * count) // total) > ((j * count) // total)


def interlayer_assignment(a_prev: int, a_next: int, k: int,
                          inward: Optional[Sequence[int]] = None) -> list:
    """
    (inner index, outer index) pairs joining layer sizes a_prev -> a_next.

    Inner vertex v has 2 same-layer edges and inward[v] edges towards the
    centre, so it sends o_v = k - 2 - inward[v] edges outward to a contiguous
    run of outer vertices; each run starts where the previous one ends.
    Shared run ends get 2 inward edges, all other outer vertices 1. The
    starting offset centres the runs on their inner vertices.

    Without `inward`, (k - 4) a_prev - a_next inner vertices are taken to
    have 2 inward edges, spread by floor rounding.
    """
    if a_prev == 1:
        return [(0, j) for j in range(a_next)]
    if not a_next > a_prev >= 1:
        raise AssignmentInfeasibleError(f"layer sizes must grow, got {a_prev} -> {a_next}")

    if inward is None:
        twos = (k - 4) * a_prev - a_next
        if not 0 <= twos <= a_prev:
            raise AssignmentInfeasibleError(
                f"no inward-degree split gives {a_next} outer vertices from {a_prev} at k={k}")
        inward = np.where(_spread(twos, a_prev), 2, 1)
    inward = np.asarray(inward, dtype=np.int64)
    if len(inward) != a_prev or np.any((inward < 1) | (inward > 2)):
        raise AssignmentInfeasibleError("inward degrees must be 1 or 2 for every inner vertex")

    out = k - 2 - inward
    if np.any(out < 2) or int(np.sum(out - 1)) != a_next:
        raise AssignmentInfeasibleError(
            f"outward budgets {int(np.sum(out - 1))} do not cover {a_next} outer vertices")

    starts = np.concatenate([[0], np.cumsum(out - 1)[:-1]])
    centre = starts + (out - 1) / 2.0
    dev = a_next * np.arange(a_prev) / a_prev - centre
    t0 = int(round((dev.max() + dev.min()) / 2.0))

    pairs = []
    for v in range(a_prev):
        first = t0 + int(starts[v])
        pairs.extend((v, (first + j) % a_next) for j in range(int(out[v])))
    return pairs


def _layer_sizes(k: int, layers: int) -> list:
    sizes = [layer_count(k, n) for n in range(layers + 1)]
    total = 1 + sum(sizes)
    if total > config.MAX_EUCLIDEAN_VERTICES:
        raise MeshTooLargeError(
            f"k={k} with {layers} layers needs {total} vertices (limit {config.MAX_EUCLIDEAN_VERTICES})")
    return sizes


def generate_euclidean(p: EuclideanParams) -> Mesh:
    """Layered k-regular patch; k = 6 yields the hexagonal lattice patch."""
    if p.k == 6:
        return generate_hexagonal(p.layers)
    sizes = _layer_sizes(p.k, p.layers)
    first_id = np.cumsum([1] + sizes[1:])     # id of vertex 0 of layer n is first_id[n-1]
    t1, t2 = ETYPE_CODE[EdgeType.TYPE1], ETYPE_CODE[EdgeType.TYPE2]

    positions = [np.zeros((1, 2))]
    layers = [np.zeros(1, np.int64)]
    indices = [np.zeros(1, np.int64)]
    edges = [np.stack([np.zeros(p.k, np.int64), first_id[0] + np.arange(p.k)], axis=1)]
    etypes = [np.full(p.k, t2, np.int8)]

    inward = np.ones(p.k, dtype=np.int64)
    for n in range(1, p.layers + 1):
        a = sizes[n]
        base = int(first_id[n - 1])
        j = np.arange(a)
        theta = 2.0 * np.pi * j / a
        positions.append(p.radius(n) * np.stack([np.cos(theta), np.sin(theta)], axis=1))
        layers.append(np.full(a, n, np.int64))
        indices.append(j.astype(np.int64))
        edges.append(np.stack([base + j, base + (j + 1) % a], axis=1))
        etypes.append(np.full(a, t1, np.int8))
        if n == p.layers:
            break
        pairs = np.array(interlayer_assignment(a, sizes[n + 1], p.k, inward), dtype=np.int64)
        edges.append(np.stack([base + pairs[:, 0], int(first_id[n]) + pairs[:, 1]], axis=1))
        etypes.append(np.full(len(pairs), t2, np.int8))
        inward = np.bincount(pairs[:, 1], minlength=sizes[n + 1])

    mesh = assemble_mesh(Geometry.EUCLIDEAN, np.concatenate(positions), np.concatenate(edges),
                         np.concatenate(etypes), layers=np.concatenate(layers),
                         indices=np.concatenate(indices), params=p.to_dict())
    logger.info("[Generate] euclidean k=%d layers=%d %s: V=%d E=%d F=%d", p.k, p.layers,
                p.schedule.value, mesh.num_vertices, mesh.num_edges, mesh.num_faces)
    return mesh
