"""
Six-regular geodesic triangulation of the hyperbolic plane in the Klein disk.

Ring n sits on the circle of hyperbolic radius r_n = alpha * ln n (with a
short bootstrap for the first rings, where ln n is too small); each of the
six sectors carries n + 1 equally spaced vertices per ring, the two ray
vertices being shared with the neighbouring sectors. Rings are joined by
ray edges (Type0), same-ring edges (Type1) and zig-zag edges (Type2).
"""
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import config
from ..analysis import SlopeFit, loglog_slope
from ..errors import ScheduleError, ScheduleValidationError
from ..hyp_kernel import angles_from_sides, hyp_distance_many, radial_point
from ..mesh import Geometry, Mesh, assemble_mesh
from .lattice import HexTopology, hexagonal_topology, ring_coordinates

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RadiusSchedule:
    """
    r_n = bootstrap[n-1] for n <= len(bootstrap), else alpha * ln n.

    An empty bootstrap is the pure logarithmic rule (r_1 = 0, which
    validate_schedule reports as a failure).
    """
    alpha: float = config.DEFAULT_ALPHA
    bootstrap: tuple = ()

    def __post_init__(self):
        if not 0.0 < self.alpha < 0.5:
            raise ScheduleError(f"alpha must lie in (0, 0.5), got {self.alpha}")
        boot = tuple(float(r) for r in self.bootstrap)
        object.__setattr__(self, 'bootstrap', boot)
        if not boot:
            return
        if boot[0] <= 0:
            raise ScheduleError(f"bootstrap radius r_1 must be positive, got {boot[0]}")
        if any(b <= a for a, b in zip(boot, boot[1:])):
            raise ScheduleError("bootstrap radii must be strictly increasing")
        splice = self.alpha * math.log(len(boot) + 1)
        if boot[-1] >= splice:
            raise ScheduleError(
                f"bootstrap radius r_{len(boot)}={boot[-1]:.6g} does not stay below "
                f"alpha*ln({len(boot) + 1})={splice:.6g}")

    @classmethod
    def default(cls, alpha: float = config.DEFAULT_ALPHA,
                layers: int = config.DEFAULT_BOOTSTRAP_LAYERS) -> "RadiusSchedule":
        """Bootstrap r_n = alpha * ln(n + 1/2) for the first `layers` rings."""
        boot = tuple(alpha * math.log(n + config.BOOTSTRAP_LOG_SHIFT) for n in range(1, layers + 1))
        return cls(alpha, boot)

    @classmethod
    def pure(cls, alpha: float) -> "RadiusSchedule":
        return cls(alpha, ())

    def radii(self, n_max: int) -> np.ndarray:
        """r_1..r_n_max as an array (index 0 is r_1)."""
        n = np.arange(1, n_max + 1, dtype=float)
        r = self.alpha * np.log(n)
        b = min(len(self.bootstrap), n_max)
        r[:b] = self.bootstrap[:b]
        return r


@dataclass(frozen=True)
class HyperbolicParams:
    schedule: RadiusSchedule = field(default_factory=RadiusSchedule.default)
    layers: int = 1

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError(f"layers must be at least 1, got {self.layers}")

    def to_dict(self) -> dict:
        return {'alpha': self.schedule.alpha, 'layers': self.layers,
                'bootstrap': list(self.schedule.bootstrap)}


def layer_radius(s: RadiusSchedule, n: int) -> float:
    if n < 1:
        raise ValueError(f"layer index must be at least 1, got {n}")
    if n <= len(s.bootstrap):
        return s.bootstrap[n - 1]
    return s.alpha * math.log(n)


def sector_vertices(s: RadiusSchedule, n: int, sector: int = 0) -> list:
    """The n + 1 vertices of ring n in one sector, ray vertices included."""
    r = layer_radius(s, n)
    base = sector * math.pi / 3
    return [radial_point(r, base + k * math.pi / (3 * n)) for k in range(n + 1)]


# --- validity inequality ---

def inequality_margin(s: RadiusSchedule, n: int) -> tuple:
    """(lhs, rhs) of sinh(r_{n+1} - r_n) > cosh r_n sinh r_{n+1} (1 - cos(pi / 6n))."""
    r0, r1 = layer_radius(s, n), layer_radius(s, n + 1)
    lhs = math.sinh(r1 - r0)
    # 1 - cos x = 2 sin^2(x/2)
    rhs = math.cosh(r0) * math.sinh(r1) * 2.0 * math.sin(math.pi / (12 * n)) ** 2
    return lhs, rhs


def margin_series(s: RadiusSchedule, n_max: int):
    """Vectorised inequality_margin for n = 1..n_max: (n, lhs, rhs) arrays."""
    r = s.radii(n_max + 1)
    n = np.arange(1, n_max + 1, dtype=float)
    lhs = np.sinh(r[1:] - r[:-1])
    rhs = np.cosh(r[:-1]) * np.sinh(r[1:]) * 2.0 * np.sin(np.pi / (12 * n)) ** 2
    return n.astype(np.int64), lhs, rhs


def tangent_conditions(s: RadiusSchedule, n: int) -> tuple:
    """
    The two tangent-angle forms: tanh r_n < tanh r_{n+1} cos(pi / 6(n+1)) and
    tanh r_n < tanh r_{n+1} cos(pi / 6n). The second is equivalent to the
    sinh form of inequality_margin; the first follows from it.
    """
    t0, t1 = math.tanh(layer_radius(s, n)), math.tanh(layer_radius(s, n + 1))
    return (t0 < t1 * math.cos(math.pi / (6 * (n + 1))),
            t0 < t1 * math.cos(math.pi / (6 * n)))


@dataclass
class ScheduleReport:
    ok: bool
    first_pass: int
    failures: list
    n_max: int
    lhs_fit: Optional[SlopeFit] = None
    rhs_fit: Optional[SlopeFit] = None
    orders_consistent: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            'ok': self.ok, 'first_pass': self.first_pass, 'failures': self.failures,
            'n_max': self.n_max,
            # order fits are reported next to ok, never folded into it
            'orders': {
                'affects_ok': False,
                'lhs_fit': self.lhs_fit.to_dict() if self.lhs_fit else None,
                'rhs_fit': self.rhs_fit.to_dict() if self.rhs_fit else None,
                'consistent': self.orders_consistent,
            },
        }


def validate_schedule(s: RadiusSchedule, n_max: int) -> ScheduleReport:
    """
    Evaluate the validity inequality for n = 1..n_max.

    A ring fails when lhs <= rhs or when r_n is not positive and below
    r_{n+1}. With at least MIN_LAYERS_FOR_FIT rings the top decade is fitted
    in log-log and compared against the orders -1 and -(2 - 2 alpha);
    orders_consistent is informational and does not affect ok.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    n, lhs, rhs = margin_series(s, n_max)
    r = s.radii(n_max + 1)
    degenerate = (r[:-1] <= 0) | (r[1:] <= r[:-1])
    failed = degenerate | ~(lhs > rhs)
    failures = n[failed].tolist()
    first_pass = failures[-1] + 1 if failures else 1

    report = ScheduleReport(ok=not failures, first_pass=first_pass, failures=failures, n_max=n_max)
    if n_max >= config.MIN_LAYERS_FOR_FIT:
        lo = max(first_pass, n_max // 10)
        if n_max - lo >= 2:
            report.lhs_fit = loglog_slope(list(zip(n.tolist(), lhs.tolist())), lo, n_max)
            report.rhs_fit = loglog_slope(list(zip(n.tolist(), rhs.tolist())), lo, n_max)
            report.orders_consistent = (
                abs(report.lhs_fit.exponent + 1.0) <= config.SLOPE_TOLERANCE
                and abs(report.rhs_fit.exponent + (2.0 - 2.0 * s.alpha)) <= config.SLOPE_TOLERANCE)
    logger.info("[Schedule] alpha=%g n_max=%d ok=%s failures=%d first_pass=%d",
                s.alpha, n_max, report.ok, len(failures), first_pass)
    return report


# --- generation ---

@dataclass(frozen=True)
class HyperbolicEmission:
    """Raw arrays of a generated patch, before mesh assembly."""
    topology: HexTopology
    positions: np.ndarray
    radii: np.ndarray      # radii[n] = r_n, radii[0] = 0


def ring_positions(r: float, n: int) -> np.ndarray:
    s, k = ring_coordinates(n)
    theta = s * (np.pi / 3) + k * (np.pi / (3 * n))
    rho = math.tanh(r)
    return np.stack([rho * np.cos(theta), rho * np.sin(theta)], axis=1)


def emit_hyperbolic(p: HyperbolicParams) -> HyperbolicEmission:
    """Vertices, typed edges and faces of the patch, without validation."""
    topo = hexagonal_topology(p.layers)
    radii = np.concatenate([[0.0], p.schedule.radii(p.layers)])
    positions = np.concatenate([np.zeros((1, 2))] +
                               [ring_positions(radii[n], n) for n in range(1, p.layers + 1)])
    return HyperbolicEmission(topo, positions, radii)


def generate_hyperbolic(p: HyperbolicParams) -> Mesh:
    """Validate the schedule up to p.layers, then build the mesh."""
    report = validate_schedule(p.schedule, p.layers)
    if not report.ok:
        raise ScheduleValidationError(
            f"schedule fails the validity inequality at {len(report.failures)} ring(s), "
            f"first {report.failures[:5]}", report.failures)
    started = time.perf_counter()
    em = emit_hyperbolic(p)
    topo = em.topology
    mesh = assemble_mesh(Geometry.HYPERBOLIC, em.positions, topo.edges, topo.etypes,
                         layers=topo.layers, indices=topo.indices, sectors=topo.sectors,
                         faces=topo.faces, params=p.to_dict())
    logger.info("[Generate] hyperbolic alpha=%g layers=%d: V=%d E=%d F=%d in %.2fs",
                p.schedule.alpha, p.layers, mesh.num_vertices, mesh.num_edges, mesh.num_faces,
                time.perf_counter() - started)
    return mesh


def _ring_band(s: RadiusSchedule, n: int):
    """Sector-0 triangles between rings n and n+1 as (a, b, c) Klein arrays."""
    r0, r1 = layer_radius(s, n), layer_radius(s, n + 1)
    k_in = np.arange(n + 1)
    k_out = np.arange(n + 2)
    inner = math.tanh(r0) * np.stack([np.cos(k_in * np.pi / (3 * n)), np.sin(k_in * np.pi / (3 * n))], axis=1)
    outer = math.tanh(r1) * np.stack([np.cos(k_out * np.pi / (3 * (n + 1))),
                                      np.sin(k_out * np.pi / (3 * (n + 1)))], axis=1)
    a = np.concatenate([inner[:-1], inner])
    b = np.concatenate([outer[1:-1], outer[:-1]])
    c = np.concatenate([inner[1:], outer[1:]])
    return a, b, c


def _min_angles(a, b, c) -> float:
    la, lb, lc = hyp_distance_many(b, c), hyp_distance_many(a, c), hyp_distance_many(a, b)
    return float(min(np.min(t) for t in angles_from_sides(la, lb, lc, curvature=-1)))


def sector_min_angles(s: RadiusSchedule, n_lo: int, n_hi: int) -> list:
    """
    Minimum triangle angle among the faces whose innermost vertex lies on
    ring n, for n_lo <= n <= n_hi; ring 0 is the origin fan. One sector is
    enough since the six are congruent.
    """
    if n_lo < 0 or n_hi < n_lo:
        raise ValueError(f"bad ring range {n_lo}:{n_hi}")
    out = []
    for n in range(n_lo, n_hi + 1):
        if n == 0:
            r1 = layer_radius(s, 1)
            o = np.zeros((1, 2))
            v0 = np.array([[math.tanh(r1), 0.0]])
            v1 = math.tanh(r1) * np.array([[math.cos(math.pi / 3), math.sin(math.pi / 3)]])
            out.append((0, _min_angles(o, v0, v1)))
        else:
            out.append((n, _min_angles(*_ring_band(s, n))))
    return out
