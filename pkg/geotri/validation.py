"""
Check runner for meshes.

Checks run in parallel on a thread pool; a check whose precondition fails
(not closed, not a disk) is turned into a failed report carrying the error
message, so one bad check never hides the others.
"""
import concurrent.futures
import logging
from typing import Iterable, Optional

from . import config
from .errors import GeotriError
from .mesh import (
    Geometry,
    Mesh,
    ValidationReport,
    Violation,
    check_regular,
    closed_surface_identity,
    disk_identity,
    euler_characteristic,
    noncrossing_check,
)

logger = logging.getLogger(__name__)

CHECK_NAMES = ('degree', 'crossing', 'euler', 'disk', 'closed')


def euler_check(m: Mesh, genus: Optional[int] = None) -> ValidationReport:
    """
    V - E + F against the surface's Euler characteristic: 1 for a patch with
    boundary, 2 - 2g for a closed surface (g from the argument or the mesh
    params, default 0). The face count from the rotation system is reported
    next to the count Euler's formula predicts.
    """
    chi = euler_characteristic(m)
    if m.boundary:
        expected = 1
    else:
        g = genus if genus is not None else int(m.params.get('genus', 0))
        expected = 2 - 2 * g
    predicted_faces = expected - m.num_vertices + m.num_edges
    report = ValidationReport('euler', summary={
        'V': m.num_vertices, 'E': m.num_edges, 'F': m.num_faces,
        'chi': chi, 'expected': expected, 'faces_predicted': predicted_faces,
    })
    if chi != expected:
        report.violations.append(Violation((), {'chi': chi, 'expected': expected}))
    return report


def _degree_k(m: Mesh, k: Optional[int]) -> int:
    if k is not None:
        return k
    if 'k' in m.params:
        return int(m.params['k'])
    if m.geometry is Geometry.HYPERBOLIC:
        return 6
    raise GeotriError("degree check needs k (not recorded in the mesh params)")


def available_checks(m: Mesh) -> tuple:
    """Default checks for a mesh: planar patches or closed surfaces."""
    kind = 'planar' if m.geometry.planar else 'closed'
    return config.DEFAULT_CHECKS[kind]


def _error_report(name: str, exc: Exception) -> ValidationReport:
    return ValidationReport(name, violations=[Violation((), {'error': f"ERROR: {exc}"})])


def run_checks(m: Mesh, checks: Optional[Iterable[str]] = None, k: Optional[int] = None,
               workers: int = config.WORKERS) -> list:
    """Run the named checks concurrently; reports come back in request order."""
    checks = list(checks) if checks is not None else list(available_checks(m))
    unknown = [c for c in checks if c not in CHECK_NAMES]
    if unknown:
        raise ValueError(f"unknown checks {unknown}; choose from {', '.join(CHECK_NAMES)}")

    tasks = {
        'degree': lambda: check_regular(m, _degree_k(m, k)),
        'crossing': lambda: noncrossing_check(m),
        'euler': lambda: euler_check(m),
        'disk': lambda: disk_identity(m),
        'closed': lambda: closed_surface_identity(m),
    }
    results = {}
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        future_to_name = {executor.submit(tasks[name]): name for name in dict.fromkeys(checks)}
        for future in concurrent.futures.as_completed(future_to_name):
            name = future_to_name[future]
            try:
                results[name] = future.result()
            except GeotriError as exc:
                logger.warning("[Validate] %s could not run: %s", name, exc)
                results[name] = _error_report(name, exc)
            logger.info("[Validate] %s: %s", name, "pass" if results[name].passed else "FAIL")
    return [results[name] for name in checks]
