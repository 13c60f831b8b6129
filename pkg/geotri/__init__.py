"""Degree-regular geodesic triangulations: generators, checks and measurements."""
from .errors import GeotriError
from .hyp_kernel import HPoint, hyp_distance
from .mesh import EdgeType, Geometry, Mesh, ValidationReport, feasibility

__version__ = "1.0.0"

__all__ = ['GeotriError', 'HPoint', 'hyp_distance', 'EdgeType', 'Geometry', 'Mesh',
           'ValidationReport', 'feasibility', '__version__']
