from .euclidean import EuclideanParams, Schedule, generate_euclidean, layer_count
from .hyperbolic import HyperbolicParams, RadiusSchedule, generate_hyperbolic, validate_schedule
from .lattice import generate_hexagonal, generate_torus
from .sphere import generate_sphere

__all__ = [
    'EuclideanParams', 'Schedule', 'generate_euclidean', 'layer_count',
    'HyperbolicParams', 'RadiusSchedule', 'generate_hyperbolic', 'validate_schedule',
    'generate_hexagonal', 'generate_torus', 'generate_sphere',
]
