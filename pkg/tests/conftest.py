"""Shared mesh fixtures; the generated ones are session scoped."""
import pytest

from geotri.generators.euclidean import EuclideanParams, generate_euclidean
from geotri.generators.hyperbolic import HyperbolicParams, RadiusSchedule, generate_hyperbolic
from geotri.generators.lattice import generate_hexagonal, generate_torus
from geotri.generators.sphere import generate_sphere
from geotri.mesh import Edge, Geometry, Vertex, build_mesh


@pytest.fixture(scope='session')
def hyp20():
    return generate_hyperbolic(HyperbolicParams(RadiusSchedule.default(0.45), layers=20))


@pytest.fixture(scope='session')
def hyp50():
    return generate_hyperbolic(HyperbolicParams(RadiusSchedule.default(0.45), layers=50))


@pytest.fixture(scope='session')
def hex3():
    return generate_hexagonal(3)


@pytest.fixture(scope='session')
def euclid7():
    return generate_euclidean(EuclideanParams(7, 4))


@pytest.fixture(scope='session')
def torus():
    return generate_torus()


@pytest.fixture(scope='session')
def octahedron():
    return generate_sphere(4)


@pytest.fixture
def square():
    """Unit square split along the 0-2 diagonal."""
    verts = [Vertex(0, (0.0, 0.0)), Vertex(1, (1.0, 0.0)), Vertex(2, (1.0, 1.0)), Vertex(3, (0.0, 1.0))]
    edges = [Edge(0, 1), Edge(1, 2), Edge(2, 3), Edge(3, 0), Edge(0, 2)]
    return build_mesh(Geometry.EUCLIDEAN, verts, edges)


def planar_mesh(points, edges, geometry=Geometry.EUCLIDEAN):
    verts = [Vertex(i, p) for i, p in enumerate(points)]
    return build_mesh(geometry, verts, [Edge(u, v) for u, v in edges])
