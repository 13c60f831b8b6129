import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from geotri.errors import (
    DanglingEndpointError,
    DuplicateEdgeError,
    FaceMismatchError,
    GeometryDomainError,
    MeshError,
    NotADiskError,
    NotClosedError,
    SelfLoopError,
)
from geotri.mesh import (
    Edge,
    EdgeType,
    Geometry,
    Vertex,
    assemble_mesh,
    build_mesh,
    check_regular,
    closed_surface_identity,
    disk_identity,
    euler_characteristic,
    feasibility,
    noncrossing_check,
    vertex_degrees,
)
from geotri.utils.predicates import orient2d

from conftest import planar_mesh

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


class TestBuild:
    def test_square_faces(self, square):
        assert square.num_faces == 2
        assert square.faces.tolist() == [[0, 1, 2], [0, 2, 3]]
        for f in square.faces:
            assert orient2d(*(square.positions[i] for i in f)) > 0
        assert euler_characteristic(square) == 1
        assert square.boundary == frozenset({0, 1, 2, 3})
        assert square.boundary_edges.tolist() == [0, 1, 2, 3]

    def test_records(self, square):
        assert square.vertices[2] == Vertex(2, (1.0, 1.0), 0, 2, None)
        assert square.edge_list[4] == Edge(0, 2, EdgeType.GENERIC)
        assert vertex_degrees(square) == {0: 3, 1: 2, 2: 3, 3: 2}

    def test_immutable(self, square):
        with pytest.raises(ValueError):
            square.positions[0, 0] = 5.0
        with pytest.raises(ValueError):
            square.edges[0, 0] = 3

    def test_ids_in_any_order(self):
        verts = [Vertex(1, (1.0, 0.0)), Vertex(0, (0.0, 0.0)), Vertex(2, (0.0, 1.0))]
        m = build_mesh(Geometry.EUCLIDEAN, verts, [Edge(0, 1), Edge(1, 2), Edge(2, 0)])
        assert m.positions[1].tolist() == [1.0, 0.0]
        assert m.num_faces == 1

    def test_sparse_ids_rejected(self):
        verts = [Vertex(0, (0.0, 0.0)), Vertex(2, (1.0, 0.0))]
        with pytest.raises(MeshError):
            build_mesh(Geometry.EUCLIDEAN, verts, [Edge(0, 2)])

    def test_duplicate_edge(self):
        with pytest.raises(DuplicateEdgeError):
            planar_mesh(SQUARE, [(0, 1), (1, 2), (2, 1)])

    def test_dangling_endpoint(self):
        with pytest.raises(DanglingEndpointError):
            planar_mesh(SQUARE, [(0, 1), (1, 7)])

    def test_self_loop(self):
        with pytest.raises(SelfLoopError):
            Edge(3, 3)
        with pytest.raises(SelfLoopError):
            assemble_mesh(Geometry.EUCLIDEAN, SQUARE, [(0, 1), (2, 2)])

    def test_outside_klein_disk(self):
        with pytest.raises(GeometryDomainError):
            planar_mesh([(0.0, 0.0), (1.0, 0.0)], [(0, 1)], Geometry.HYPERBOLIC)

    def test_non_unit_sphere_vertex(self):
        with pytest.raises(GeometryDomainError):
            assemble_mesh(Geometry.SPHERICAL, [(1.0, 0.0, 0.0), (0.0, 1.1, 0.0)], [(0, 1)])

    def test_duplicate_provenance(self):
        with pytest.raises(MeshError):
            assemble_mesh(Geometry.EUCLIDEAN, SQUARE, [(0, 1)], layers=[1, 1, 2, 3],
                          indices=[0, 0, 0, 0])

    def test_combinatorial_needs_faces(self):
        with pytest.raises(MeshError):
            assemble_mesh(Geometry.COMBINATORIAL, None, [(0, 1), (1, 2), (2, 0)], layers=[0, 1, 2])
        m = assemble_mesh(Geometry.COMBINATORIAL, None, [(0, 1), (1, 2), (2, 0)], layers=[0, 1, 2],
                          faces=[(1, 2, 0)])
        assert m.faces.tolist() == [[0, 1, 2]]

    def test_supplied_faces_checked(self):
        edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]
        assemble_mesh(Geometry.EUCLIDEAN, SQUARE, edges, faces=[(2, 3, 0), (0, 1, 2)])
        with pytest.raises(FaceMismatchError):
            assemble_mesh(Geometry.EUCLIDEAN, SQUARE, edges, faces=[(0, 1, 2)])


class TestRegularity:
    def test_hex_patch(self, hex3):
        report = check_regular(hex3, 6)
        assert report.passed
        assert report.summary['interior'] == 19
        assert report.summary['boundary'] == 18
        assert len(report.exempt) == 18
        # six corners of degree 3, twelve edge vertices of degree 4
        assert report.summary['boundary_degrees'] == {3: 6, 4: 12}

    def test_wrong_degree(self, hex3):
        report = check_regular(hex3, 7)
        assert len(report.violations) == 19
        assert report.violations[0].values == {'degree': 6}


class TestIdentities:
    def test_disk(self, hex3, square):
        assert disk_identity(hex3).passed
        report = disk_identity(square)
        assert report.passed
        assert report.summary == {'lhs': 0, 'rhs': 0}

    def test_not_a_disk(self, torus, octahedron):
        with pytest.raises(NotADiskError):
            disk_identity(torus)
        with pytest.raises(NotADiskError):
            disk_identity(octahedron)

    def test_disconnected_is_not_a_disk(self):
        pts = SQUARE + [(5.0, 5.0), (6.0, 5.0), (5.0, 6.0), (9.0, 9.0)]
        m = planar_mesh(pts, [(0, 1), (1, 2), (2, 0), (4, 5), (5, 6), (6, 4)])
        with pytest.raises(NotADiskError):
            disk_identity(m)

    def test_closed(self, torus, octahedron, hex3):
        assert closed_surface_identity(torus).summary == {'lhs': 0, 'rhs': 0}
        assert closed_surface_identity(octahedron).summary == {'lhs': 12, 'rhs': 12}
        with pytest.raises(NotClosedError):
            closed_surface_identity(hex3)


class TestNoncrossing:
    def test_valid_meshes(self, hex3, square, hyp20):
        for m in (hex3, square, hyp20):
            report = noncrossing_check(m)
            assert report.passed, report.violations[:3]
            assert report.summary['pairs_tested'] > 0

    def test_crossing_diagonals(self):
        m = planar_mesh(SQUARE, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)])
        report = noncrossing_check(m)
        assert len(report.violations) == 1
        v = report.violations[0]
        assert v.elements == (4, 5)
        assert v.values['relation'] == 'proper-crossing'

    def test_t_junction(self):
        m = planar_mesh([(0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (1.0, 1.0)], [(0, 1), (2, 3)])
        report = noncrossing_check(m)
        assert [v.values['relation'] for v in report.violations] == ['proper-crossing']

    def test_collinear_overlap(self):
        m = planar_mesh([(0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (3.0, 0.0)], [(0, 1), (2, 3)])
        assert [v.values['relation'] for v in noncrossing_check(m).violations] == ['overlap']

    def test_overlap_through_shared_vertex(self):
        m = planar_mesh([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], [(0, 1), (0, 2)])
        assert [v.values['relation'] for v in noncrossing_check(m).violations] == ['overlap']

    def test_adjacent_edges_are_fine(self):
        m = planar_mesh([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], [(0, 1), (1, 2)])
        assert noncrossing_check(m).passed

    def test_skipped_off_the_plane(self, octahedron):
        report = noncrossing_check(octahedron)
        assert report.passed
        assert 'skipped' in report.summary


class TestFeasibility:
    @pytest.mark.parametrize("k, V, E, F", [(3, 4, 6, 4), (4, 6, 12, 8), (5, 12, 30, 20)])
    def test_sphere(self, k, V, E, F):
        f = feasibility(k, 0)
        assert f.feasible and (f.V, f.E, f.F) == (V, E, F)

    def test_torus_degree_six(self):
        assert feasibility(6, 1).feasible
        assert feasibility(6, 1).V is None
        assert not feasibility(6, 0).feasible
        assert not feasibility(6, 2).feasible

    def test_higher_genus(self):
        f = feasibility(7, 2)
        assert (f.V, f.E, f.F) == (12, 42, 28)
        assert not feasibility(7, 0).feasible
        assert not feasibility(3, 1).feasible

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            feasibility(2, 0)
        with pytest.raises(ValueError):
            feasibility(7, -1)

    @given(st.integers(min_value=3, max_value=40), st.integers(min_value=0, max_value=40))
    def test_counts_consistent(self, k, g):
        f = feasibility(k, g)
        if f.feasible and k != 6:
            assert k * f.V == 2 * f.E == 3 * f.F
            assert f.V - f.E + f.F == 2 - 2 * g
            assert f.F + (4 - k) * f.V == 8 * (1 - g)
            assert f.to_dict()['V'] == f.V

    def test_sphere_counts_match_generator(self, octahedron):
        f = feasibility(4, 0)
        assert (octahedron.num_vertices, octahedron.num_edges, octahedron.num_faces) == (f.V, f.E, f.F)
        assert math.isclose(float(np.sum(6 - octahedron.degrees)), 6 * 2)
