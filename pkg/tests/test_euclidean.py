import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geotri.analysis import edge_layers, edge_lengths
from geotri.errors import (
    AssignmentInfeasibleError,
    LayerOverflowError,
    MeshTooLargeError,
    UnsupportedDegreeError,
)
from geotri.generators.euclidean import (
    EPoint,
    EuclideanParams,
    Schedule,
    generate_euclidean,
    growth_root,
    interlayer_assignment,
    layer_count,
    layer_count_closed_form,
)
from geotri.mesh import ETYPE_CODE, EdgeType, check_regular, disk_identity, noncrossing_check
from geotri.validation import euler_check

K7_COUNTS = [0, 7, 21, 56, 147, 385, 1008, 2639, 6909, 18088, 47355]


@pytest.fixture(scope="module")
def deep7():
    return generate_euclidean(EuclideanParams(7, 8))


def per_layer(m, etype, reduce):
    lengths, layers = edge_lengths(m), edge_layers(m)
    mask = m.etypes == ETYPE_CODE[etype]
    return {int(n): float(reduce(lengths[mask & (layers == n)])) for n in np.unique(layers[mask])}


class TestLayerCounts:
    def test_k7_sequence(self):
        assert [layer_count(7, n) for n in range(11)] == K7_COUNTS

    def test_k6_is_linear(self):
        assert [layer_count(6, n) for n in range(6)] == [0, 6, 12, 18, 24, 30]

    @pytest.mark.parametrize("k", range(7, 13))
    def test_closed_form(self, k):
        for n in range(41):
            assert layer_count_closed_form(k, n) == pytest.approx(layer_count(k, n), rel=1e-9, abs=1e-9)

    @pytest.mark.parametrize("k", range(7, 13))
    def test_ratio_converges_to_growth_root(self, k):
        assert layer_count(k, 30) / layer_count(k, 29) == pytest.approx(growth_root(k), abs=1e-6)

    def test_growth_root(self):
        assert growth_root(7) == pytest.approx((3 + math.sqrt(5)) / 2)
        root = growth_root(9)
        assert root * root - 5 * root + 1 == pytest.approx(0.0, abs=1e-12)

    def test_exact_integers(self):
        value = layer_count(7, 300)
        assert isinstance(value, int)
        assert value == 3 * layer_count(7, 299) - layer_count(7, 298)

    def test_overflow(self):
        with pytest.raises(LayerOverflowError) as info:
            layer_count(7, 2000)
        assert isinstance(info.value, OverflowError)
        assert info.value.k == 7

    def test_rejections(self):
        with pytest.raises(UnsupportedDegreeError):
            layer_count(5, 3)
        with pytest.raises(UnsupportedDegreeError):
            layer_count_closed_form(6, 3)
        with pytest.raises(ValueError):
            layer_count(7, -1)


class TestAssignment:
    def test_first_layer(self):
        pairs = interlayer_assignment(7, 21, 7)
        assert len(pairs) == 28
        targets = np.array([b for _, b in pairs])
        assert set(targets.tolist()) == set(range(21))
        inward = np.bincount(targets, minlength=21)
        assert sorted(set(inward.tolist())) == [1, 2]
        assert int((inward == 2).sum()) == 7

    def test_runs_are_contiguous(self):
        pairs = interlayer_assignment(7, 21, 7)
        by_inner = {}
        for v, t in pairs:
            by_inner.setdefault(v, []).append(t)
        for v, run in by_inner.items():
            steps = {(b - a) % 21 for a, b in zip(run, run[1:])}
            assert steps == {1}
            nxt = by_inner[(v + 1) % 7]
            assert run[-1] == nxt[0]

    def test_centre_star(self):
        assert interlayer_assignment(1, 8, 8) == [(0, j) for j in range(8)]

    @given(st.integers(min_value=7, max_value=11), st.integers(min_value=1, max_value=4))
    def test_budgets_for_any_layer(self, k, n):
        inward = None
        a_prev, a_next = layer_count(k, n), layer_count(k, n + 1)
        pairs = interlayer_assignment(a_prev, a_next, k, inward)
        outer = np.bincount([b for _, b in pairs], minlength=a_next)
        assert outer.min() >= 1 and outer.max() <= 2
        inner = np.bincount([a for a, _ in pairs], minlength=a_prev)
        assert inner.sum() == a_prev + a_next

    def test_infeasible(self):
        with pytest.raises(AssignmentInfeasibleError):
            interlayer_assignment(7, 5, 7)
        with pytest.raises(AssignmentInfeasibleError):
            interlayer_assignment(7, 21, 7, inward=[1, 1, 1])
        with pytest.raises(AssignmentInfeasibleError):
            interlayer_assignment(7, 21, 7, inward=[3] * 7)
        with pytest.raises(AssignmentInfeasibleError):
            interlayer_assignment(7, 30, 7)


class TestGenerate:
    def test_counts(self, euclid7):
        assert euclid7.num_vertices == 1 + sum(K7_COUNTS[1:5])
        assert euclid7.num_edges == 546
        assert euclid7.num_faces == 315
        assert euclid7.params == {'k': 7, 'layers': 4, 'schedule': 'unit'}

    def test_regular_planar_disk(self, euclid7):
        assert check_regular(euclid7, 7).passed
        assert noncrossing_check(euclid7).passed
        assert disk_identity(euclid7).passed
        assert euler_check(euclid7).passed

    def test_edge_types(self, euclid7):
        types = euclid7.etypes
        assert int((types == 1).sum()) == sum(K7_COUNTS[1:5])
        assert {euclid7.edge_type(i) for i in range(euclid7.num_edges)} == {EdgeType.TYPE1, EdgeType.TYPE2}
        inter = [i for i in range(euclid7.num_edges)
                 if set(euclid7.layers[euclid7.edges[i]].tolist()) == {1, 2}]
        assert len(inter) == 28

    def test_layers_on_circles(self, euclid7):
        radius = np.hypot(*euclid7.positions.T)
        np.testing.assert_allclose(radius, euclid7.layers, atol=1e-12)

    @pytest.mark.parametrize("k, layers", [(8, 3), (9, 3), (12, 2)])
    def test_other_degrees(self, k, layers):
        m = generate_euclidean(EuclideanParams(k, layers))
        assert check_regular(m, k).passed
        assert noncrossing_check(m).passed
        assert euler_check(m).passed

    def test_geometric_schedule(self):
        m = generate_euclidean(EuclideanParams(8, 3, Schedule.GEOMETRIC, 2.0))
        assert m.params['base'] == 2.0
        assert noncrossing_check(m).passed
        assert check_regular(m, 8).passed
        assert float(np.hypot(*m.positions.T).max()) == pytest.approx(8.0)

    def test_degree_six_is_the_lattice(self):
        m = generate_euclidean(EuclideanParams(6, 3))
        assert m.num_vertices == 37
        assert m.params['lattice'] == 'hexagonal'
        np.testing.assert_allclose(edge_lengths(m), 1.0, rtol=1e-12)

    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_small_degree_rejected(self, k):
        with pytest.raises(UnsupportedDegreeError):
            EuclideanParams(k, 3)

    def test_bad_params(self):
        with pytest.raises(ValueError):
            EuclideanParams(7, 0)
        with pytest.raises(ValueError):
            EuclideanParams(7, 3, Schedule.GEOMETRIC, 1.0)
        with pytest.raises(ValueError):
            EPoint(math.inf, 0.0)

    def test_too_large(self):
        with pytest.raises(MeshTooLargeError):
            generate_euclidean(EuclideanParams(12, 10))

    @given(st.integers(min_value=7, max_value=10), st.integers(min_value=1, max_value=4))
    @settings(max_examples=16, deadline=None)
    def test_disk_identity_at_every_depth(self, k, layers):
        report = disk_identity(generate_euclidean(EuclideanParams(k, layers)))
        assert report.passed, report.to_dict()


class TestEdgeLengths:
    def test_interlayer_edges_tend_to_one(self, deep7):
        longest = per_layer(deep7, EdgeType.TYPE2, np.max)
        shortest = per_layer(deep7, EdgeType.TYPE2, np.min)
        assert min(shortest.values()) >= 1.0 - 1e-12
        assert longest[7] < longest[4]
        assert longest[7] == pytest.approx(1.0, abs=1e-3)

    def test_circumferential_edges_shrink(self, deep7):
        longest = per_layer(deep7, EdgeType.TYPE1, np.max)
        for n in range(1, 9):
            assert longest[n] <= 2 * math.pi * n / layer_count(7, n)
        values = [longest[n] for n in range(1, 9)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_geometric_base_two_still_shrinks(self):
        m = generate_euclidean(EuclideanParams(7, 6, Schedule.GEOMETRIC, 2.0))
        shortest = per_layer(m, EdgeType.TYPE1, np.min)
        values = [shortest[n] for n in range(1, 7)]
        assert values[0] == pytest.approx(4 * math.sin(math.pi / 7))
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_geometric_growth_root_bounds_every_edge(self):
        root = growth_root(7)
        m = generate_euclidean(EuclideanParams(7, 7, Schedule.GEOMETRIC, root))
        shortest = per_layer(m, EdgeType.TYPE1, np.min)
        # circumferential edges level off at 2*pi*sqrt(5)/7
        assert shortest[7] == pytest.approx(2 * math.pi * math.sqrt(5) / 7, rel=1e-5)
        assert float(edge_lengths(m).min()) > 2.0
