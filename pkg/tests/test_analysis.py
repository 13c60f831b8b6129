import io
import json
import math

import numpy as np
import pytest

from geotri.analysis import (
    STATS_COLUMNS,
    SlopeFit,
    area_conservation,
    edge_length_stats,
    edge_lengths,
    face_areas,
    loglog_slope,
    min_angle_series,
    stats_rows,
    type1_bound_report,
    type_series,
    write_csv,
    write_json,
)
from geotri.errors import AnalysisError
from geotri.mesh import EdgeType


class TestLayerStats:
    def test_type_counts_per_layer(self, hyp20):
        stats = edge_length_stats(hyp20)
        assert [s.layer for s in stats] == list(range(21))
        assert stats[0].by_type[EdgeType.TYPE0].count == 6
        for s in stats[1:20]:
            n = s.layer
            assert s.by_type[EdgeType.TYPE1].count == 6 * n
            assert s.by_type[EdgeType.TYPE0].count == 6
            assert s.by_type[EdgeType.TYPE2].count == 12 * n
        assert set(stats[20].by_type) == {EdgeType.TYPE1}
        assert stats[20].min_angle is None

    def test_same_ring_edges_are_congruent(self, hyp20):
        for s in edge_length_stats(hyp20)[1:]:
            t1 = s.by_type[EdgeType.TYPE1]
            assert t1.min == pytest.approx(t1.max, rel=1e-12)

    def test_type_series(self, hyp20):
        series = type_series(edge_length_stats(hyp20), EdgeType.TYPE1, 'max')
        assert [n for n, _ in series] == list(range(1, 21))
        values = [v for _, v in series]
        # Type1 lengths shrink once rings get dense
        assert values[19] < values[5]

    def test_lattice_angles(self, hex3):
        series = min_angle_series(hex3)
        assert [n for n, _ in series] == [0, 1, 2]
        assert [a for _, a in series] == pytest.approx([math.pi / 3] * 3)

    def test_no_metric_on_combinatorial(self, torus):
        with pytest.raises(AnalysisError):
            edge_lengths(torus)


class TestSlope:
    def test_exact_power_law(self):
        series = [(n, 3.0 * n ** -1.5) for n in range(1, 101)]
        fit = loglog_slope(series, 10, 100)
        assert fit.exponent == pytest.approx(-1.5, abs=1e-12)
        assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-10)
        assert fit.r2 == pytest.approx(1.0)
        assert fit.range == (10, 100)

    @pytest.mark.parametrize("lo, hi", [(10, 10), (0, 5), (20, 10)])
    def test_bad_range(self, lo, hi):
        with pytest.raises(AnalysisError):
            loglog_slope([(n, 1.0) for n in range(1, 30)], lo, hi)

    def test_too_few_points(self):
        with pytest.raises(AnalysisError):
            loglog_slope([(1, 1.0), (50, 2.0)], 10, 40)

    def test_non_positive_values(self):
        with pytest.raises(AnalysisError):
            loglog_slope([(n, float(n - 3)) for n in range(1, 10)], 1, 9)


class TestAreas:
    def test_hyperbolic_conservation(self, hyp50):
        check = area_conservation(hyp50)
        assert check.difference == pytest.approx(0.0, abs=1e-8)

    def test_only_hyperbolic(self, hex3):
        with pytest.raises(AnalysisError):
            area_conservation(hex3)

    def test_euclidean_shoelace(self, square):
        assert face_areas(square).tolist() == pytest.approx([0.5, 0.5])


class TestType1Bounds:
    def test_arc_form_holds(self, hyp50):
        report = type1_bound_report(hyp50, 'arc')
        assert report.passed
        assert report.summary['edges'] == 3 * 50 * 51

    def test_sinh_form_breaks_early(self, hyp50):
        report = type1_bound_report(hyp50, 'sinh')
        assert not report.passed
        # fails from the first ring with sinh r_n above 1/sqrt(3)
        assert report.summary['first_failing_layer'] == 3
        failing = {v.values['layer'] for v in report.violations}
        assert failing == set(range(3, 51))

    def test_rejects_other_meshes(self, hex3, hyp20):
        with pytest.raises(AnalysisError):
            type1_bound_report(hex3)
        with pytest.raises(AnalysisError):
            type1_bound_report(hyp20, 'cosh')


class TestTables:
    def test_csv(self, hyp20):
        rows = stats_rows(edge_length_stats(hyp20))
        fit = SlopeFit(-0.5, 0.1, 0.99, (5, 20))
        out = io.StringIO()
        write_csv(rows, out, fit)
        lines = out.getvalue().splitlines()
        assert lines[0] == ','.join(STATS_COLUMNS)
        assert lines[1].startswith('0,Type0,6,')
        assert lines[-2].startswith('fit_exponent,')
        assert lines[-1] == '-0.5,0.1,0.99,5,20'
        assert len(lines) == 1 + len(rows) + 2

    def test_json(self, hex3):
        out = io.StringIO()
        write_json(stats_rows(edge_length_stats(hex3)), out)
        payload = json.loads(out.getvalue())
        assert 'fit' not in payload
        first = payload['rows'][0]
        assert first['layer'] == 0 and first['etype'] == 'Type0'
        assert first['min'] == pytest.approx(1.0)
