import pytest

from geotri.mesh import ValidationReport
from geotri.validation import CHECK_NAMES, available_checks, euler_check, run_checks


class TestRunChecks:
    def test_planar_defaults(self, hex3):
        assert available_checks(hex3) == ('degree', 'crossing', 'euler', 'disk')
        reports = run_checks(hex3)
        assert [r.check for r in reports] == list(available_checks(hex3))
        assert all(isinstance(r, ValidationReport) and r.passed for r in reports)

    def test_closed_defaults(self, octahedron, torus):
        for m in (octahedron, torus):
            reports = run_checks(m)
            assert [r.check for r in reports] == ['degree', 'euler', 'closed']
            assert all(r.passed for r in reports)

    def test_request_order_kept(self, hex3):
        order = ['euler', 'degree', 'crossing']
        assert [r.check for r in run_checks(hex3, order, workers=1)] == order

    def test_precondition_failure_becomes_report(self, torus):
        (report,) = run_checks(torus, ['disk'])
        assert not report.passed
        assert report.violations[0].values['error'].startswith('ERROR: ')

    def test_degree_without_k(self, square):
        (report,) = run_checks(square, ['degree'])
        assert 'needs k' in report.violations[0].values['error']
        (report,) = run_checks(square, ['degree'], k=2)
        assert [v.elements for v in report.violations] == []

    def test_explicit_k_overrides_params(self, hex3):
        (report,) = run_checks(hex3, ['degree'], k=7)
        assert len(report.violations) == 19

    def test_unknown_check(self, hex3):
        with pytest.raises(ValueError, match='unknown checks'):
            run_checks(hex3, ['degree', 'planarity'])

    def test_names(self):
        assert set(CHECK_NAMES) == {'degree', 'crossing', 'euler', 'disk', 'closed'}


class TestEulerCheck:
    def test_patch(self, square):
        report = euler_check(square)
        assert report.passed
        assert report.summary == {'V': 4, 'E': 5, 'F': 2, 'chi': 1, 'expected': 1, 'faces_predicted': 2}

    def test_sphere(self, octahedron):
        assert euler_check(octahedron).summary['expected'] == 2

    def test_report_dict(self, torus):
        out = euler_check(torus, genus=2).to_dict()
        assert out['check'] == 'euler'
        assert out['passed'] is False
        assert out['violations'] == [{'elements': [], 'chi': 0, 'expected': -2}]
