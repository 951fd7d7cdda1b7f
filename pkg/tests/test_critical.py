"""Critical-point solver and numeric generator factorizations."""

import math
from fractions import Fraction

import pytest

from lgmf.critical import (
    SolverConfig,
    distinct_values_report,
    find_critical_points,
    generator_at_point,
    log_derivative_system,
    wedge_contraction_report,
)
from lgmf.toric import build_potential, make_fan, preset_fan, projective_space

T_E = math.exp(-1)


class TestLogDerivatives:
    def test_p1(self):
        pot = build_potential(preset_fan("p1"))
        ring = pot.W.ring
        half = Fraction(1, 2)
        (f,) = log_derivative_system(pot)
        assert f == ring.T(half) * (ring.z(1) - ring.z(1, -1))

    def test_constant_potential(self):
        # single-ray fan in one variable: z dW/dz = W itself
        fan = make_fan(1, [(1,)], [0], [1])
        pot = build_potential(fan)
        (f,) = log_derivative_system(pot)
        assert f == pot.W

    def test_p2(self):
        pot = build_potential(preset_fan("p2"))
        ring = pot.W.ring
        k = Fraction(1, 3)
        f1, f2 = log_derivative_system(pot)
        inv = ring.monomial(1, (-1, -1))
        assert f1 == ring.T(k) * (ring.z(1) - inv)
        assert f2 == ring.T(k) * (ring.z(2) - inv)


class TestSolver:
    def test_cpn_roots_of_unity(self):
        for n in range(1, 7):
            pot = build_potential(projective_space(n))
            pts = find_critical_points(pot, T_E)
            assert len(pts) == n + 1
            for p in pts:
                assert p.residual < 1e-12
                first = p.point[0]
                assert max(abs(c - first) for c in p.point) < 1e-10
                assert abs(first ** (n + 1) - 1) < 1e-10

    def test_p1p1_four_points(self):
        pot = build_potential(preset_fan("p1p1"))
        pts = find_critical_points(pot, T_E)
        assert len(pts) == 4
        signs = sorted(
            (round(p.point[0].real), round(p.point[1].real)) for p in pts
        )
        assert signs == [(-1, -1), (-1, 1), (1, -1), (1, 1)]

    def test_single_monomial_has_no_critical_points(self):
        fan = make_fan(1, [(1,)], [0], [1])
        pot = build_potential(fan)
        assert find_critical_points(pot, T_E) == []

    def test_distinct_values_report(self):
        pot = build_potential(preset_fan("p1p1"))
        pts = find_critical_points(pot, T_E)
        report = distinct_values_report(pts)
        # (1,-1) and (-1,1) share the critical value 0
        assert not report["distinct"]

    def test_invalid_t(self):
        pot = build_potential(preset_fan("p1"))
        with pytest.raises(ValueError):
            find_critical_points(pot, -1.0)

    def test_configurable_starts(self):
        pot = build_potential(preset_fan("p2"))
        pts = find_critical_points(pot, T_E, SolverConfig(phases=5))
        assert len(pts) == 3


class TestGenerators:
    def test_p2_at_unit_point(self):
        fan = preset_fan("p2")
        pot = build_potential(fan)
        pts = find_critical_points(pot, T_E)
        unit = next(p for p in pts if abs(p.point[0] - 1) < 1e-9)
        gen = generator_at_point(fan, unit, T_E)
        assert gen.max_square_error < 1e-10
        # contraction coefficient in direction 1 specializes to T^k (1 - 1/(z1 z2))
        ring = gen.endo.ring
        entry = gen.endo.entry(0b00, 0b01)
        tk = T_E ** (1 / 3)
        probe = entry.eval_numeric([2.0, 3.0], None, T_E)
        assert probe == pytest.approx(tk * (1 - 1 / 6), rel=1e-12)

    def test_p1_at_unit_point(self):
        fan = preset_fan("p1")
        pot = build_potential(fan)
        pts = find_critical_points(pot, T_E)
        unit = next(p for p in pts if abs(p.point[0] - 1) < 1e-9)
        gen = generator_at_point(fan, unit, T_E)
        up = gen.endo.entry(0b1, 0b0)
        down = gen.endo.entry(0b0, 0b1)
        z0 = 1.7 - 0.3j
        w0 = pot.W.eval_numeric([z0], None, T_E)
        lam = 2 * T_E ** 0.5
        assert up.eval_numeric([z0], None, T_E) * down.eval_numeric([z0], None, T_E) \
            == pytest.approx(w0 - lam, rel=1e-10)

    def test_p1p1_mixed_point_lambda_zero(self):
        fan = preset_fan("p1p1")
        pot = build_potential(fan)
        pts = find_critical_points(pot, T_E)
        mixed = next(p for p in pts
                     if abs(p.point[0] - 1) < 1e-9 and abs(p.point[1] + 1) < 1e-9)
        assert abs(mixed.value) < 1e-12
        gen = generator_at_point(fan, mixed, T_E)
        assert abs(gen.value) < 1e-12

    def test_rejects_sloppy_point(self):
        from lgmf.critical import CriticalPoint
        fan = preset_fan("p1")
        bad = CriticalPoint((1.001 + 0j,), 1e-3, 0j)
        with pytest.raises(ValueError):
            generator_at_point(fan, bad)


class TestShapeReport:
    def test_p2(self):
        fan = preset_fan("p2")
        pot = build_potential(fan)
        pts = find_critical_points(pot, T_E)
        report = wedge_contraction_report(fan, pts[0], T_E)
        assert report.is_wedge_contraction
        assert report.identity_exact
        assert report.point_residual < 1e-12

    def test_p3_no_point(self):
        report = wedge_contraction_report(preset_fan("p3"))
        assert report.is_wedge_contraction
        assert report.identity_exact
        assert report.point_residual is None

    def test_basis_direction_totals_contain_weights(self):
        # w_i picks up the weight c_i of the i-th basis ray on the constant
        fan = preset_fan("p2")
        report = wedge_contraction_report(fan)
        k = "1 * T^1/3"
        assert report.ws_text[0].startswith(k) or k in report.ws_text[0]

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            wedge_contraction_report(projective_space(5))
