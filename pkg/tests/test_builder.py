"""Contraction coefficients, telescoping oracle, wedge-contraction builder."""

import itertools
import random
from fractions import Fraction

import pytest

from lgmf.builder import (
    build_wedge_contraction,
    contraction_coefficient,
    contraction_coefficient_by_crossings,
    contraction_coefficient_from_ray,
    contraction_table,
    contraction_totals,
    telescoping_check,
)
from lgmf.laurent import LaurentRing
from lgmf.toric import build_potential, preset_fan, projective_space

from test_toric import random_fan


def mono(ring, z, u):
    return ring.monomial(1, z, u)


class TestClosedFormKnownValues:
    def test_p2_third_ray(self):
        fan = preset_fan("p2")
        R = LaurentRing(2)
        # -1/(u1 z1 z2) and -1/(u1 u2 z2)
        assert contraction_coefficient(fan, 3, 1) == -mono(R, (-1, -1), (-1, 0))
        assert contraction_coefficient(fan, 3, 2) == -mono(R, (0, -1), (-1, -1))

    def test_basis_rays_give_delta(self):
        for name in ("p2", "p3", "p1p1", "hirzebruch_f1"):
            fan = preset_fan(name)
            R = fan.ring()
            for i in range(1, fan.n + 1):
                for j in range(1, fan.n + 1):
                    expected = R.one() if i == j else R.zero()
                    assert contraction_coefficient(fan, i, j) == expected

    def test_zero_component_gives_zero(self):
        fan = preset_fan("p1p1")
        # third ray is (-1, 0): no j=2 entry points
        assert fan.rays[2] == (-1, 0)
        assert contraction_coefficient(fan, 3, 2).is_zero()

    def test_cpn_corollary_coefficients(self):
        # for CP^n the anti-diagonal ray contributes -1/(u_1..u_j z_j..z_n)
        for n in (2, 3, 4):
            fan = projective_space(n)
            R = fan.ring()
            for j in range(1, n + 1):
                z = tuple(-1 if l >= j else 0 for l in range(1, n + 1))
                u = tuple(-1 if l <= j else 0 for l in range(1, n + 1))
                assert contraction_coefficient(fan, n + 1, j) == -mono(R, z, u)

    def test_floor_branch_ray(self):
        # v = (2,-1): two entry points in direction 1, one in direction 2
        R = LaurentRing(2)
        a1 = contraction_coefficient_from_ray(R, (2, -1), 1)
        a2 = contraction_coefficient_from_ray(R, (2, -1), 2)
        assert a1 == mono(R, (1, -1), (0, 0)) + mono(R, (0, -1), (1, 0))
        assert a2 == -mono(R, (0, -1), (2, -1))

    def test_tied_ratio_equal_signs(self):
        R = LaurentRing(2)
        a1 = contraction_coefficient_from_ray(R, (2, 2), 1)
        a2 = contraction_coefficient_from_ray(R, (2, 2), 2)
        assert a1 == mono(R, (1, 1), (0, 1)) + mono(R, (0, 1), (1, 1))
        assert a2 == mono(R, (2, 1), (0, 0)) + mono(R, (0, 0), (2, 1))

    def test_tied_ratio_mixed_signs(self):
        R = LaurentRing(2)
        a1 = contraction_coefficient_from_ray(R, (2, -2), 1)
        a2 = contraction_coefficient_from_ray(R, (2, -2), 2)
        assert a1 == mono(R, (1, -2), (0, 0)) + mono(R, (0, -1), (1, -1))
        assert a2 == -(mono(R, (0, -1), (2, -2)) + mono(R, (1, -2), (1, -1)))


class TestTelescoping:
    def test_paper_worked_expansion(self):
        # v = (-1,-1): -(z1-u1)/(u1 z1 z2) - (z2-u2)/(u1 u2 z2) = 1/(z1 z2) - 1/(u1 u2)
        report = telescoping_check((-1, -1))
        assert report.ok

    def test_standard_basis_vectors(self):
        for n in (1, 2, 3, 4):
            for i in range(n):
                v = [0] * n
                v[i] = 1
                assert telescoping_check(v).ok

    def test_floor_branch(self):
        assert telescoping_check((2, -1)).ok

    def test_tie_cases(self):
        for v in [(2, 2), (2, -2), (-2, 2), (-2, -2), (3, 3), (3, -3),
                  (2, 2, 2), (3, -3, 3), (2, -2, 2), (3, 3, -3), (2, 2, -2)]:
            assert telescoping_check(v).ok, v

    def test_exhaustive_n2(self):
        for v in itertools.product(range(-3, 4), repeat=2):
            if any(v):
                assert telescoping_check(v).ok, v

    def test_random_n4(self):
        rng = random.Random(14)
        for _ in range(100):
            v = tuple(rng.randint(-3, 3) for _ in range(4))
            if any(v):
                assert telescoping_check(v).ok, v

    def test_zero_ray_rejected(self):
        with pytest.raises(ValueError):
            telescoping_check((0, 0))


class TestCrossingEnumeration:
    def test_matches_closed_form_exhaustive_n2(self):
        R = LaurentRing(2)
        for v in itertools.product(range(-3, 4), repeat=2):
            if not any(v):
                continue
            for j in (1, 2):
                assert contraction_coefficient_by_crossings(R, v, j) == \
                    contraction_coefficient_from_ray(R, v, j), (v, j)

    def test_matches_closed_form_random_n4(self):
        rng = random.Random(15)
        R = LaurentRing(4)
        for _ in range(100):
            v = tuple(rng.randint(-3, 3) for _ in range(4))
            if not any(v):
                continue
            j = rng.randint(1, 4)
            assert contraction_coefficient_by_crossings(R, v, j) == \
                contraction_coefficient_from_ray(R, v, j), (v, j)

    def test_p2_single_entry_point(self):
        fan = preset_fan("p2")
        R = LaurentRing(2)
        got = contraction_coefficient_by_crossings(R, fan.rays[2], 1)
        assert got == -mono(R, (-1, -1), (-1, 0))


class TestBuilder:
    def test_presets_square_correctly(self):
        for name in ("p1", "p2", "p3", "p1p1", "hirzebruch_f1"):
            fan = preset_fan(name)
            mf = build_wedge_contraction(fan)
            pot = build_potential(fan)
            assert mf.lam == pot.W.swap_u_for_z()

    def test_cpn_corollary_shape(self):
        # contraction totals are T^k - T^k/(u_1..u_i z_i..z_n)
        fan = projective_space(3)
        pot = build_potential(fan)
        totals = contraction_totals(pot)
        R = pot.W.ring
        k = Fraction(1, 4)
        for j in (1, 2, 3):
            z = tuple(-1 if l >= j else 0 for l in range(1, 4))
            u = tuple(-1 if l <= j else 0 for l in range(1, 4))
            expected = R.T(k) - R.T(k) * mono(R, z, u)
            assert totals[j - 1] == expected

    def test_builder_is_odd(self):
        mf = build_wedge_contraction(preset_fan("p2"))
        assert mf.endo.parity() == 1

    def test_random_fans_square_correctly(self):
        rng = random.Random(16)
        for _ in range(25):
            fan = random_fan(rng)
            mf = build_wedge_contraction(fan)
            assert mf.lam == mf.potential.swap_u_for_z()

    def test_collapsing_u_to_z_squares_to_zero(self):
        for name in ("p2", "p1p1"):
            mf = build_wedge_contraction(preset_fan(name))
            collapsed = mf.endo.map_entries(lambda p: p.collapse_u_to_z())
            assert not collapsed.compose(collapsed).entries

    def test_table_validates_delta_block(self):
        fan = preset_fan("p3")
        table = contraction_table(fan)
        assert table.n == 3 and table.m == 4
