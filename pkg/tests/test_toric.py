"""Fan ingestion, potentials, Hori-Vafa identification, genericity checks."""

import json
import random
from fractions import Fraction

import pytest

from lgmf.toric import (
    FanError,
    build_potential,
    hirzebruch_f1,
    hori_vafa_inverse,
    hori_vafa_substitute,
    make_fan,
    parse_fan,
    preset_fan,
    projective_space,
    validate_offsets,
)


def p2_unit_areas():
    """Plane fan with basepoint (1,1) and weights T, T, T^2.

    The support constant of the third ray must be -4 for (1,1) to be
    interior; offsets are then (1, 1, 2).
    """
    return make_fan(2, [(1, 0), (0, 1), (-1, -1)], [0, 0, -4], [1, 1])


class TestParseValidate:
    def test_p2_with_unit_basepoint(self):
        fan = p2_unit_areas()
        assert fan.offset(1) == 1
        assert fan.offset(2) == 1
        assert fan.offset(3) == 2

    def test_p2_equal_area_basepoint(self):
        fan = preset_fan("p2")
        k = fan.offset(1)
        assert k > 0
        assert all(fan.offset(i) == k for i in (1, 2, 3))

    def test_non_unimodular_basis_rejected(self):
        with pytest.raises(FanError, match="integral basis"):
            make_fan(2, [(2, 0), (0, 1)], [0, 0], ["1/2", "1/2"])

    def test_duplicate_rays_rejected(self):
        with pytest.raises(FanError, match="duplicate"):
            make_fan(2, [(1, 0), (0, 1), (1, 0)], [0, 0, 0], ["1/2", "1/2"])

    def test_non_interior_basepoint_rejected(self):
        with pytest.raises(FanError, match="interior"):
            make_fan(2, [(1, 0), (0, 1), (-1, -1)], [0, 0, 0], [0, 1])

    def test_reordering_to_basis(self):
        # p1p1 rays listed as (1,0),(-1,0),(0,1),(0,-1): rays 1 and 3 form the basis
        fan = make_fan(2, [(1, 0), (-1, 0), (0, 1), (0, -1)],
                       [0, -1, 0, -1], ["1/2", "1/2"])
        assert fan.rays[:2] == ((1, 0), (0, 1))
        assert set(fan.rays) == {(1, 0), (0, 1), (-1, 0), (0, -1)}

    def test_lattice_change_of_basis(self):
        # first two rays (1,1),(1,2) are unimodular but not standard
        fan = make_fan(2, [(1, 1), (1, 2), (-2, -3)], [0, 0, -2], ["1/2", "1/4"])
        assert fan.rays[0] == (1, 0)
        assert fan.rays[1] == (0, 1)
        # third ray is the same lattice point in the new coordinates
        assert fan.rays[2] == (-1, -1)
        # offsets are basis-invariant
        assert fan.offset(1) == Fraction(3, 4)
        assert fan.offset(2) == 1
        assert fan.offset(3) == Fraction(1, 4)

    def test_offsets_invariant_under_normalization(self):
        raw_rays = [(1, 1), (1, 2), (-2, -3)]
        raw_base = [Fraction(1, 2), Fraction(1, 4)]
        raw_supp = [Fraction(0), Fraction(0), Fraction(-2)]
        fan = make_fan(2, raw_rays, raw_supp, raw_base)
        for i, (v, l) in enumerate(zip(raw_rays, raw_supp), start=1):
            raw_offset = sum(u * e for u, e in zip(raw_base, v)) - l
            assert fan.offset(i) == raw_offset


class TestPotential:
    def test_p2(self):
        fan = preset_fan("p2")
        pot = build_potential(fan)
        ring = pot.W.ring
        k = fan.offset(1)
        expected = ring.T(k) * (ring.z(1) + ring.z(2) + ring.z(1, -1) * ring.z(2, -1))
        assert pot.W == expected

    def test_p1p1(self):
        fan = preset_fan("p1p1")
        pot = build_potential(fan)
        ring = pot.W.ring
        half = Fraction(1, 2)
        expected = ring.T(half) * (
            ring.z(1) + ring.z(1, -1) + ring.z(2) + ring.z(2, -1)
        )
        assert pot.W == expected

    def test_cpn(self):
        for n in (1, 3, 5):
            fan = projective_space(n)
            pot = build_potential(fan)
            ring = pot.W.ring
            k = Fraction(1, n + 1)
            expected = ring.zero()
            for i in range(1, n + 1):
                expected = expected + ring.z(i)
            expected = expected + ring.monomial(1, [-1] * n)
            assert pot.W == ring.T(k) * expected


class TestHoriVafa:
    def test_p2_t_variables(self):
        fan = p2_unit_areas()
        pot = build_potential(fan)
        ring = pot.W.ring
        got = hori_vafa_substitute(pot)
        # W(X) = sum_i T^{-lambda_i} t^{v_i} = t1 + t2 + T^4/(t1 t2)
        expected = ring.z(1) + ring.z(2) + ring.T(4) * ring.z(1, -1) * ring.z(2, -1)
        assert got == expected

    def test_zero_lambda_gives_unit_coefficients(self):
        fan = make_fan(2, [(1, 0), (0, 1)], [0, 0], [1, 1])
        got = hori_vafa_substitute(build_potential(fan))
        ring = got.ring
        assert got == ring.z(1) + ring.z(2)

    def test_nonzero_lambda(self):
        fan = make_fan(2, [(1, 0), (0, 1), (-1, -1)], [0, "-1/3", -1], ["1/4", "1/4"])
        got = hori_vafa_substitute(build_potential(fan))
        ring = got.ring
        expected = (
            ring.z(1)
            + ring.T(Fraction(1, 3)) * ring.z(2)
            + ring.T(1) * ring.z(1, -1) * ring.z(2, -1)
        )
        assert got == expected

    def test_round_trip_random_fans(self):
        rng = random.Random(7)
        for _ in range(50):
            fan = random_fan(rng)
            pot = build_potential(fan)
            assert hori_vafa_inverse(hori_vafa_substitute(pot), fan) == pot.W


class TestValidateOffsets:
    def test_p2_good_ordering(self):
        fan = preset_fan("p2")
        assert validate_offsets(fan, ["1/7", "1/11"]).ok

    def test_p2_bad_ordering(self):
        fan = preset_fan("p2")
        report = validate_offsets(fan, ["1/11", "1/7"])
        assert not report.ok
        assert report.violation == (3, 1, 2)

    def test_dimension_one_vacuous(self):
        fan = preset_fan("p1")
        assert validate_offsets(fan, ["1/7"]).ok

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            validate_offsets(preset_fan("p2"), [2, "1/2"])


class TestJsonRoundTrip:
    def test_bit_exact(self):
        rng = random.Random(8)
        for _ in range(20):
            fan = random_fan(rng)
            again = parse_fan(fan.to_json())
            assert again == fan

    def test_document_shape(self):
        doc = json.loads(preset_fan("p2").to_json())
        assert doc["n"] == 2
        assert doc["rays"][0] == {"v": [1, 0], "lambda": "0"}
        assert doc["basepoint"] == ["1/3", "1/3"]

    def test_malformed(self):
        with pytest.raises(FanError):
            parse_fan("{not json")
        with pytest.raises(FanError):
            parse_fan('{"n": 2, "rays": []}')


def random_fan(rng, n=None, max_extra=4, max_entry=3):
    """Random normalized fan: standard basis plus extra rays, interior basepoint."""
    n = n or rng.choice([2, 3])
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(rays)
    extras = rng.randint(1, max_extra)
    while extras > 0:
        v = tuple(rng.randint(-max_entry, max_entry) for _ in range(n))
        if any(v) and v not in seen:
            rays.append(v)
            seen.add(v)
            extras -= 1
    support = [-Fraction(rng.randint(2 * n * max_entry, 4 * n * max_entry), rng.randint(1, 3))
               for _ in rays]
    basepoint = [Fraction(rng.randint(-3, 3), 7) for _ in range(n)]
    return make_fan(n, rays, support, basepoint)


def test_preset_names():
    for name in ("p1", "p2", "p3", "p4", "p1p1", "p1_x4", "hirzebruch_f1"):
        fan = preset_fan(name)
        assert all(fan.offset(i) > 0 for i in range(1, fan.m + 1))
    with pytest.raises(FanError):
        preset_fan("p5")


def test_hirzebruch_rays():
    fan = hirzebruch_f1()
    assert fan.rays == ((1, 0), (0, 1), (-1, 1), (0, -1))
