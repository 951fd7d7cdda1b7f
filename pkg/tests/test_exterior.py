"""Exterior algebra signs, Clifford relations, verification, conjugation."""

import random
from fractions import Fraction

import pytest

from lgmf.exterior import (
    ExtElement,
    ExteriorEndo,
    MatrixFactorization,
    MFError,
    conjugate_diagonal,
    mf_verify,
)
from lgmf.laurent import LaurentRing

R2 = LaurentRing(2)


def basis(ring, mask):
    return ExtElement.basis(ring, mask)


class TestWedgeContractSigns:
    def test_wedge_no_transposition(self):
        w1 = ExteriorEndo.wedge(R2, 1)
        assert w1.apply(basis(R2, 0b10)) == basis(R2, 0b11)

    def test_wedge_one_transposition(self):
        w2 = ExteriorEndo.wedge(R2, 2)
        assert w2.apply(basis(R2, 0b01)) == -basis(R2, 0b11)

    def test_contract_second_slot(self):
        i2 = ExteriorEndo.contract(R2, 2)
        assert i2.apply(basis(R2, 0b11)) == -basis(R2, 0b01)

    def test_contract_first_slot(self):
        i1 = ExteriorEndo.contract(R2, 1)
        assert i1.apply(basis(R2, 0b11)) == basis(R2, 0b10)


class TestCompositionIdentities:
    def test_wedge_squares_to_zero(self):
        for n in (1, 2, 3, 4, 5):
            ring = LaurentRing(n)
            for j in range(1, n + 1):
                w = ExteriorEndo.wedge(ring, j)
                assert not (w @ w).entries
                i = ExteriorEndo.contract(ring, j)
                assert not (i @ i).entries

    def test_clifford_relations(self):
        for n in (1, 2, 3, 4, 5):
            ring = LaurentRing(n)
            eye = ExteriorEndo.identity(ring)
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    w = ExteriorEndo.wedge(ring, j)
                    i = ExteriorEndo.contract(ring, k)
                    anti = (w @ i) + (i @ w)
                    assert anti == (eye if j == k else ExteriorEndo.zero(ring))

    def test_contraction_is_antiderivation(self):
        rng = random.Random(11)
        ring = LaurentRing(4)
        masks = list(range(16))
        for _ in range(60):
            ma, mb = rng.choice(masks), rng.choice(masks)
            a, b = basis(ring, ma), basis(ring, mb)
            j = rng.randint(1, 4)
            iota = ExteriorEndo.contract(ring, j)
            lhs = iota.apply(a.wedge(b))
            sign = -1 if bin(ma).count("1") % 2 else 1
            rhs = iota.apply(a).wedge(b) + (
                a.wedge(iota.apply(b)).scale(ring.constant(sign))
            )
            assert lhs == rhs


class TestMFVerify:
    def test_rank_one_wedge_contraction(self):
        ring = LaurentRing(1)
        x = ring.z(1) - ring.u(1)
        c = ring.T(Fraction(1, 2))
        d = ExteriorEndo.wedge(ring, 1, x) + ExteriorEndo.contract(ring, 1, c)
        W = c * ring.z(1)
        report = mf_verify(d, W)
        assert report.ok
        assert report.lam == c * ring.u(1)

    def test_zero_endo_zero_potential(self):
        report = mf_verify(ExteriorEndo.zero(R2), R2.zero())
        assert report.ok
        assert report.lam == R2.zero()

    def test_even_map_rejected(self):
        report = mf_verify(ExteriorEndo.identity(R2), R2.zero())
        assert not report.ok
        assert "odd" in report.reason

    def test_off_scalar_square_reported(self):
        # wedge alone squares to zero, so potential = z1 leaves a non-z-free lambda
        d = ExteriorEndo.wedge(R2, 1, R2.z(1) - R2.u(1))
        report = mf_verify(d, R2.z(1))
        assert not report.ok
        assert report.reason == "potential minus square is not z-free"

    def test_off_diagonal_square_reported(self):
        # d(1) = z1 e1, d(e1) = e12: the square sends 1 to z1 e12
        d = ExteriorEndo(R2, {(0b01, 0b00): R2.z(1), (0b11, 0b01): R2.one()})
        report = mf_verify(d, R2.zero())
        assert not report.ok
        assert report.bad_entry == (0b11, 0b00)
        assert report.difference == R2.z(1)

    def test_build_raises_on_failure(self):
        with pytest.raises(MFError):
            MatrixFactorization.build(ExteriorEndo.wedge(R2, 1, R2.z(1) - R2.u(1)), R2.z(1))


class TestConjugation:
    def make_mf(self):
        ring = LaurentRing(2)
        x1, x2 = ring.z(1) - ring.u(1), ring.z(2) - ring.u(2)
        w1 = ring.T(1)
        w2 = ring.T(2) * ring.z(1, -1)
        d = (
            ExteriorEndo.wedge(ring, 1, x1)
            + ExteriorEndo.wedge(ring, 2, x2)
            + ExteriorEndo.contract(ring, 1, w1)
            + ExteriorEndo.contract(ring, 2, w2)
        )
        W = x1 * w1 + x2 * w2
        return ring, d, W

    def test_unit_one_is_identity(self):
        ring, d, W = self.make_mf()
        assert conjugate_diagonal(d, [ring.one()] * 4) == d

    def test_lambda_invariant(self):
        rng = random.Random(12)
        ring, d, W = self.make_mf()
        base = mf_verify(d, W)
        assert base.ok
        for _ in range(20):
            units = {}
            for m in range(4):
                ze = [rng.randint(-2, 2) for _ in range(2)]
                ue = [rng.randint(-2, 2) for _ in range(2)]
                units[m] = ring.monomial(
                    ring.field.coerce(rng.choice([1, -1, 2, Fraction(1, 3)])), ze, ue
                ) * ring.T(Fraction(rng.randint(-3, 3), 2))
            conj = conjugate_diagonal(d, units)
            report = mf_verify(conj, W)
            assert report.ok
            assert report.lam == base.lam

    def test_rescaling_entries(self):
        # single-variable pair: unit z on the odd generator rescales entries by z^{+-1}
        ring = LaurentRing(1)
        x = ring.z(1) - ring.u(1)
        c = ring.T(1)
        d = ExteriorEndo.wedge(ring, 1, x) + ExteriorEndo.contract(ring, 1, c)
        conj = conjugate_diagonal(d, {1: ring.z(1)})
        assert conj.entry(1, 0) == x * ring.z(1, -1)
        assert conj.entry(0, 1) == c * ring.z(1)
        assert mf_verify(conj, c * ring.z(1)).lam == c * ring.u(1)

    def test_non_unit_rejected(self):
        ring, d, W = self.make_mf()
        with pytest.raises(ValueError):
            conjugate_diagonal(d, {0: ring.z(1) + ring.one()})


class TestJson:
    def test_round_trip(self):
        ring, d, _ = TestConjugation().make_mf()
        doc = d.to_json_dict()
        again = ExteriorEndo.from_json_dict(ring, doc)
        assert again == d
        assert doc["entries"] == sorted(doc["entries"], key=lambda e: (e["row"], e["col"]))


class TestThreadedCompose:
    def test_same_result_with_threads(self, monkeypatch):
        ring = LaurentRing(4)
        rng = random.Random(13)
        entries = {}
        for _ in range(40):
            r, c = rng.randrange(16), rng.randrange(16)
            entries[(r, c)] = ring.monomial(
                rng.randint(-3, 3), [rng.randint(-1, 1)] * 4, [0] * 4
            )
        a = ExteriorEndo(ring, entries)
        seq = a @ a
        monkeypatch.setenv("LGMF_THREADS", "4")
        par = a @ a
        assert seq == par
