"""Closed-form wedge-contraction matrix factorizations of toric potentials.

For a ray ``v`` and a coordinate direction ``j`` with ``v_j != 0`` there are
``|v_j|`` holonomy monomials, one per entry point of a flow line into the
basic disc.  Their signed sum is the contraction coefficient ``alpha``;
row by row these satisfy the telescoping identity

    sum_j alpha_j (z_j - u_j) = z^v - u^v,

which is exactly why ``d = sum_j (z_j - u_j) e_j^ + sum_j w_j iota_j`` with
``w_j = sum_i c_i alpha^i_j`` squares to ``W(z) - W(u)``.

Two independent constructions of alpha are provided: the closed-form
product formula (:func:`contraction_coefficient`) and a per-entry-point
crossing count (:func:`contraction_coefficient_by_crossings`); the
telescoping check below is the brute-force oracle for both.

Ties in the entry-point ordering (ratios ``p |v_l / v_j|`` landing on an
integer) fall outside the generic-position hypothesis.  The tie-break used
here is the one the telescoping oracle validates exhaustively: for equal
signs ``s_l = s_j`` the coincident marking counts only when ``l < j``; for
opposite signs it always counts (plain floor).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exterior import ExteriorEndo, MatrixFactorization, MFError, mf_verify
from .fields import BaseField, QQ
from .laurent import LaurentPoly, LaurentRing
from .toric import Potential, ToricFan, build_potential


def _sign(e: int) -> int:
    return (e > 0) - (e < 0)


def _floor_count(p: int, v_l: int, v_j: int, l: int, j: int) -> int:
    """Markings of direction l strictly before the (p+1)-th entry of j."""
    q = Fraction(p * abs(v_l), abs(v_j))
    if q.denominator == 1:
        if _sign(v_l) == _sign(v_j):
            return q.numerator - 1 if l > j else q.numerator
        return q.numerator
    return q.numerator // q.denominator


def contraction_coefficient_from_ray(
    ring: LaurentRing, v: Sequence[int], j: int
) -> LaurentPoly:
    """Signed coefficient of ``iota_j`` attached to one ray ``v``."""
    n = ring.n
    if len(v) != n:
        raise ValueError("ray length differs from ring dimension")
    if not 1 <= j <= n:
        raise IndexError(f"direction {j} out of range 1..{n}")
    vj = v[j - 1]
    if vj == 0:
        return ring.zero()
    s = _sign(vj)
    jj = j - 1
    lead_z = [0] * n
    lead_u = [0] * n
    if s == 1:
        for l in range(n):
            sl = _sign(v[l])
            if l == jj:
                lead_z[l] = v[l] - 1
            else:
                lead_z[l] = v[l] - (1 if sl == 1 else 0)
                lead_u[l] = -(1 if sl == -1 else 0)
    else:
        lead_z[jj] = -1
        for l in range(n):
            sl = _sign(v[l])
            if l == jj:
                lead_u[l] = v[l]
            else:
                lead_u[l] = v[l] - (1 if sl == 1 else 0)
                lead_z[l] = -(1 if sl == -1 else 0)

    poly = ring.zero()
    for p in range(abs(vj)):
        zexp = list(lead_z)
        uexp = list(lead_u)
        if p == 0:
            for l in range(n):
                if l == jj:
                    continue
                sl = _sign(v[l])
                if sl == 0:
                    continue
                if l > jj:
                    uexp[l] += 1
                elif (s == 1 and sl == -1) or (s == -1 and sl == 1):
                    uexp[l] += 1
                else:
                    zexp[l] += 1
        else:
            for l in range(n):
                if l != jj and v[l] != 0:
                    uexp[l] += 1
            uexp[jj] += p
            zexp[jj] -= p
            for l in range(n):
                if l == jj:
                    continue
                sl = _sign(v[l])
                if sl == 0:
                    continue
                e = sl * _floor_count(p, v[l], vj, l + 1, j)
                if s == 1:
                    uexp[l] += e
                    zexp[l] -= e
                else:
                    zexp[l] += e
                    uexp[l] -= e
        poly = poly + ring.monomial(ring.field.one, zexp, uexp)
    return poly if s == 1 else -poly


def contraction_coefficient(fan: ToricFan, i: int, j: int, field: BaseField = QQ) -> LaurentPoly:
    """Closed-form coefficient for ray i, direction j (both 1-based)."""
    return contraction_coefficient_from_ray(fan.ring(field), fan.rays[i - 1], j)


def contraction_coefficient_by_crossings(
    ring: LaurentRing, v: Sequence[int], j: int
) -> LaurentPoly:
    """Same coefficient assembled per entry point from the crossing rules.

    Each of the ``|v_j|`` entry points contributes the product of three
    factors: the flow-segment holonomy, the markings on the arc from the
    unit point to the entry (fixed-holonomy side), and the markings on the
    opposite arc (moving side).  Unlike the closed form, nothing here is a
    shared product over terms; every entry point is built from scratch.
    """
    n = ring.n
    vj = v[j - 1]
    if vj == 0:
        return ring.zero()
    s = _sign(vj)
    jj = j - 1
    poly = ring.zero()
    for p in range(abs(vj)):
        zexp = [0] * n
        uexp = [0] * n

        # flow segment: never crosses the j-walls; positive u-crossings for
        # every other active direction, except at the first entry point where
        # directions before j (in the s-dependent sense) are crossed on the
        # moving side instead
        for l in range(n):
            sl = _sign(v[l])
            if l == jj or sl == 0:
                continue
            if p > 0 or l > jj:
                uexp[l] += 1
            elif (s == 1 and sl == -1) or (s == -1 and sl == 1):
                uexp[l] += 1
            else:
                zexp[l] += 1

        # arc from the unit point to the entry point (fixed side, u-markings)
        for l in range(n):
            sl = _sign(v[l])
            if l == jj:
                uexp[l] += p if s == 1 else v[l] + p
                continue
            if sl == 0:
                continue
            cnt = _floor_count(p, v[l], vj, l + 1, j) if p > 0 else 0
            if s == 1:
                base = 1 if sl == -1 else 0
                uexp[l] += sl * cnt - base
            else:
                base = 1 if sl == 1 else 0
                uexp[l] += v[l] - sl * cnt - base

        # arc from the entry point back to the unit point (moving side,
        # z-markings)
        for l in range(n):
            sl = _sign(v[l])
            if l == jj:
                zexp[l] += (v[l] - 1 - p) if s == 1 else (-1 - p)
                continue
            if sl == 0:
                continue
            cnt = _floor_count(p, v[l], vj, l + 1, j) if p > 0 else 0
            if s == 1:
                base = 1 if sl == 1 else 0
                zexp[l] += v[l] - sl * cnt - base
            else:
                base = 1 if sl == -1 else 0
                zexp[l] += sl * cnt - base

        poly = poly + ring.monomial(ring.field.one, zexp, uexp)
    return poly if s == 1 else -poly


@dataclass(frozen=True)
class TelescopeReport:
    ok: bool
    v: tuple[int, ...]
    difference: LaurentPoly

    def __bool__(self):
        return self.ok


def telescoping_check(v: Sequence[int], ring: LaurentRing | None = None) -> TelescopeReport:
    """Expand ``sum_j alpha_j (z_j - u_j)`` and compare with ``z^v - u^v``.

    This is the independent brute-force oracle for the contraction
    coefficients: the left side is assembled from the closed form and the
    comparison is exact.
    """
    v = tuple(int(e) for e in v)
    if not any(v):
        raise ValueError("telescoping needs a nonzero ray")
    ring = ring or LaurentRing(len(v))
    lhs = ring.zero()
    for j in range(1, ring.n + 1):
        alpha = contraction_coefficient_from_ray(ring, v, j)
        lhs = lhs + alpha * (ring.z(j) - ring.u(j))
    rhs = ring.monomial(ring.field.one, v) - ring.monomial(ring.field.one, [0] * ring.n, v)
    return TelescopeReport(lhs == rhs, v, lhs - rhs)


@dataclass(frozen=True)
class AlphaTable:
    """All contraction coefficients of a fan: entry (i, j) for ray i."""

    n: int
    m: int
    entries: tuple[tuple[LaurentPoly, ...], ...]

    def entry(self, i: int, j: int) -> LaurentPoly:
        return self.entries[i - 1][j - 1]


def contraction_table(fan: ToricFan, field: BaseField = QQ) -> AlphaTable:
    ring = fan.ring(field)
    rows = []
    for i in range(1, fan.m + 1):
        rows.append(tuple(
            contraction_coefficient_from_ray(ring, fan.rays[i - 1], j)
            for j in range(1, fan.n + 1)
        ))
    table = AlphaTable(fan.n, fan.m, tuple(rows))
    for i in range(1, fan.n + 1):
        for j in range(1, fan.n + 1):
            expected = ring.one() if i == j else ring.zero()
            if table.entry(i, j) != expected:
                raise TableConsistencyError(
                    f"basis ray {i} produced a non-delta coefficient in direction {j}"
                )
    return table


class TableConsistencyError(RuntimeError):
    """A basis ray failed the delta identity its coefficients must satisfy."""


def contraction_totals(pot: Potential, table: AlphaTable | None = None,
                       field: BaseField = QQ) -> list[LaurentPoly]:
    """The contraction-side coefficients ``w_j = sum_i c_i alpha^i_j``."""
    fan = pot.fan
    table = table or contraction_table(fan, field)
    ring = fan.ring(field)
    totals = []
    for j in range(1, fan.n + 1):
        w = ring.zero()
        for i in range(1, fan.m + 1):
            w = w + table.entry(i, j).scale(pot.weight(i))
        totals.append(w)
    return totals


def build_wedge_contraction(
    fan: ToricFan, pot: Potential | None = None, field: BaseField = QQ
) -> MatrixFactorization:
    """The full factorization ``d = sum (z_j - u_j) e_j^ + sum w_j iota_j``.

    The result is verified to square to ``W(z) - W(u)`` exactly; a failure
    here is an internal-consistency fault, raised as :class:`MFError`.
    """
    pot = pot or build_potential(fan, field)
    ring = pot.W.ring
    table = contraction_table(fan, field)
    totals = contraction_totals(pot, table, field)
    d = ExteriorEndo.zero(ring)
    for j in range(1, fan.n + 1):
        d = d + ExteriorEndo.wedge(ring, j, ring.z(j) - ring.u(j))
        d = d + ExteriorEndo.contract(ring, j, totals[j - 1])
    mf = MatrixFactorization.build(d, pot.W, labels=exterior_labels(fan.n))
    expected_lambda = pot.W.swap_u_for_z()
    if mf.lam != expected_lambda:
        raise MFError(mf_verify(d, pot.W))
    return mf


def exterior_labels(n: int) -> dict[int, str]:
    """Human names for the subset basis: 1, e1, e2, e12, ..."""
    out = {0: "1"}
    for mask in range(1, 1 << n):
        out[mask] = "e" + "".join(str(j) for j in range(1, n + 1) if mask >> (j - 1) & 1)
    return out
