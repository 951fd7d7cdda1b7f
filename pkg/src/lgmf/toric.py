"""Toric fan data and the disc potential it generates.

A fan is given by integer rays ``v_1..v_m`` with rational support constants
``l_1..l_m`` (the moment polytope is ``{x : <x, v_i> >= l_i}``) and an
interior basepoint ``u``.  The disc potential of the torus fiber over ``u``
is ``W = sum_i c_i z^{v_i}`` with area weights ``c_i = T^{<u,v_i> - l_i}``.

Two normalizations are enforced on ingestion:

* the first n rays form an integral basis, and lattice coordinates are
  changed so that they become the standard basis (rays are reordered first
  when necessary);
* every offset ``<u,v_i> - l_i`` is strictly positive (interior basepoint),
  so all area weights have positive T-valuation.

Fano-ness itself is deliberately not checked: everything downstream is
well-defined for arbitrary Laurent data of this shape.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .fields import BaseField, QQ
from .laurent import LaurentPoly, LaurentRing
from .novikov import NovikovScalar


class FanError(ValueError):
    """Invalid fan data."""


def _det_int(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a small integer matrix, exactly."""
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor:
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    assert det.denominator == 1
    return det.numerator


def _inverse_unimodular(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Inverse of an integer matrix with determinant +-1 (again integral)."""
    n = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == r)) for i in range(n)]
           for r, row in enumerate(rows)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [a * inv for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    out = [[cell for cell in row[n:]] for row in aug]
    assert all(cell.denominator == 1 for row in out for cell in row)
    return [[cell.numerator for cell in row] for row in out]


@dataclass(frozen=True)
class ToricFan:
    """Validated fan data: rays in basis-normalized lattice coordinates."""

    n: int
    rays: tuple[tuple[int, ...], ...]
    support: tuple[Fraction, ...]
    basepoint: tuple[Fraction, ...]

    @property
    def m(self) -> int:
        return len(self.rays)

    def offset(self, i: int) -> Fraction:
        """Area weight exponent ``<u, v_i> - l_i`` of the i-th ray (1-based)."""
        v = self.rays[i - 1]
        return sum(u * e for u, e in zip(self.basepoint, v)) - self.support[i - 1]

    def sign(self, i: int, j: int) -> int:
        """Sign of the j-th coordinate of ray i (both 1-based)."""
        e = self.rays[i - 1][j - 1]
        return (e > 0) - (e < 0)

    def ring(self, field: BaseField = QQ) -> LaurentRing:
        return LaurentRing(self.n, field)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "rays": [
                {"v": list(v), "lambda": str(l)}
                for v, l in zip(self.rays, self.support)
            ],
            "basepoint": [str(u) for u in self.basepoint],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def make_fan(
    n: int,
    rays: Iterable[Sequence[int]],
    support: Iterable[Fraction | int | str],
    basepoint: Iterable[Fraction | int | str],
) -> ToricFan:
    """Validate raw fan data, normalizing the lattice basis if needed.

    Raises :class:`FanError` when no n-subset of rays is unimodular, when
    rays repeat, or when the basepoint is not interior.
    """
    ray_list = [tuple(int(e) for e in v) for v in rays]
    supp = [Fraction(l) for l in support]
    base = [Fraction(u) for u in basepoint]
    m = len(ray_list)
    if m < n:
        raise FanError(f"need at least {n} rays, got {m}")
    if any(len(v) != n for v in ray_list):
        raise FanError("ray length differs from fan dimension")
    if len(supp) != m:
        raise FanError("one support constant per ray required")
    if len(base) != n:
        raise FanError("basepoint length differs from fan dimension")
    if len(set(ray_list)) != m:
        raise FanError("duplicate rays")

    order = _basis_order(n, ray_list)
    if order is None:
        raise FanError("no subset of rays forms an integral basis (|det| = 1)")
    ray_list = [ray_list[i] for i in order]
    supp = [supp[i] for i in order]

    basis = ray_list[:n]
    if basis != [tuple(int(i == j) for j in range(n)) for i in range(n)]:
        binv = _inverse_unimodular(basis)  # columns express old coords in new basis
        ray_list = [
            tuple(sum(v[k] * binv[k][j] for k in range(n)) for j in range(n))
            for v in ray_list
        ]
        base = [
            sum(base[k] * basis[j][k] for k in range(n)) for j in range(n)
        ]

    fan = ToricFan(n, tuple(ray_list), tuple(supp), tuple(base))
    for i in range(1, fan.m + 1):
        if fan.offset(i) <= 0:
            raise FanError(
                f"basepoint not interior: offset of ray {i} is {fan.offset(i)}"
            )
    return fan


def _basis_order(n: int, rays: list[tuple[int, ...]]) -> list[int] | None:
    """Indices reordered so the first n rays are unimodular; identity wins."""
    if abs(_det_int(rays[:n])) == 1:
        return list(range(len(rays)))
    for combo in itertools.combinations(range(len(rays)), n):
        if abs(_det_int([rays[i] for i in combo])) == 1:
            rest = [i for i in range(len(rays)) if i not in combo]
            return list(combo) + rest
    return None


def parse_fan(text: str) -> ToricFan:
    """Parse the JSON fan document format."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FanError(f"malformed fan document: {exc}") from exc
    try:
        return make_fan(
            int(doc["n"]),
            [ray["v"] for ray in doc["rays"]],
            [ray["lambda"] for ray in doc["rays"]],
            doc["basepoint"],
        )
    except (KeyError, TypeError) as exc:
        raise FanError(f"fan document missing field: {exc}") from exc


def load_fan(path: str) -> ToricFan:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_fan(fh.read())


@dataclass(frozen=True)
class Potential:
    """The disc potential ``W`` with its area weights and sign table."""

    fan: ToricFan
    W: LaurentPoly
    weights: tuple[NovikovScalar, ...]

    def weight(self, i: int) -> NovikovScalar:
        return self.weights[i - 1]


def build_potential(fan: ToricFan, field: BaseField = QQ) -> Potential:
    """Assemble ``W = sum_i c_i z^{v_i}`` term by term."""
    ring = fan.ring(field)
    weights = []
    W = ring.zero()
    for i in range(1, fan.m + 1):
        c = NovikovScalar.T(fan.offset(i), field.one, field)
        weights.append(c)
        W = W + ring.monomial(c, fan.rays[i - 1])
    return Potential(fan, W, tuple(weights))


def hori_vafa_substitute(pot: Potential) -> LaurentPoly:
    """Rewrite ``W`` in the moment-map variables ``t_i = z_i T^{u_i}``.

    The result is ``sum_i T^{-l_i} t^{v_i}``; the returned polynomial uses
    the z-slots of the same ring for the ``t`` variables.
    """
    ring = pot.W.ring
    mapping = {
        f"z{i}": ring.T(-pot.fan.basepoint[i - 1]) * ring.z(i)
        for i in range(1, ring.n + 1)
    }
    return pot.W.substitute(mapping)


def hori_vafa_inverse(f: LaurentPoly, fan: ToricFan) -> LaurentPoly:
    """Inverse of :func:`hori_vafa_substitute` (``t_i = z_i T^{u_i}``)."""
    ring = f.ring
    mapping = {
        f"z{i}": ring.T(fan.basepoint[i - 1]) * ring.z(i)
        for i in range(1, ring.n + 1)
    }
    return f.substitute(mapping)


@dataclass(frozen=True)
class OffsetCheck:
    ok: bool
    violation: tuple[int, int, int] | None = None
    reason: str = ""


def validate_offsets(fan: ToricFan, a: Sequence[Fraction | str | int]) -> OffsetCheck:
    """Check the genericity inequalities for the Morse offsets ``a_j``.

    For every ray i and every j < k with equal nonzero signs the strict
    inequality ``|v_{i,k}| a_j - |v_{i,j}| a_k > 0`` must hold.  The
    irrationality requirement is replaced by a finite rational surrogate:
    no ratio ``a_j / a_k`` may equal a ratio ``|v_{i,k}| / |v_{i,j}|``
    occurring in the fan.
    """
    avals = [Fraction(x) for x in a]
    if len(avals) != fan.n:
        raise ValueError("need one offset per dimension")
    if any(not (0 < x < 1) for x in avals):
        raise ValueError("offsets must lie strictly between 0 and 1")
    for i in range(1, fan.m + 1):
        v = fan.rays[i - 1]
        for j in range(1, fan.n + 1):
            for k in range(j + 1, fan.n + 1):
                sj, sk = fan.sign(i, j), fan.sign(i, k)
                if sj == sk != 0:
                    if abs(v[k - 1]) * avals[j - 1] - abs(v[j - 1]) * avals[k - 1] <= 0:
                        return OffsetCheck(False, (i, j, k), "ordering inequality violated")
    for i in range(1, fan.m + 1):
        v = fan.rays[i - 1]
        for j in range(1, fan.n + 1):
            for k in range(1, fan.n + 1):
                if j == k or v[j - 1] == 0 or v[k - 1] == 0:
                    continue
                if avals[j - 1] / avals[k - 1] == Fraction(abs(v[k - 1]), abs(v[j - 1])):
                    return OffsetCheck(False, (i, j, k), "ratio coincides with a fan ratio")
    return OffsetCheck(True)


# -- stock fans ---------------------------------------------------------------


def projective_space(n: int, total: Fraction | int | str = 1) -> ToricFan:
    """CP^n with all (n+1) basic disc areas equal to ``total / (n+1)``."""
    scale = Fraction(total)
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    support = [Fraction(0)] * n + [-scale]
    basepoint = [scale / (n + 1)] * n
    return make_fan(n, rays, support, basepoint)


def product_of_lines(factors: int) -> ToricFan:
    """(P^1)^factors with all basic disc areas equal to 1/2."""
    n = factors
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays += [tuple(-int(i == j) for j in range(n)) for i in range(n)]
    support = [Fraction(0)] * n + [Fraction(-1)] * n
    basepoint = [Fraction(1, 2)] * n
    return make_fan(n, rays, support, basepoint)


def hirzebruch_f1() -> ToricFan:
    rays = [(1, 0), (0, 1), (-1, 1), (0, -1)]
    support = [Fraction(0), Fraction(0), Fraction(-2), Fraction(-1)]
    basepoint = [Fraction(1, 2), Fraction(1, 3)]
    return make_fan(2, rays, support, basepoint)


PRESET_NAMES = ("p1", "p2", "p3", "p4", "p1p1", "p1_x4", "hirzebruch_f1")


def preset_fan(name: str) -> ToricFan:
    """Stock fans used throughout the test battery (equal-area basepoints)."""
    if name == "p1":
        return projective_space(1)
    if name == "p2":
        return projective_space(2)
    if name == "p3":
        return projective_space(3)
    if name == "p4":
        return projective_space(4)
    if name == "p1p1":
        return product_of_lines(2)
    if name == "p1_x4":
        return product_of_lines(4)
    if name == "hirzebruch_f1":
        return hirzebruch_f1()
    raise FanError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
