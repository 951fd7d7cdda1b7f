"""Sparse Laurent polynomials in paired variable sets z_1..z_n and u_1..u_n.

The ``z`` variables are the mirror coordinates; the ``u`` variables are the
fixed-holonomy copies (written with an underline in the mirror-symmetry
literature, ``u`` in all machine-facing text).  Coefficients are
:class:`~lgmf.novikov.NovikovScalar` values over a common base field.

Polynomials are immutable.  Terms are stored sparsely, keyed by the pair of
integer exponent vectors, and iterate in lexicographic order on
``(z_part, u_part)``; this fixes serialization and equality.

Canonical text form: terms like ``coeff * T^q * z1^a1 * u2^b2`` joined by
``+``/``-``, coefficient always present, ``T^0`` and zero exponents omitted.
The same grammar is accepted back by :meth:`LaurentRing.from_text`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .fields import BaseField, CC, QQ, check_same_field
from .novikov import NovikovScalar

ExpKey = tuple[tuple[int, ...], tuple[int, ...]]


class RingMismatchError(TypeError):
    """Two polynomials from different ring contexts were combined."""


class SubstitutionError(ValueError):
    """A substitution target was not an invertible monomial."""


class LaurentRing:
    """Ring context: number of variable pairs ``n`` and the base field."""

    __slots__ = ("n", "field")

    def __init__(self, n: int, field: BaseField = QQ):
        if n < 1:
            raise ValueError("ring needs at least one variable pair")
        self.n = n
        self.field = field

    def __eq__(self, other):
        return (
            isinstance(other, LaurentRing)
            and self.n == other.n
            and self.field is other.field
        )

    def __hash__(self):
        return hash((self.n, self.field.name))

    def __repr__(self):
        return f"LaurentRing(n={self.n}, field={self.field})"

    # -- element constructors ----------------------------------------------

    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def one(self) -> "LaurentPoly":
        return self.constant(NovikovScalar.one(self.field))

    def constant(self, coeff) -> "LaurentPoly":
        nov = self._as_scalar(coeff)
        zero = (0,) * self.n
        return LaurentPoly(self, {(zero, zero): nov})

    def monomial(self, coeff, zexp: Iterable[int], uexp: Iterable[int] | None = None) -> "LaurentPoly":
        """Single term ``coeff * z^zexp * u^uexp``."""
        zt = tuple(int(e) for e in zexp)
        ut = tuple(int(e) for e in uexp) if uexp is not None else (0,) * self.n
        if len(zt) != self.n or len(ut) != self.n:
            raise ValueError(f"exponent vectors must have length {self.n}")
        return LaurentPoly(self, {(zt, ut): self._as_scalar(coeff)})

    def z(self, i: int, power: int = 1) -> "LaurentPoly":
        """The variable ``z_i`` (1-based), optionally raised to a power."""
        e = [0] * self.n
        e[self._index(i)] = power
        return self.monomial(NovikovScalar.one(self.field), e)

    def u(self, i: int, power: int = 1) -> "LaurentPoly":
        """The fixed-holonomy variable ``u_i`` (1-based)."""
        e = [0] * self.n
        e[self._index(i)] = power
        return self.monomial(NovikovScalar.one(self.field), [0] * self.n, e)

    def T(self, exponent, coeff=1) -> "LaurentPoly":
        return self.constant(NovikovScalar.T(exponent, coeff, self.field))

    def _index(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"variable index {i} out of range 1..{self.n}")
        return i - 1

    def _as_scalar(self, coeff) -> NovikovScalar:
        if isinstance(coeff, NovikovScalar):
            check_same_field(coeff.field, self.field)
            return coeff
        return NovikovScalar.const(coeff, self.field)

    # -- text parsing --------------------------------------------------------

    def from_text(self, text: str) -> "LaurentPoly":
        """Parse the canonical text form back into a polynomial."""
        text = text.strip()
        if text in ("", "0"):
            return self.zero()
        total = self.zero()
        for sign, term in _split_terms(text):
            total = total + self._parse_term(term).scale_field(
                self.field.one if sign > 0 else self.field.neg(self.field.one)
            )
        return total

    def _parse_term(self, term: str) -> "LaurentPoly":
        coeff = self.field.one
        t_exp = Fraction(0)
        zexp = [0] * self.n
        uexp = [0] * self.n
        saw_coeff = False
        for factor in (f.strip() for f in _split_factors(term)):
            if not factor:
                raise ValueError(f"empty factor in term {term!r}")
            m = re.fullmatch(r"T\^(?P<q>[^\s*]+)", factor)
            if m:
                t_exp += Fraction(m.group("q"))
                continue
            m = re.fullmatch(r"(?P<var>[zu])(?P<idx>\d+)(\^(?P<pow>-?\d+))?", factor)
            if m:
                idx = self._index(int(m.group("idx")))
                power = int(m.group("pow")) if m.group("pow") else 1
                if m.group("var") == "z":
                    zexp[idx] += power
                else:
                    uexp[idx] += power
                continue
            if saw_coeff:
                raise ValueError(f"unrecognized factor {factor!r} in {term!r}")
            coeff = self.field.mul(coeff, self.field.parse(factor.strip("()")))
            saw_coeff = True
        nov = NovikovScalar(self.field, ((t_exp, coeff),))
        return self.monomial(nov, zexp, uexp)


def _split_terms(text: str) -> list[tuple[int, str]]:
    """Split on top-level ``+``/``-``, respecting parentheses and ``^``/``*``."""
    s = text.strip()
    sign = 1
    if s and s[0] in "+-":
        sign = 1 if s[0] == "+" else -1
        s = s[1:]
    terms: list[tuple[int, str]] = []
    depth = 0
    prev_solid = ""  # last non-space character seen inside the current term
    buf: list[str] = []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        # a sign after '^' or '*' belongs to an exponent/coefficient, not a term break
        if ch in "+-" and depth == 0 and prev_solid not in ("^", "*", ""):
            terms.append((sign, "".join(buf).strip()))
            sign = 1 if ch == "+" else -1
            buf = []
            prev_solid = ""
            continue
        buf.append(ch)
        if not ch.isspace():
            prev_solid = ch
    chunk = "".join(buf).strip()
    if chunk:
        terms.append((sign, chunk))
    return terms


def _split_factors(term: str):
    factors = []
    depth = 0
    current = []
    for ch in term:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            factors.append("".join(current))
            current = []
        else:
            current.append(ch)
    factors.append("".join(current))
    return factors


class LaurentPoly:
    """Immutable sparse Laurent polynomial over a :class:`LaurentRing`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: LaurentRing, terms: Mapping[ExpKey, NovikovScalar]):
        clean = {k: v for k, v in terms.items() if not v.is_zero()}
        self.ring = ring
        self.terms = clean

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        """Terms in canonical (lexicographic) order."""
        return sorted(self.terms.items())

    def coefficient(self, zexp: Iterable[int], uexp: Iterable[int] | None = None) -> NovikovScalar:
        key = (tuple(zexp), tuple(uexp) if uexp is not None else (0,) * self.ring.n)
        return self.terms.get(key, NovikovScalar.zero(self.ring.field))

    def is_constant(self) -> bool:
        zero = (0,) * self.ring.n
        return all(k == (zero, zero) for k in self.terms)

    def constant_value(self) -> NovikovScalar:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        zero = (0,) * self.ring.n
        return self.coefficient(zero, zero)

    def is_z_free(self) -> bool:
        """True when no term involves any z-variable (u and T only)."""
        zero = (0,) * self.ring.n
        return all(z == zero for (z, _) in self.terms)

    def is_monomial_unit(self) -> bool:
        """True for a single term whose coefficient is invertible."""
        if len(self.terms) != 1:
            return False
        (_, nov), = self.terms.items()
        return nov.is_unit()

    # -- ring operations ------------------------------------------------------

    def _check(self, other: "LaurentPoly") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"mixed rings {self.ring} and {other.ring}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            if k in acc:
                acc[k] = acc[k] + v
            else:
                acc[k] = v
        return LaurentPoly(self.ring, acc)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        acc: dict[ExpKey, NovikovScalar] = {}
        for (z1, u1), a in self.terms.items():
            for (z2, u2), b in other.terms.items():
                key = (
                    tuple(x + y for x, y in zip(z1, z2)),
                    tuple(x + y for x, y in zip(u1, u2)),
                )
                prod = a * b
                if key in acc:
                    acc[key] = acc[key] + prod
                else:
                    acc[key] = prod
        return LaurentPoly(self.ring, acc)

    def scale(self, nov: NovikovScalar) -> "LaurentPoly":
        check_same_field(nov.field, self.ring.field)
        return LaurentPoly(self.ring, {k: v * nov for k, v in self.terms.items()})

    def scale_field(self, coeff) -> "LaurentPoly":
        return LaurentPoly(self.ring, {k: v.scale(coeff) for k, v in self.terms.items()})

    def monomial_inverse(self) -> "LaurentPoly":
        if not self.is_monomial_unit():
            raise SubstitutionError("only invertible monomials can be inverted")
        ((z, u), nov), = self.terms.items()
        return LaurentPoly(
            self.ring,
            {(tuple(-e for e in z), tuple(-e for e in u)): nov.inverse()},
        )

    def unit_power(self, k: int) -> "LaurentPoly":
        if not self.is_monomial_unit():
            raise SubstitutionError("only invertible monomials have integer powers")
        ((z, u), nov), = self.terms.items()
        return LaurentPoly(
            self.ring,
            {(tuple(e * k for e in z), tuple(e * k for e in u)): nov.unit_power(k)},
        )

    # -- substitution ----------------------------------------------------------

    def substitute(self, mapping: Mapping[str, "LaurentPoly"]) -> "LaurentPoly":
        """Apply a per-variable substitution by invertible monomials.

        ``mapping`` sends variable names (``"z1"``, ``"u2"``, ...) to unit
        monomials of the same ring; unmapped variables stay fixed.  Because
        every target is invertible, negative exponents substitute
        consistently and the map is a ring homomorphism.
        """
        n = self.ring.n
        targets: dict[tuple[str, int], LaurentPoly] = {}
        for name, target in mapping.items():
            m = re.fullmatch(r"([zu])(\d+)", name)
            if not m:
                raise SubstitutionError(f"bad variable name {name!r}")
            idx = int(m.group(2))
            if not 1 <= idx <= n:
                raise SubstitutionError(f"variable index out of range in {name!r}")
            if not isinstance(target, LaurentPoly) or target.ring != self.ring:
                raise SubstitutionError(f"target for {name!r} is not in the same ring")
            if not target.is_monomial_unit():
                raise SubstitutionError(f"target for {name!r} must be a unit monomial")
            targets[(m.group(1), idx)] = target

        out = self.ring.zero()
        for (zexp, uexp), nov in self.items():
            term = self.ring.constant(nov)
            for i, e in enumerate(zexp, start=1):
                if e == 0:
                    continue
                tgt = targets.get(("z", i))
                term = term * (tgt.unit_power(e) if tgt is not None else self.ring.z(i, e))
            for i, e in enumerate(uexp, start=1):
                if e == 0:
                    continue
                tgt = targets.get(("u", i))
                term = term * (tgt.unit_power(e) if tgt is not None else self.ring.u(i, e))
            out = out + term
        return out

    def swap_u_for_z(self) -> "LaurentPoly":
        """Substitute ``z_i -> u_i`` for every i (evaluate at the fixed point)."""
        return self.substitute({f"z{i}": self.ring.u(i) for i in range(1, self.ring.n + 1)})

    def collapse_u_to_z(self) -> "LaurentPoly":
        """Substitute ``u_i -> z_i`` for every i."""
        return self.substitute({f"u{i}": self.ring.z(i) for i in range(1, self.ring.n + 1)})

    # -- evaluation --------------------------------------------------------------

    def eval_numeric(
        self,
        z_point: Iterable[complex],
        u_point: Iterable[complex] | None = None,
        t_value: float = 1.0,
    ) -> complex:
        """Numeric evaluation; all point coordinates must be nonzero."""
        zp = tuple(complex(c) for c in z_point)
        up = tuple(complex(c) for c in u_point) if u_point is not None else (1 + 0j,) * self.ring.n
        if len(zp) != self.ring.n or len(up) != self.ring.n:
            raise ValueError("evaluation point has wrong length")
        if any(c == 0 for c in zp) or any(c == 0 for c in up):
            raise ZeroDivisionError("evaluation point has a zero coordinate")
        total = 0j
        for (zexp, uexp), nov in self.terms.items():
            val = nov.specialize(t_value)
            for c, e in zip(zp, zexp):
                if e:
                    val *= c ** e
            for c, e in zip(up, uexp):
                if e:
                    val *= c ** e
            total += val
        return total

    def collapse_numeric(self, u_point: Iterable[complex], t_value: float) -> "LaurentPoly":
        """Specialize ``u`` and ``T`` numerically, leaving a complex poly in z."""
        up = tuple(complex(c) for c in u_point)
        if len(up) != self.ring.n:
            raise ValueError("u-point has wrong length")
        if any(c == 0 for c in up):
            raise ZeroDivisionError("u-point has a zero coordinate")
        cc_ring = LaurentRing(self.ring.n, CC)
        acc: dict[ExpKey, NovikovScalar] = {}
        uzero = (0,) * self.ring.n
        for (zexp, uexp), nov in self.terms.items():
            val = nov.specialize(t_value)
            for c, e in zip(up, uexp):
                if e:
                    val *= c ** e
            key = (zexp, uzero)
            prev = acc.get(key)
            add = NovikovScalar.const(val, CC)
            acc[key] = prev + add if prev is not None else add
        return LaurentPoly(cc_ring, acc)

    # -- comparisons / formatting ---------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPoly)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, tuple(self.items())))

    def __bool__(self):
        return bool(self.terms)

    def to_text(self) -> str:
        """Canonical text form (see module docstring)."""
        if not self.terms:
            return "0"
        rendered: list[tuple[int, str]] = []
        for (zexp, uexp), nov in self.items():
            factors = []
            for i, e in enumerate(zexp, start=1):
                if e == 1:
                    factors.append(f"z{i}")
                elif e != 0:
                    factors.append(f"z{i}^{e}")
            for i, e in enumerate(uexp, start=1):
                if e == 1:
                    factors.append(f"u{i}")
                elif e != 0:
                    factors.append(f"u{i}^{e}")
            for q, a in nov.terms:
                sign, coeff_text = _signed_coeff_text(self.ring.field, a)
                parts = [coeff_text]
                if q != 0:
                    parts.append(f"T^{q}")
                parts.extend(factors)
                rendered.append((sign, " * ".join(parts)))
        out = []
        for idx, (sign, text) in enumerate(rendered):
            if idx == 0:
                out.append(text if sign > 0 else f"-{text}")
            else:
                out.append(f" + {text}" if sign > 0 else f" - {text}")
        return "".join(out)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LaurentPoly({self.ring!r}, {self.to_text()})"


def _signed_coeff_text(field: BaseField, a) -> tuple[int, str]:
    """Split a coefficient into a sign and positive text, where meaningful."""
    if isinstance(a, (int, Fraction)) and a < 0:
        return -1, field.format(-a)
    if isinstance(a, complex):
        return 1, f"({field.format(a).strip('()')})"
    return 1, field.format(a)
