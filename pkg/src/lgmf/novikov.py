"""Novikov scalars: finite formal sums sum_i a_i T^{q_i}.

The formal parameter ``T`` tracks disc energy.  Exponents are exact
rationals (energies after the 2*pi rescaling; the same convention sets
``T = e^{-1}`` under numeric specialization), coefficients live in one of
the base fields of :mod:`lgmf.fields`.  Values are immutable and kept in
canonical form: exponents strictly increasing, no zero coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Iterable

from .fields import BaseField, QQ, check_same_field

_EXP_TYPES = (int, Fraction)


class NovikovScalar:
    """A finite sum ``a_1 T^{q_1} + ... + a_k T^{q_k}`` over a base field."""

    __slots__ = ("field", "terms")

    def __init__(self, field: BaseField, terms: Iterable[tuple[Any, Any]] = ()):
        collected: dict[Fraction, Any] = {}
        for q, a in terms:
            if not isinstance(q, _EXP_TYPES):
                raise TypeError(f"T-exponent must be rational, got {q!r}")
            q = Fraction(q)
            a = field.coerce(a)
            if q in collected:
                a = field.add(collected[q], a)
            collected[q] = a
        self.field = field
        self.terms = tuple(
            (q, a) for q, a in sorted(collected.items()) if not field.is_zero(a)
        )

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field: BaseField = QQ) -> "NovikovScalar":
        return cls(field, ())

    @classmethod
    def one(cls, field: BaseField = QQ) -> "NovikovScalar":
        return cls(field, ((0, field.one),))

    @classmethod
    def T(cls, exponent, coeff=1, field: BaseField = QQ) -> "NovikovScalar":
        """The monomial ``coeff * T^exponent``."""
        return cls(field, ((Fraction(exponent), coeff),))

    @classmethod
    def const(cls, coeff, field: BaseField = QQ) -> "NovikovScalar":
        return cls(field, ((0, coeff),))

    # -- ring structure ----------------------------------------------------

    def __add__(self, other: "NovikovScalar") -> "NovikovScalar":
        check_same_field(self.field, other.field)
        return NovikovScalar(self.field, self.terms + other.terms)

    def __neg__(self) -> "NovikovScalar":
        f = self.field
        return NovikovScalar(f, tuple((q, f.neg(a)) for q, a in self.terms))

    def __sub__(self, other: "NovikovScalar") -> "NovikovScalar":
        return self + (-other)

    def __mul__(self, other: "NovikovScalar") -> "NovikovScalar":
        check_same_field(self.field, other.field)
        f = self.field
        acc: dict[Fraction, Any] = {}
        for q1, a1 in self.terms:
            for q2, a2 in other.terms:
                q = q1 + q2
                prod = f.mul(a1, a2)
                if q in acc:
                    acc[q] = f.add(acc[q], prod)
                else:
                    acc[q] = prod
        return NovikovScalar(f, acc.items())

    def scale(self, coeff) -> "NovikovScalar":
        """Multiply by a bare field element."""
        f = self.field
        c = f.coerce(coeff)
        return NovikovScalar(f, tuple((q, f.mul(a, c)) for q, a in self.terms))

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self):
        """Minimal T-exponent; +infinity for the zero scalar."""
        if not self.terms:
            return math.inf
        return self.terms[0][0]

    def is_unit(self) -> bool:
        """True for a single term with invertible coefficient (field base)."""
        return len(self.terms) == 1

    def inverse(self) -> "NovikovScalar":
        if not self.is_unit():
            raise ZeroDivisionError("only single-term Novikov scalars are invertible")
        q, a = self.terms[0]
        return NovikovScalar(self.field, ((-q, self.field.invert(a)),))

    def unit_power(self, k: int) -> "NovikovScalar":
        """Integer power of a single-term scalar (negative k allowed)."""
        if k == 0:
            return NovikovScalar.one(self.field)
        base = self if k > 0 else self.inverse()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    def specialize(self, t_value: float) -> complex:
        """Evaluate at ``T = t_value`` (a positive real), into the complexes."""
        if t_value <= 0:
            raise ValueError("T must specialize to a positive real")
        total = 0j
        for q, a in self.terms:
            total += self.field.to_complex(a) * (t_value ** float(q))
        return total

    # -- comparisons / formatting ------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, NovikovScalar)
            and self.field is other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field.name, self.terms))

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for q, a in self.terms:
            s = self.field.format(a)
            if q != 0:
                s += f"*T^{q}"
            parts.append(s)
        return " + ".join(parts)

    def __repr__(self):
        return f"NovikovScalar({self.field.name}, {self})"
