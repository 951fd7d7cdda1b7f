"""Base coefficient fields for Novikov scalars.

Three bases are supported:

* exact rationals (``QQ``), the default for all symbolic work,
* the two-element field ``GF2``, used for characteristic-2 computations,
* complex doubles (``CC``), for numeric evaluation only.

Elements are plain Python values (``Fraction``, ``int`` 0/1, ``complex``);
the field singletons know how to operate on them.  Mixing bases is always
an error, never a silent coercion.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any


class FieldMismatchError(TypeError):
    """Two scalars over different base fields were combined."""


class BaseField:
    """Interface for a coefficient field operating on raw Python values."""

    name = "?"

    def coerce(self, value: Any) -> Any:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def invert(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def to_complex(self, a) -> complex:
        """Embed an element into the complex numbers (fails for GF2)."""
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class RationalField(BaseField):
    """Exact rational arithmetic on ``fractions.Fraction`` values."""

    name = "QQ"

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into QQ")

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def invert(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def to_complex(self, a):
        return complex(a)

    def format(self, a):
        return str(a)

    def parse(self, text):
        return Fraction(text)


class GF2Field(BaseField):
    """The prime field with two elements, represented as ints 0 and 1."""

    name = "GF2"

    def coerce(self, value):
        if isinstance(value, int):
            return value % 2
        if isinstance(value, Fraction) and value.denominator == 1:
            return value.numerator % 2
        if isinstance(value, str):
            return int(value) % 2
        raise TypeError(f"cannot coerce {value!r} into GF2")

    def add(self, a, b):
        return (a + b) % 2

    def mul(self, a, b):
        return (a * b) % 2

    def neg(self, a):
        return a  # x + x = 0

    def invert(self, a):
        if a % 2 == 0:
            raise ZeroDivisionError("inverse of 0 in GF2")
        return 1

    def is_zero(self, a):
        return a % 2 == 0

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def to_complex(self, a):
        raise TypeError("GF2 has no embedding into the complex numbers")

    def parse(self, text):
        return int(text) % 2


class ComplexField(BaseField):
    """Complex doubles; evaluation only, not for exact identities."""

    name = "CC"

    def coerce(self, value):
        if isinstance(value, complex):
            return value
        if isinstance(value, (int, float, Fraction)):
            return complex(value)
        if isinstance(value, str):
            return complex(value)
        raise TypeError(f"cannot coerce {value!r} into CC")

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def invert(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in CC")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    @property
    def zero(self):
        return 0j

    @property
    def one(self):
        return 1 + 0j

    def to_complex(self, a):
        return a

    def format(self, a):
        return repr(a)

    def parse(self, text):
        return complex(text)


QQ = RationalField()
GF2 = GF2Field()
CC = ComplexField()


def check_same_field(a: BaseField, b: BaseField) -> None:
    if a is not b:
        raise FieldMismatchError(f"mixed base fields: {a} vs {b}")
