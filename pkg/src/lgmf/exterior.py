"""Exterior algebra over the Laurent ring and Z/2-graded endomorphisms.

The free module has rank 2^n with basis ``e_I`` indexed by subsets
``I`` of ``{1..n}``; bit ``j-1`` of the index mask corresponds to ``j``.
Wedge and contraction carry the standard Koszul signs:

* ``e_j ^ e_I = (-1)^{#{i in I : i < j}} e_{I u {j}}``  (zero if j in I),
* ``iota_j e_I = (-1)^{pos(j in I) - 1} e_{I - {j}}``    (zero if j not in I).

These are the unique signs satisfying the Clifford relations
``wedge_j iota_k + iota_k wedge_j = delta_{jk} Id``, which is what every
squaring argument here rests on.

A matrix factorization of a potential ``W`` is an odd endomorphism ``d``
with ``d^2 = (W - lambda) Id`` for a z-free scalar ``lambda``; this is
always verified by explicit squaring, never assumed.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .laurent import LaurentPoly, LaurentRing


def thread_budget() -> int:
    """Worker cap for internal parallelism, from ``LGMF_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("LGMF_THREADS", "1")))
    except ValueError:
        return 1


def mask_parity(mask: int) -> int:
    return bin(mask).count("1") % 2


def wedge_sign(mask: int, j: int) -> int:
    """Sign of ``e_j ^ e_mask``; counts elements of mask below j (1-based j)."""
    below = mask & ((1 << (j - 1)) - 1)
    return -1 if bin(below).count("1") % 2 else 1


def contract_sign(mask: int, j: int) -> int:
    """Sign of ``iota_j e_mask``: (-1)^(l-1) for the l-th set bit."""
    return wedge_sign(mask, j)


class ExtElement:
    """Element of the exterior module: sparse map from subset mask to poly."""

    __slots__ = ("ring", "comps")

    def __init__(self, ring: LaurentRing, comps: Mapping[int, LaurentPoly]):
        self.ring = ring
        self.comps = {m: p for m, p in comps.items() if not p.is_zero()}

    @classmethod
    def basis(cls, ring: LaurentRing, mask: int) -> "ExtElement":
        return cls(ring, {mask: ring.one()})

    def __add__(self, other: "ExtElement") -> "ExtElement":
        acc = dict(self.comps)
        for m, p in other.comps.items():
            acc[m] = acc[m] + p if m in acc else p
        return ExtElement(self.ring, acc)

    def __neg__(self) -> "ExtElement":
        return ExtElement(self.ring, {m: -p for m, p in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, poly: LaurentPoly) -> "ExtElement":
        return ExtElement(self.ring, {m: p * poly for m, p in self.comps.items()})

    def is_zero(self) -> bool:
        return not self.comps

    def degree(self) -> int | None:
        """Z/2 degree when homogeneous, else None."""
        parities = {mask_parity(m) for m in self.comps}
        if len(parities) == 1:
            return parities.pop()
        return None if parities else 0

    def wedge(self, other: "ExtElement") -> "ExtElement":
        acc: dict[int, LaurentPoly] = {}
        for m1, p1 in self.comps.items():
            for m2, p2 in other.comps.items():
                if m1 & m2:
                    continue
                sign = 1
                rest = m1
                while rest:
                    j_bit = rest & (-rest)
                    j = j_bit.bit_length()
                    rest ^= j_bit
                    # moving e_j past the part of m2 below j
                    below = m2 & (j_bit - 1)
                    if bin(below).count("1") % 2:
                        sign = -sign
                mask = m1 | m2
                term = (p1 * p2).scale_field(
                    self.ring.field.one if sign > 0 else self.ring.field.neg(self.ring.field.one)
                )
                acc[mask] = acc[mask] + term if mask in acc else term
        return ExtElement(self.ring, acc)

    def __eq__(self, other):
        return (
            isinstance(other, ExtElement)
            and self.ring == other.ring
            and self.comps == other.comps
        )

    def __repr__(self):
        inner = ", ".join(f"{m:b}: {p}" for m, p in sorted(self.comps.items()))
        return f"ExtElement({{{inner}}})"


class ExteriorEndo:
    """Sparse 2^n x 2^n matrix of Laurent polynomials over the subset basis.

    Entry ``(row, col)`` is the coefficient of ``e_row`` in the image of
    ``e_col``.
    """

    __slots__ = ("ring", "entries")

    def __init__(self, ring: LaurentRing, entries: Mapping[tuple[int, int], LaurentPoly]):
        self.ring = ring
        self.entries = {k: p for k, p in entries.items() if not p.is_zero()}

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def dim(self) -> int:
        return 1 << self.ring.n

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, ring: LaurentRing) -> "ExteriorEndo":
        return cls(ring, {})

    @classmethod
    def identity(cls, ring: LaurentRing) -> "ExteriorEndo":
        one = ring.one()
        return cls(ring, {(m, m): one for m in range(1 << ring.n)})

    @classmethod
    def wedge(cls, ring: LaurentRing, j: int, coeff: LaurentPoly | None = None) -> "ExteriorEndo":
        """The operator ``coeff * (e_j ^ .)``."""
        if not 1 <= j <= ring.n:
            raise IndexError(f"generator index {j} out of range 1..{ring.n}")
        coeff = coeff if coeff is not None else ring.one()
        bit = 1 << (j - 1)
        entries = {}
        for m in range(1 << ring.n):
            if m & bit:
                continue
            sign = wedge_sign(m, j)
            entries[(m | bit, m)] = coeff if sign > 0 else -coeff
        return cls(ring, entries)

    @classmethod
    def contract(cls, ring: LaurentRing, j: int, coeff: LaurentPoly | None = None) -> "ExteriorEndo":
        """The operator ``coeff * iota_j``."""
        if not 1 <= j <= ring.n:
            raise IndexError(f"generator index {j} out of range 1..{ring.n}")
        coeff = coeff if coeff is not None else ring.one()
        bit = 1 << (j - 1)
        entries = {}
        for m in range(1 << ring.n):
            if not m & bit:
                continue
            sign = contract_sign(m & ~bit, j)
            entries[(m & ~bit, m)] = coeff if sign > 0 else -coeff
        return cls(ring, entries)

    # -- algebra ----------------------------------------------------------------

    def _check(self, other: "ExteriorEndo") -> None:
        if self.ring != other.ring:
            raise TypeError("endomorphisms over different rings")

    def __add__(self, other: "ExteriorEndo") -> "ExteriorEndo":
        self._check(other)
        acc = dict(self.entries)
        for k, p in other.entries.items():
            acc[k] = acc[k] + p if k in acc else p
        return ExteriorEndo(self.ring, acc)

    def __neg__(self) -> "ExteriorEndo":
        return ExteriorEndo(self.ring, {k: -p for k, p in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, poly: LaurentPoly) -> "ExteriorEndo":
        return ExteriorEndo(self.ring, {k: p * poly for k, p in self.entries.items()})

    def compose(self, other: "ExteriorEndo") -> "ExteriorEndo":
        """Matrix product ``self @ other`` (apply ``other`` first).

        Column blocks may be processed by a small thread pool (capped by
        ``LGMF_THREADS``); the result is identical to sequential evaluation.
        """
        self._check(other)
        by_col: dict[int, list[tuple[int, LaurentPoly]]] = {}
        for (r, c), p in other.entries.items():
            by_col.setdefault(c, []).append((r, p))
        rows_of_self: dict[int, list[tuple[int, LaurentPoly]]] = {}
        for (r, c), p in self.entries.items():
            rows_of_self.setdefault(c, []).append((r, p))

        def column_products(cols: list[int]) -> dict[tuple[int, int], LaurentPoly]:
            out: dict[tuple[int, int], LaurentPoly] = {}
            for c in cols:
                for mid, p_oc in by_col[c]:
                    for r, p_sm in rows_of_self.get(mid, ()):
                        key = (r, c)
                        prod = p_sm * p_oc
                        out[key] = out[key] + prod if key in out else prod
            return out

        cols = sorted(by_col)
        workers = min(thread_budget(), max(1, len(cols)))
        if workers == 1 or self.ring.n < 4:
            merged = column_products(cols)
        else:
            chunks = [cols[i::workers] for i in range(workers)]
            merged = {}
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for part in pool.map(column_products, chunks):
                    merged.update(part)  # chunks touch disjoint columns
        return ExteriorEndo(self.ring, merged)

    def __matmul__(self, other):
        return self.compose(other)

    def apply(self, x: ExtElement) -> ExtElement:
        if x.ring != self.ring:
            raise TypeError("element over a different ring")
        acc: dict[int, LaurentPoly] = {}
        for (r, c), p in self.entries.items():
            xc = x.comps.get(c)
            if xc is None:
                continue
            term = p * xc
            acc[r] = acc[r] + term if r in acc else term
        return ExtElement(self.ring, acc)

    def parity(self) -> int | None:
        """0 for even support, 1 for odd, None for mixed (or empty -> 0)."""
        parities = {(mask_parity(r) + mask_parity(c)) % 2 for (r, c) in self.entries}
        if not parities:
            return 0
        if len(parities) == 1:
            return parities.pop()
        return None

    def entry(self, row: int, col: int) -> LaurentPoly:
        return self.entries.get((row, col), self.ring.zero())

    def map_entries(self, fn: Callable[[LaurentPoly], LaurentPoly]) -> "ExteriorEndo":
        mapped = {k: fn(p) for k, p in self.entries.items()}
        ring = next(iter(mapped.values())).ring if mapped else self.ring
        return ExteriorEndo(ring, mapped)

    def __eq__(self, other):
        return (
            isinstance(other, ExteriorEndo)
            and self.ring == other.ring
            and self.entries == other.entries
        )

    # -- serialization -----------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n": self.ring.n,
            "entries": [
                {"row": r, "col": c, "poly": p.to_text()}
                for (r, c), p in sorted(self.entries.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, ring: LaurentRing, doc: dict) -> "ExteriorEndo":
        if int(doc["n"]) != ring.n:
            raise ValueError("matrix dimension differs from ring")
        entries = {}
        for item in doc["entries"]:
            entries[(int(item["row"]), int(item["col"]))] = ring.from_text(item["poly"])
        return cls(ring, entries)


@dataclass
class VerifyReport:
    """Outcome of squaring an endomorphism against a potential."""

    ok: bool
    lam: LaurentPoly | None = None
    reason: str = ""
    bad_entry: tuple[int, int] | None = None
    difference: LaurentPoly | None = None

    def __bool__(self):
        return self.ok


def mf_verify(
    endo: ExteriorEndo,
    potential: LaurentPoly,
    generators: Iterable[int] | None = None,
) -> VerifyReport:
    """Check ``endo^2 = (potential - lambda) Id`` with lambda z-free.

    Returns the verified ``lambda`` on success; on failure reports the first
    offending matrix entry together with the symbolic difference.
    ``generators`` restricts the module to a subset of the 2^n basis masks
    (used by rank-deficient examples); it defaults to all of them.
    """
    if endo.ring != potential.ring:
        raise TypeError("potential lives in a different ring")
    gens = sorted(set(generators)) if generators is not None else list(range(endo.dim))
    gen_set = set(gens)
    for (r, c) in endo.entries:
        if r not in gen_set or c not in gen_set:
            return VerifyReport(False, reason="entry outside the generator set",
                                bad_entry=(r, c))
    if endo.entries and endo.parity() != 1:
        return VerifyReport(False, reason="endomorphism is not odd")
    square = endo.compose(endo)
    diag: LaurentPoly | None = None
    for (r, c), p in sorted(square.entries.items()):
        if r != c:
            return VerifyReport(
                False,
                reason="square has an off-diagonal entry",
                bad_entry=(r, c),
                difference=p,
            )
    for m in gens:
        val = square.entry(m, m)
        if diag is None:
            diag = val
        elif val != diag:
            return VerifyReport(
                False,
                reason="square is diagonal but not scalar",
                bad_entry=(m, m),
                difference=val - diag,
            )
    diag = diag if diag is not None else endo.ring.zero()
    lam = potential - diag
    if not lam.is_z_free():
        return VerifyReport(
            False,
            reason="potential minus square is not z-free",
            difference=lam,
        )
    return VerifyReport(True, lam=lam)


class MFError(RuntimeError):
    """A construction that must verify failed to do so."""

    def __init__(self, report: VerifyReport):
        self.report = report
        detail = report.reason
        if report.bad_entry is not None:
            detail += f" at entry {report.bad_entry}"
        if report.difference is not None:
            detail += f"; difference {report.difference}"
        super().__init__(detail)


@dataclass
class MatrixFactorization:
    """An odd endomorphism verified against its potential."""

    endo: ExteriorEndo
    potential: LaurentPoly
    lam: LaurentPoly
    labels: dict[int, str] = field(default_factory=dict)
    generators: tuple[int, ...] | None = None

    @classmethod
    def build(
        cls,
        endo: ExteriorEndo,
        potential: LaurentPoly,
        labels: dict[int, str] | None = None,
        generators: Iterable[int] | None = None,
    ) -> "MatrixFactorization":
        gens = tuple(sorted(set(generators))) if generators is not None else None
        report = mf_verify(endo, potential, gens)
        if not report.ok:
            raise MFError(report)
        return cls(endo, potential, report.lam, labels or {}, gens)


def conjugate_diagonal(
    endo: ExteriorEndo, units: Mapping[int, LaurentPoly] | Iterable[LaurentPoly]
) -> ExteriorEndo:
    """Conjugate by the diagonal basis change ``e_I -> unit_I * e_I``.

    Each unit must be an invertible monomial.  Squares are conjugation
    invariant, so verification against any potential returns the same
    lambda.
    """
    if isinstance(units, Mapping):
        unit_map = dict(units)
    else:
        unit_map = dict(enumerate(units))
    ring = endo.ring
    for m in range(endo.dim):
        unit_map.setdefault(m, ring.one())
    inverses = {}
    for m, u in unit_map.items():
        if not u.is_monomial_unit():
            raise ValueError(f"basis unit for mask {m} is not an invertible monomial")
        inverses[m] = u.monomial_inverse()
    return ExteriorEndo(
        ring,
        {
            (r, c): inverses[r] * p * unit_map[c]
            for (r, c), p in endo.entries.items()
        },
    )
