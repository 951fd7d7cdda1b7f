"""Dimension-4 correction terms and the quantum change of exterior basis.

In (complex) dimension 4 the full differential of a torus-fiber
factorization can carry one extra component ``d3`` lowering the exterior
degree by three.  Its shape is forced by the anticommutation relations
with the wedge part: for a single function ``g``,

    d3(e_top)           = g * sum_j x_j e_j,
    d3(e_top minus i)   = (-1)^i x_i g,       x_i = z_i - u_i,

and ``(d1 + dm1 + d3)^2 = (W - W(u)) Id`` for every ``g``.  Replacing
``e_top`` by ``e_top - g`` removes the correction: in the new basis the map
is again of pure wedge-contraction shape with the same scalar.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exterior import ExteriorEndo, mask_parity
from .laurent import LaurentPoly, LaurentRing

TOP4 = 0b1111


def _require_dim4(ring: LaurentRing) -> None:
    if ring.n != 4:
        raise ValueError("the quantum basis change is specific to n = 4")


def coordinate_differences(ring: LaurentRing) -> list[LaurentPoly]:
    """The wedge coefficients ``x_i = z_i - u_i``."""
    return [ring.z(i) - ring.u(i) for i in range(1, ring.n + 1)]


def d_minus3(ring: LaurentRing, g: LaurentPoly) -> ExteriorEndo:
    """The unique degree minus-three component attached to ``g``."""
    _require_dim4(ring)
    if g.ring != ring:
        raise TypeError("g lives in a different ring")
    xs = coordinate_differences(ring)
    entries = {}
    for j in range(1, 5):
        entries[(1 << (j - 1), TOP4)] = g * xs[j - 1]
    for i in range(1, 5):
        coeff = xs[i - 1] * g
        entries[(0, TOP4 ^ (1 << (i - 1)))] = coeff if i % 2 == 0 else -coeff
    return ExteriorEndo(ring, entries)


class CorrectionShapeError(ValueError):
    """The candidate map is not of the forced degree minus-three shape."""


def _divide_exact(f: LaurentPoly, i: int) -> LaurentPoly:
    """Exact division by ``x_i = z_i - u_i``; raises when not divisible."""
    ring = f.ring
    x = ring.z(i) - ring.u(i)
    quotient = ring.zero()
    rest = f
    degrees = [zexp[i - 1] for (zexp, _) in f.terms]
    span = (max(degrees) - min(degrees) + 2) if degrees else 1
    budget = span * (len(f.terms) + 2)
    while not rest.is_zero():
        budget -= 1
        if budget < 0:
            raise CorrectionShapeError(f"not divisible by z{i} - u{i}")
        (zexp, uexp), nov = max(rest.terms.items(), key=lambda kv: kv[0][0][i - 1])
        step_z = list(zexp)
        step_z[i - 1] -= 1
        q_term = ring.monomial(nov, step_z, uexp)
        quotient = quotient + q_term
        rest = rest - q_term * x
    return quotient


def extract_correction(d3: ExteriorEndo) -> LaurentPoly:
    """Recover ``g`` from a candidate degree minus-three map.

    Inverse of :func:`d_minus3`: checks the support, the divisibility of
    each bottom entry by its ``x_i``, and the consistency of the quotients.
    Raises :class:`CorrectionShapeError` otherwise.
    """
    ring = d3.ring
    _require_dim4(ring)
    xs = coordinate_differences(ring)
    for (r, c) in d3.entries:
        top_to_one = c == TOP4 and mask_parity(r) == 1 and bin(r).count("1") == 1
        three_to_zero = r == 0 and bin(c).count("1") == 3
        if not (top_to_one or three_to_zero):
            raise CorrectionShapeError(f"unexpected entry at {(r, c)}")
    candidates = []
    for i in range(1, 5):
        f_i = d3.entry(0, TOP4 ^ (1 << (i - 1)))
        if f_i.is_zero():
            candidates.append(ring.zero())
            continue
        g_i = _divide_exact(f_i, i)
        candidates.append(g_i if i % 2 == 0 else -g_i)
    g = candidates[0]
    for i, other in enumerate(candidates[1:], start=2):
        if other != g:
            raise CorrectionShapeError(
                f"quotients disagree between directions 1 and {i}"
            )
    if d_minus3(ring, g) != d3:
        raise CorrectionShapeError("top-row entries do not match g * x_j")
    return g


def _split_wedge_contraction(d: ExteriorEndo):
    """Split d into (wedge part, contraction part); anything else is an error."""
    ring = d.ring
    up = {}
    down = {}
    for (r, c), p in d.entries.items():
        if bin(r).count("1") == bin(c).count("1") + 1 and (c & r) == c:
            up[(r, c)] = p
        elif bin(c).count("1") == bin(r).count("1") + 1 and (c & r) == r:
            down[(r, c)] = p
        else:
            raise CorrectionShapeError(f"entry {(r, c)} is neither wedge nor contraction")
    return ExteriorEndo(ring, up), ExteriorEndo(ring, down)


def apply_quantum_basis(d: ExteriorEndo, g: LaurentPoly) -> ExteriorEndo:
    """Rewrite ``d = d1 + dm1 + d_minus3(g)`` in the basis with ``e_top - g``.

    The input shape is checked: subtracting the synthesized correction must
    leave a map supported on wedge and contraction positions whose wedge
    coefficients are exactly the ``x_i``.  The output is of pure
    wedge-contraction shape; squares (hence the verified scalar) are
    unchanged by the conjugation.
    """
    ring = d.ring
    _require_dim4(ring)
    base = d - d_minus3(ring, g)
    up, down = _split_wedge_contraction(base)
    expected_up = ExteriorEndo.zero(ring)
    for j, x in enumerate(coordinate_differences(ring), start=1):
        expected_up = expected_up + ExteriorEndo.wedge(ring, j, x)
    if up != expected_up:
        raise CorrectionShapeError("wedge part is not sum of (z_i - u_i) e_i^")
    change = ExteriorEndo.identity(ring) + ExteriorEndo(ring, {(0, TOP4): g})
    change_inv = ExteriorEndo.identity(ring) + ExteriorEndo(ring, {(0, TOP4): -g})
    return change.compose(d).compose(change_inv)


@dataclass
class QuantumBasisReport:
    """What the basis change did to a corrected differential."""

    wedge_contraction: bool
    lam_unchanged: bool
    result: ExteriorEndo


def is_wedge_contraction_supported(d: ExteriorEndo) -> bool:
    """True when entries only connect masks differing by exactly one bit.

    One-bit adjacency means every entry sits in a wedge position
    (|row| = |col| + 1) or a contraction position (|row| = |col| - 1).
    """
    return all(bin(r ^ c).count("1") == 1 for (r, c) in d.entries)
