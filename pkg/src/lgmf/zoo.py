"""Hand-checked example factorizations: spheres, their products, real loci.

Every construction here is a literal transcription of a known matrix, then
verified against its potential by explicit squaring.  Generators that are
intersection points (rather than exterior-algebra states) are carried on
subset masks through an explicit labeling, recorded in ``labels``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .builder import build_wedge_contraction
from .exterior import ExteriorEndo, MatrixFactorization, conjugate_diagonal
from .fields import BaseField, GF2, QQ
from .laurent import LaurentPoly, LaurentRing
from .toric import preset_fan


def _as_unit(ring: LaurentRing, hol, default: LaurentPoly) -> LaurentPoly:
    """Interpret a holonomy argument as an invertible monomial."""
    if hol is None:
        return default
    if isinstance(hol, LaurentPoly):
        unit = hol
    else:
        unit = ring.constant(ring.field.coerce(hol))
    if not unit.is_monomial_unit():
        raise ValueError("holonomy must be an invertible monomial (nonzero)")
    return unit


# -- the sphere -----------------------------------------------------------------


def p1_pair(k1, k2, hol=None) -> MatrixFactorization:
    """Rank (1|1) factorization of the sphere potential T^{(k1+k2)}(z + 1/z).

    ``hol`` is the holonomy of the second circle; by default it stays
    symbolic as ``u1``.  The verified scalar is T^{(k1+k2)}(hol + 1/hol).
    """
    ring = LaurentRing(1)
    k1, k2 = Fraction(k1), Fraction(k2)
    h = _as_unit(ring, hol, ring.u(1))
    hinv = h.monomial_inverse()
    d = ExteriorEndo(ring, {
        (1, 0): ring.T(k1) * (ring.z(1) - hinv),
        (0, 1): ring.T(k2) * (ring.one() - h * ring.z(1, -1)),
    })
    W = ring.T(k1 + k2) * (ring.z(1) + ring.z(1, -1))
    return MatrixFactorization.build(d, W, labels={0: "p", 1: "q"})


def p1_perturbed(areas, k) -> MatrixFactorization:
    """The sphere with a four-lobed Hamiltonian deformation of the circle.

    ``areas = (a, b, c, d)`` are the four lobe areas, constrained by
    ``a + b = c + d``; the factorization has two generators of each parity
    and still squares to ``W - 2 T^{k/2}``.
    """
    a, b, c, d = (Fraction(x) for x in areas)
    if a + b != c + d:
        raise ValueError("lobe areas must satisfy a + b = c + d")
    k = Fraction(k)
    half = k / 2
    ring = LaurentRing(2)  # two generators per parity; only z1 appears
    z = ring.z(1)
    zinv = ring.z(1, -1)
    one = ring.one()
    Q1, Q2, P1, P2 = 0b00, 0b11, 0b01, 0b10
    entries = {
        (Q1, P1): ring.T(half - a) * (z - one),
        (Q1, P2): ring.T(half - c) * (one - zinv),
        (Q2, P1): ring.T(half - a - b + c) * (z - one),
        (Q2, P2): ring.T(half - b) * (z - one),
        (P1, Q1): ring.T(a),
        (P1, Q2): -(ring.T(a + b - c) * zinv),
        (P2, Q1): -ring.T(c),
        (P2, Q2): ring.T(b),
    }
    W = ring.T(half) * (z + zinv)
    labels = {Q1: "q1", Q2: "q2", P1: "p1", P2: "p2"}
    return MatrixFactorization.build(ExteriorEndo(ring, entries), W, labels=labels)


# -- the product of two spheres ----------------------------------------------------


def p1p1_torus(k1, k2, hol=None) -> MatrixFactorization:
    """Product-torus factorization of T^{k/2}(z1 + 1/z1 + z2 + 1/z2).

    ``hol`` is the holonomy pair of the second torus (symbolic ``(u1, u2)``
    by default).  Generators: even (p,p), (q,q); odd (p,q), (q,p).
    """
    ring = LaurentRing(2)
    k1, k2 = Fraction(k1), Fraction(k2)
    if hol is None:
        h1, h2 = ring.u(1), ring.u(2)
    else:
        h1 = _as_unit(ring, hol[0], ring.u(1))
        h2 = _as_unit(ring, hol[1], ring.u(2))
    h1i, h2i = h1.monomial_inverse(), h2.monomial_inverse()
    z1, z2 = ring.z(1), ring.z(2)
    z1i, z2i = ring.z(1, -1), ring.z(2, -1)
    one = ring.one()
    PP, QQ_, PQ, QP = 0b00, 0b11, 0b01, 0b10
    A = {
        (PQ, PP): ring.T(k1) * (h2 * z2 - one),
        (QP, PP): ring.T(k1) * (h1 * z1 - one),
        (PQ, QQ_): ring.T(k2) * (z1i - h1i),
        (QP, QQ_): -(ring.T(k2) * (z2i - h2i)),
    }
    minusB = {
        (PP, PQ): -(ring.T(k2) * (z2i - h2i)),
        (QQ_, PQ): -(ring.T(k1) * (h1 * z1 - one)),
        (PP, QP): -(ring.T(k2) * (z1i - h1i)),
        (QQ_, QP): ring.T(k1) * (h2 * z2 - one),
    }
    d = ExteriorEndo(ring, {**A, **minusB})
    W = ring.T(k1 + k2) * (z1 + z1i + z2 + z2i)
    labels = {PP: "(p,p)", QQ_: "(q,q)", PQ: "(p,q)", QP: "(q,p)"}
    return MatrixFactorization.build(d, W, labels=labels)


def p1p1_antidiagonal(k1, k2) -> MatrixFactorization:
    """Rank (1|1) factorization from the anti-diagonal sphere: lambda = 0."""
    ring = LaurentRing(2)
    k1, k2 = Fraction(k1), Fraction(k2)
    d = ExteriorEndo(ring, {
        (0b01, 0b00): ring.T(k1) * (ring.one() + ring.z(1) * ring.z(2)),
        (0b00, 0b01): ring.T(k2) * (ring.z(1, -1) + ring.z(2, -1)),
    })
    W = ring.T(k1 + k2) * (
        ring.z(1) + ring.z(1, -1) + ring.z(2) + ring.z(2, -1)
    )
    labels = {0b00: "(p,p)", 0b01: "(q,q)"}
    return MatrixFactorization.build(d, W, labels=labels, generators=(0b00, 0b01))


# -- the projective plane ------------------------------------------------------------


def p2_matrix(k=Fraction(1, 3)) -> MatrixFactorization:
    """The 4x4 Clifford-torus factorization of the plane, transcribed entry
    by entry (basis order 1, e12, e1, e2; masks 0, 3, 1, 2)."""
    ring = LaurentRing(2)
    k = Fraction(k)
    z1, z2, u1, u2 = ring.z(1), ring.z(2), ring.u(1), ring.u(2)
    Tk = ring.T(k)
    w1 = Tk - Tk * ring.monomial(1, (-1, -1), (-1, 0))   # T^k - T^k/(u1 z1 z2)
    w2 = Tk - Tk * ring.monomial(1, (0, -1), (-1, -1))   # T^k - T^k/(u1 u2 z2)
    x1, x2 = z1 - u1, z2 - u2
    entries = {
        (0b00, 0b01): w1,
        (0b00, 0b10): w2,
        (0b11, 0b01): -x2,
        (0b11, 0b10): x1,
        (0b01, 0b00): x1,
        (0b10, 0b00): x2,
        (0b01, 0b11): -w2,
        (0b10, 0b11): w1,
    }
    W = Tk * (z1 + z2 + ring.monomial(1, (-1, -1)))
    labels = {0b00: "1", 0b11: "e12", 0b01: "e1", 0b10: "e2"}
    return MatrixFactorization.build(ExteriorEndo(ring, entries), W, labels=labels)


def chan_leung_target(k=Fraction(1, 3)) -> ExteriorEndo:
    """The rescaled-basis form of the plane factorization, transcribed with
    q^{1/3} = T^k (masks: q1 = 0, q2 = 3, p1 = 2, p2 = 1)."""
    ring = LaurentRing(2)
    k = Fraction(k)
    z1, z2 = ring.z(1), ring.z(2)
    one, Tk, T2k = ring.one(), ring.T(k), ring.T(2 * k)
    P1, P2, Q1, Q2 = 0b10, 0b01, 0b00, 0b11
    return ExteriorEndo(ring, {
        (P1, Q1): z2 - Tk,
        (P1, Q2): z1 - T2k * ring.z(2, -1),
        (P2, Q1): -(one - Tk * ring.z(1, -1)),
        (P2, Q2): one - Tk * ring.z(2, -1),
        (Q1, P1): one - Tk * ring.z(2, -1),
        (Q1, P2): -(z1 - T2k * ring.z(2, -1)),
        (Q2, P1): one - Tk * ring.z(1, -1),
        (Q2, P2): z2 - Tk,
    })


def swap_z1_z2(endo: ExteriorEndo) -> ExteriorEndo:
    ring = endo.ring
    swap = {"z1": ring.z(2), "z2": ring.z(1), "u1": ring.u(2), "u2": ring.u(1)}
    return endo.map_entries(lambda p: p.substitute(swap))


@dataclass
class ChanLeungReport:
    """Outcome of rebasing the plane factorization to the rescaled form."""

    matches_rescaled_form: bool
    swapped_matches: bool
    transformed: ExteriorEndo
    swapped: ExteriorEndo

    @property
    def ok(self) -> bool:
        return self.matches_rescaled_form and self.swapped_matches


def chan_leung_compare(k=Fraction(1, 3)) -> ChanLeungReport:
    """Rebase the plane factorization and compare with the rescaled form.

    Pipeline: set the fixed holonomy to (1, 1), substitute
    ``z_i -> T^{-k} z_i`` (so the new variables absorb one cube root of the
    quantum parameter ``T^{3k}``), then change basis by the diagonal units
    ``(q1, p2, p1, q2) = (T^k, -z1 e1, e2, T^{-k} z1 e12)``.  The result
    reproduces the rescaled matrix exactly; the extra ``z1 <-> z2`` swap
    yields the form used in the earlier mirror-symmetry literature, so the
    swapped matrices are compared as well.
    """
    k = Fraction(k)
    mf = build_wedge_contraction(preset_fan("p2")) if k == Fraction(1, 3) else None
    if mf is None:
        raise ValueError("the stock plane fan has k = 1/3")
    ring = mf.endo.ring
    # fixed holonomy (1,1), then z -> T^{-k} z'
    subs = {f"u{i}": ring.one() for i in (1, 2)}
    subs.update({f"z{i}": ring.T(-k) * ring.z(i) for i in (1, 2)})
    M = mf.endo.map_entries(lambda p: p.substitute(subs))
    units = {
        0b00: ring.T(k),                 # q1 = T^k * 1
        0b01: -ring.z(1),                # p2 = -z1' e1
        0b10: ring.one(),                # p1 = e2
        0b11: ring.T(-k) * ring.z(1),    # q2 = T^{-k} z1' e12
    }
    transformed = conjugate_diagonal(M, units)
    target = chan_leung_target(k)
    swapped = swap_z1_z2(transformed)
    return ChanLeungReport(
        matches_rescaled_form=(transformed == target),
        swapped_matches=(swapped == swap_z1_z2(target)),
        transformed=transformed,
        swapped=swapped,
    )


# -- the real projective space -------------------------------------------------------


def rp_generators(n: int) -> dict[int, tuple[int, ...]]:
    """Sign vectors of the 2^n generator classes, normalized to lead with +1.

    Mask bit j-1 set means the (j-th) homogeneous coordinate is -1; the
    class parity is the number of -1 entries mod 2.
    """
    out = {}
    for mask in range(1 << n):
        vec = (1,) + tuple(-1 if mask >> (j - 1) & 1 else 1 for j in range(1, n + 1))
        out[mask] = vec
    return out


RP3_LABELS = {
    0b111: "p1", 0b001: "p2", 0b010: "p3", 0b100: "p4",
    0b000: "q1", 0b110: "q2", 0b101: "q3", 0b011: "q4",
}

# signs of the explicit 8x8 display for n = 3, keyed by (row, col) label
_RP3_SIGNS = {
    ("p1", "q1"): 1, ("p1", "q2"): 1, ("p1", "q3"): 1, ("p1", "q4"): 1,
    ("p2", "q1"): 1, ("p2", "q2"): -1, ("p2", "q3"): -1, ("p2", "q4"): 1,
    ("p3", "q1"): 1, ("p3", "q2"): 1, ("p3", "q3"): -1, ("p3", "q4"): -1,
    ("p4", "q1"): 1, ("p4", "q2"): -1, ("p4", "q3"): 1, ("p4", "q4"): -1,
    ("q1", "p1"): 1, ("q1", "p2"): 1, ("q1", "p3"): 1, ("q1", "p4"): 1,
    ("q2", "p1"): 1, ("q2", "p2"): -1, ("q2", "p3"): 1, ("q2", "p4"): -1,
    ("q3", "p1"): 1, ("q3", "p2"): -1, ("q3", "p3"): -1, ("q3", "p4"): 1,
    ("q4", "p1"): 1, ("q4", "p2"): 1, ("q4", "p3"): -1, ("q4", "p4"): -1,
}


def rp_matrix(n: int, k, field: BaseField = GF2, signed: bool = False) -> MatrixFactorization:
    """The real-locus factorization inside the projective space of odd dim n.

    Over the two-element field this is defined for every odd n; the signed
    characteristic-zero refinement is known explicitly only for n = 3.
    The verified scalar is 0: the potential T^k(z1+..+zn+1/(z1..zn)) is
    factored on the nose.
    """
    if n % 2 == 0:
        raise ValueError("the real locus only gives a factorization for odd n")
    if signed and n != 3:
        raise ValueError("signs are only known for n = 3")
    if signed and field is GF2:
        field = QQ
    ring = LaurentRing(n, field)
    half = Fraction(k) / 2
    one = field.one
    entries: dict[tuple[int, int], LaurentPoly] = {}

    def put(row: int, col: int, poly: LaurentPoly) -> None:
        if signed:
            sgn = _RP3_SIGNS[(RP3_LABELS[row], RP3_LABELS[col])]
            if sgn < 0:
                poly = -poly
        entries[(row, col)] = poly

    top = (1 << n) - 1
    for S in range(1 << n):
        for j in range(1, n + 1):
            bit = 1 << (j - 1)
            if S & bit:
                continue
            # strips through the j-th basic disc between S and S | bit
            put(S, S | bit, ring.T(half) * ring.z(j))
            put(S | bit, S, ring.T(half))
        if bin(S).count("1") % 2 == 0:
            # strips through the large disc connect complementary classes
            comp = top ^ S
            zexp_in = [-1 if S >> (j - 1) & 1 else 0 for j in range(1, n + 1)]
            zexp_out = [0 if S >> (j - 1) & 1 else -1 for j in range(1, n + 1)]
            put(S, comp, ring.T(half) * ring.monomial(one, zexp_in))
            put(comp, S, ring.T(half) * ring.monomial(one, zexp_out))

    W = ring.zero()
    for j in range(1, n + 1):
        W = W + ring.z(j)
    W = W + ring.monomial(one, [-1] * n)
    W = ring.T(Fraction(k)) * W
    labels = (
        dict(RP3_LABELS) if n == 3
        else {m: "[" + ":".join(str(c) for c in vec) + "]"
              for m, vec in rp_generators(n).items()}
    )
    return MatrixFactorization.build(ExteriorEndo(ring, entries), W, labels=labels)


# -- preset registry for the service/CLI ------------------------------------------


def zoo_preset(name: str):
    """Named example constructions exposed by the service and CLI."""
    builders = {
        "p1_pair": lambda: p1_pair(Fraction(1, 2), Fraction(1, 2)),
        "p1_perturbed": lambda: p1_perturbed(
            (Fraction(1, 4), Fraction(1, 3), Fraction(1, 5), Fraction(23, 60)), 2
        ),
        "p1p1_torus": lambda: p1p1_torus(Fraction(1, 4), Fraction(1, 4)),
        "p1p1_antidiagonal": lambda: p1p1_antidiagonal(Fraction(1, 4), Fraction(1, 4)),
        "p2": lambda: p2_matrix(),
        "rp3": lambda: rp_matrix(3, 1, signed=True),
        "rp3_char2": lambda: rp_matrix(3, 1),
        "rp5_char2": lambda: rp_matrix(5, 1),
    }
    if name not in builders:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(sorted(builders))}")
    return builders[name]()


ZOO_PRESET_NAMES = (
    "p1_pair", "p1_perturbed", "p1p1_torus", "p1p1_antidiagonal",
    "p2", "rp3", "rp3_char2", "rp5_char2",
)
