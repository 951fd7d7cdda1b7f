"""Critical points of the potential on the algebraic torus, and the
factorizations they generate.

The critical equations are the vanishing of the logarithmic derivatives
``z_j dW/dz_j``, computed exactly (termwise, one integer scale per
monomial) and then specialized at a numeric value of ``T``.  Roots are
found by Newton iteration in logarithmic coordinates from a multi-start
grid on tori; the batch of starts is advanced together with numpy.
Completeness is not guaranteed; known cases are cross-checked in tests.

Specializing the fixed-holonomy variables of the wedge-contraction
factorization at a critical point produces a numeric matrix that squares
to ``W - W(point)``; these are the generators of the factorization
category at that critical value.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .builder import build_wedge_contraction, contraction_totals, contraction_table
from .exterior import ExteriorEndo
from .laurent import LaurentPoly
from .toric import Potential, ToricFan, build_potential

DEFAULT_TOL = 1e-12


def log_derivative_system(pot: Potential) -> list[LaurentPoly]:
    """The exact polynomials ``z_j dW/dz_j``, one per direction."""
    ring = pot.W.ring
    out = []
    for j in range(1, ring.n + 1):
        f = ring.zero()
        for (zexp, uexp), nov in pot.W.items():
            scale = zexp[j - 1]
            if scale:
                f = f + ring.monomial(nov.scale(scale), zexp, uexp)
        out.append(f)
    return out


@dataclass(frozen=True)
class CriticalPoint:
    point: tuple[complex, ...]
    residual: float
    value: complex

    def to_json_dict(self) -> dict:
        return {
            "point": [[c.real, c.imag] for c in self.point],
            "residual": self.residual,
            "value": [self.value.real, self.value.imag],
        }


@dataclass
class SolverConfig:
    tol: float = DEFAULT_TOL
    max_iter: int = 80
    phases: int | None = None      # per-dimension phase count (odd); default 2*max|v|+1
    radii: tuple[float, ...] | None = None
    max_step: float = 1.0          # trust region in log coordinates
    escape_magnitude: float = 1e8  # |z_i| beyond this counts as leaving the torus


def _poly_to_numeric(f: LaurentPoly, t_value: float):
    """Coefficient vector and exponent matrix of the z-only specialization."""
    coeffs = []
    exps = []
    for (zexp, uexp), nov in f.items():
        if any(uexp):
            raise ValueError("system polynomial still contains fixed-holonomy variables")
        coeffs.append(nov.specialize(t_value))
        exps.append(zexp)
    return np.asarray(coeffs, dtype=complex), np.asarray(exps, dtype=float)


def _balancing_radius(pot: Potential, t_value: float) -> float:
    degrees = [sum(zexp) for (zexp, _), _ in pot.W.items()]
    vals = [float(nov.valuation()) for _, nov in pot.W.items()]
    lo, hi = min(degrees), max(degrees)
    if hi == lo:
        return 1.0
    v_at_hi = min(v for d, v in zip(degrees, vals) if d == hi)
    v_at_lo = min(v for d, v in zip(degrees, vals) if d == lo)
    return float(t_value ** ((v_at_lo - v_at_hi) / (hi - lo)))


def find_critical_points(
    pot: Potential,
    t_value: float = math.exp(-1),
    config: SolverConfig | None = None,
) -> list[CriticalPoint]:
    """Multi-start Newton search for all roots of the logarithmic system.

    Returned points are de-duplicated within ``10 * tol`` and each satisfies
    the specialized system to residual below ``tol``.  An empty list means
    no start converged.
    """
    if t_value <= 0:
        raise ValueError("T must specialize to a positive real")
    cfg = config or SolverConfig()
    n = pot.fan.n
    system = [_poly_to_numeric(f, t_value) for f in log_derivative_system(pot)]
    if all(len(c) == 0 for c, _ in system):
        return []

    max_entry = max((abs(e) for v in pot.fan.rays for e in v), default=1)
    phases = cfg.phases or (2 * max_entry + 1)
    if cfg.radii is not None:
        radii: tuple[float, ...] = cfg.radii
    else:
        r2 = _balancing_radius(pot, t_value)
        radii = (1.0, r2) if abs(r2 - 1.0) > 1e-9 else (1.0, float(t_value) ** 0.5)

    angles = 2.0 * np.pi * np.arange(phases) / phases
    grids = np.meshgrid(*([angles] * n), indexing="ij")
    theta = np.stack([g.ravel() for g in grids], axis=-1)  # (phases^n, n)
    starts = []
    for r in radii:
        starts.append(r * np.exp(1j * theta))
    Z = np.concatenate(starts, axis=0)

    def evaluate(z: np.ndarray):
        S = z.shape[0]
        F = np.empty((S, n), dtype=complex)
        J = np.empty((S, n, n), dtype=complex)
        logz = np.log(z)
        for j, (coeffs, exps) in enumerate(system):
            if len(coeffs) == 0:
                F[:, j] = 0.0
                J[:, j, :] = 0.0
                continue
            monomials = np.exp(logz @ exps.T)  # (S, T_j)
            F[:, j] = monomials @ coeffs
            for l in range(n):
                J[:, j, l] = monomials @ (coeffs * exps[:, l])
        return F, J

    active = np.ones(Z.shape[0], dtype=bool)
    for _ in range(cfg.max_iter):
        if not active.any():
            break
        F, J = evaluate(Z[active])
        res = np.abs(F).max(axis=1)
        still = res > cfg.tol * 0.01
        det = np.abs(np.linalg.det(J))
        solvable = det > 1e-300
        todo = still & solvable
        if not todo.any():
            active_idx = np.where(active)[0]
            active[active_idx[still]] = False  # trapped at singular Jacobian
            active[active_idx[~still]] = False
            break
        step = np.zeros_like(F)
        step[todo] = np.linalg.solve(J[todo], F[todo][..., None])[..., 0]
        norms = np.abs(step).max(axis=1, keepdims=True)
        scale = np.minimum(1.0, cfg.max_step / np.maximum(norms, 1e-30))
        step = step * scale
        updated = Z[active]
        updated[todo] = updated[todo] * np.exp(-step[todo])
        Z[active] = updated
        active_idx = np.where(active)[0]
        active[active_idx[~todo]] = False

    F, _ = evaluate(Z)
    residuals = np.abs(F).max(axis=1)
    order = np.argsort(residuals)
    found: list[CriticalPoint] = []
    for idx in order:
        if residuals[idx] >= cfg.tol:
            break
        pt = Z[idx]
        mags = np.abs(pt)
        # Newton flows that push a coordinate to 0 or infinity drive the
        # residual down without ever reaching a torus root; drop them
        if mags.min() < 1 / cfg.escape_magnitude or mags.max() > cfg.escape_magnitude:
            continue
        if any(np.abs(pt - np.asarray(f.point)).max() < 10 * cfg.tol for f in found):
            continue
        value = pot.W.eval_numeric(pt, None, t_value)
        found.append(CriticalPoint(tuple(complex(c) for c in pt),
                                   float(residuals[idx]), complex(value)))
    found.sort(key=lambda p: tuple((round(c.real, 9), round(c.imag, 9)) for c in p.point))
    return found


def distinct_values_report(points: list[CriticalPoint], tol: float = 1e-9) -> dict:
    """Group critical values; coincident values are reported, not rejected."""
    groups: list[list[int]] = []
    for i, p in enumerate(points):
        for group in groups:
            if abs(points[group[0]].value - p.value) < tol:
                group.append(i)
                break
        else:
            groups.append([i])
    return {
        "distinct": all(len(g) == 1 for g in groups),
        "groups": groups,
    }


@dataclass
class NumericGenerator:
    """A wedge-contraction factorization specialized at a critical point."""

    endo: ExteriorEndo            # complex-coefficient entries, z variables only
    point: CriticalPoint
    value: complex
    max_square_error: float


def generator_at_point(
    fan: ToricFan,
    pt: CriticalPoint,
    t_value: float = math.exp(-1),
    tol: float = DEFAULT_TOL,
    checks: int = 20,
    seed: int = 0,
) -> NumericGenerator:
    """Specialize the fixed holonomy at a critical point, numerically.

    The result is verified by evaluating the squared matrix at ``checks``
    random torus points and comparing with ``(W(z) - W(point)) Id`` to an
    infinity-norm error below ``100 * tol``.
    """
    if pt.residual >= tol:
        raise ValueError("point residual exceeds the solver tolerance")
    pot = build_potential(fan)
    mf = build_wedge_contraction(fan, pot)
    numeric = mf.endo.map_entries(lambda p: p.collapse_numeric(pt.point, t_value))
    value = complex(pt.value)

    n = fan.n
    dim = 1 << n
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(checks):
        zpt = [cmath.exp(1j * rng.uniform(0, 2 * math.pi)) * rng.uniform(0.8, 1.25)
               for _ in range(n)]
        M = np.zeros((dim, dim), dtype=complex)
        for (r, c), p in numeric.entries.items():
            M[r, c] = p.eval_numeric(zpt, None, t_value)
        wz = pot.W.eval_numeric(zpt, None, t_value)
        err = np.abs(M @ M - (wz - value) * np.eye(dim)).max()
        worst = max(worst, float(err))
    if worst >= 100 * tol:
        raise ArithmeticError(
            f"squared generator misses the potential by {worst:.3e}"
        )
    return NumericGenerator(numeric, pt, value, worst)


@dataclass
class WedgeContractionReport:
    """Shape certificate for a generator: coefficients and the scalar identity."""

    is_wedge_contraction: bool
    xs_text: list[str] = field(default_factory=list)
    ws_text: list[str] = field(default_factory=list)
    identity_exact: bool = False
    point_residual: float | None = None


def wedge_contraction_report(
    fan: ToricFan,
    pt: CriticalPoint | None = None,
    t_value: float = math.exp(-1),
) -> WedgeContractionReport:
    """Certify the wedge-contraction form of the generator at a point.

    Checks, symbolically, that the construction equals
    ``sum x_i e_i^ + sum w_j iota_j`` with ``x_i = z_i - u_i`` and that
    ``sum_j x_j w_j = W(z) - W(u)``; when a point is supplied the scalar
    identity is also evaluated there.
    """
    if fan.n > 4:
        raise ValueError("shape reports are limited to dimension <= 4")
    pot = build_potential(fan)
    ring = pot.W.ring
    mf = build_wedge_contraction(fan, pot)
    xs = [ring.z(j) - ring.u(j) for j in range(1, fan.n + 1)]
    ws = contraction_totals(pot, contraction_table(fan))
    rebuilt = ExteriorEndo.zero(ring)
    for j in range(1, fan.n + 1):
        rebuilt = rebuilt + ExteriorEndo.wedge(ring, j, xs[j - 1])
        rebuilt = rebuilt + ExteriorEndo.contract(ring, j, ws[j - 1])
    shape_ok = rebuilt == mf.endo
    total = ring.zero()
    for x, w in zip(xs, ws):
        total = total + x * w
    identity = total == (pot.W - pot.W.swap_u_for_z())
    residual = None
    if pt is not None:
        zpt = [c * cmath.exp(0.31j) for c in pt.point]  # stay off the critical point
        lhs = sum(
            x.eval_numeric(zpt, pt.point, t_value) * w.eval_numeric(zpt, pt.point, t_value)
            for x, w in zip(xs, ws)
        )
        rhs = pot.W.eval_numeric(zpt, None, t_value) - pt.value
        residual = abs(lhs - rhs)
    return WedgeContractionReport(
        is_wedge_contraction=shape_ok,
        xs_text=[x.to_text() for x in xs],
        ws_text=[w.to_text() for w in ws],
        identity_exact=identity,
        point_residual=residual,
    )
