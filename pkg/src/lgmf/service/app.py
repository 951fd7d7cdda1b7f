"""FastAPI front end over the factorization library.

Every endpoint is a stateless wrapper: fan documents in, matrices and
verification reports out.  All symbolic work happens in the core package;
this module only converts between wire models and core types.
"""

from __future__ import annotations

import itertools
import random
import time

from fastapi import FastAPI, HTTPException

from ..builder import build_wedge_contraction, telescoping_check
from ..critical import (
    SolverConfig,
    distinct_values_report,
    find_critical_points,
    generator_at_point,
)
from ..exterior import MatrixFactorization, MFError, mf_verify
from ..novikov import NovikovScalar
from ..quantum4 import apply_quantum_basis, d_minus3, extract_correction, is_wedge_contraction_supported
from ..toric import FanError, ToricFan, build_potential, hori_vafa_substitute
from ..zoo import ZOO_PRESET_NAMES, zoo_preset
from .schemas import (
    CriticalPointModel,
    CritRequest,
    CritResponse,
    FailureModel,
    FanModel,
    GeneratorModel,
    GeneratorsRequest,
    GeneratorsResponse,
    MatrixModel,
    MFBuildResponse,
    PotentialResponse,
    PresetResponse,
    Quantum4Request,
    Quantum4Response,
    TelescopeRequest,
    TelescopeResponse,
    VerificationModel,
)

app = FastAPI(
    title="lgmf",
    description="Exact matrix factorizations of toric Landau-Ginzburg potentials",
    version="0.1.0",
)


def _fan_or_422(model: FanModel) -> ToricFan:
    try:
        return model.to_fan()
    except (FanError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _verification(subject: str, mf: MatrixFactorization, elapsed: float) -> VerificationModel:
    return VerificationModel(
        subject=subject,
        passed=True,
        lam=mf.lam.to_text(),
        wall_time=elapsed,
    )


def _build_response(subject: str, mf: MatrixFactorization, elapsed: float) -> MFBuildResponse:
    return MFBuildResponse(
        matrix=MatrixModel.from_endo(mf.endo),
        potential=mf.potential.to_text(),
        report=_verification(subject, mf, elapsed),
        labels={str(mask): name for mask, name in mf.labels.items()},
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/fans/{name}")
def stock_fan(name: str) -> FanModel:
    from ..toric import preset_fan

    try:
        return FanModel.from_fan(preset_fan(name))
    except FanError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc


@app.post("/potential")
def potential(fan_model: FanModel) -> PotentialResponse:
    fan = _fan_or_422(fan_model)
    pot = build_potential(fan)
    return PotentialResponse(
        n=fan.n,
        m=fan.m,
        potential=pot.W.to_text(),
        weights=[str(w) for w in pot.weights],
        signs=[[fan.sign(i, j) for j in range(1, fan.n + 1)] for i in range(1, fan.m + 1)],
        moment_map_form=hori_vafa_substitute(pot).to_text(),
    )


@app.post("/mf/build")
def mf_build(fan_model: FanModel) -> MFBuildResponse:
    fan = _fan_or_422(fan_model)
    started = time.perf_counter()
    try:
        mf = build_wedge_contraction(fan)
    except MFError as exc:
        raise HTTPException(status_code=500, detail=f"internal consistency fault: {exc}")
    return _build_response("wedge-contraction", mf, time.perf_counter() - started)


@app.post("/mf/verify")
def mf_verify_endpoint(fan_model: FanModel) -> VerificationModel:
    fan = _fan_or_422(fan_model)
    started = time.perf_counter()
    mf = build_wedge_contraction(fan)
    report = mf_verify(mf.endo, mf.potential)
    elapsed = time.perf_counter() - started
    if report.ok:
        return VerificationModel(
            subject="wedge-contraction", passed=True,
            lam=report.lam.to_text(), wall_time=elapsed,
        )
    bad = report.bad_entry or (None, None)
    return VerificationModel(
        subject="wedge-contraction", passed=False, wall_time=elapsed,
        failure=FailureModel(
            reason=report.reason, row=bad[0], col=bad[1],
            difference=report.difference.to_text() if report.difference is not None else None,
        ),
    )


@app.get("/mf/preset/{name}")
def mf_preset(name: str) -> PresetResponse:
    started = time.perf_counter()
    try:
        mf = zoo_preset(name)
    except KeyError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc
    base = _build_response(name, mf, time.perf_counter() - started)
    return PresetResponse(name=name, **base.model_dump())


@app.get("/mf/presets")
def mf_preset_names() -> list[str]:
    return list(ZOO_PRESET_NAMES)


@app.post("/critical-points")
def critical_points(req: CritRequest) -> CritResponse:
    fan = _fan_or_422(req.fan)
    pot = build_potential(fan)
    cfg = SolverConfig(tol=req.tol, max_iter=req.max_iter, phases=req.phases)
    points = find_critical_points(pot, req.t, cfg)
    return CritResponse(
        count=len(points),
        points=[CriticalPointModel(**p.to_json_dict()) for p in points],
        distinct_values=distinct_values_report(points)["distinct"],
    )


@app.post("/generators")
def generators(req: GeneratorsRequest) -> GeneratorsResponse:
    fan = _fan_or_422(req.fan)
    pot = build_potential(fan)
    cfg = SolverConfig(tol=req.tol)
    points = find_critical_points(pot, req.t, cfg)
    out = []
    for pt in points:
        gen = generator_at_point(fan, pt, req.t, req.tol, req.checks, req.seed)
        out.append(GeneratorModel(
            point=CriticalPointModel(**pt.to_json_dict()),
            matrix=MatrixModel.from_endo(gen.endo),
            max_square_error=gen.max_square_error,
        ))
    return GeneratorsResponse(count=len(out), generators=out)


@app.post("/oracle/telescoping")
def oracle_telescoping(req: TelescopeRequest) -> TelescopeResponse:
    failures: list[list[int]] = []
    checked = 0
    if req.count is None:
        if req.max_entry * 2 + 1 > 20 or req.n > 3:
            raise HTTPException(
                status_code=422,
                detail="exhaustive sweep limited to n <= 3; pass count for larger n",
            )
        for v in itertools.product(range(-req.max_entry, req.max_entry + 1), repeat=req.n):
            if not any(v):
                continue
            checked += 1
            report = telescoping_check(v)
            if not report.ok:
                failures.append(list(v))
        mode = "exhaustive"
    else:
        rng = random.Random(req.seed)
        while checked < req.count:
            v = tuple(rng.randint(-req.max_entry, req.max_entry) for _ in range(req.n))
            if not any(v):
                continue
            checked += 1
            report = telescoping_check(v)
            if not report.ok:
                failures.append(list(v))
        mode = "random"
    return TelescopeResponse(
        mode=mode, checked=checked, all_pass=not failures,
        seed=req.seed, failures=failures,
    )


@app.post("/quantum4")
def quantum4(req: Quantum4Request) -> Quantum4Response:
    fan = _fan_or_422(req.fan)
    if fan.n != 4:
        raise HTTPException(status_code=422, detail="quantum basis change needs n = 4")
    pot = build_potential(fan)
    mf = build_wedge_contraction(fan, pot)
    ring = mf.endo.ring
    if req.g is not None:
        try:
            g = ring.from_text(req.g)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=f"bad polynomial text: {exc}")
    else:
        rng = random.Random(req.seed)
        g = ring.zero()
        for _ in range(rng.randint(1, 3)):
            zexp = [rng.randint(-1, 1) for _ in range(4)]
            uexp = [rng.randint(-1, 1) for _ in range(4)]
            coeff = NovikovScalar.T(rng.randint(0, 2), rng.choice([1, -1, 2]), ring.field)
            g = g + ring.monomial(coeff, zexp, uexp)
    d3 = d_minus3(ring, g)
    corrected = mf.endo + d3
    square = mf_verify(corrected, mf.potential)
    changed = apply_quantum_basis(corrected, g)
    after = mf_verify(changed, mf.potential)
    extracted = extract_correction(d3)
    return Quantum4Response(
        g=g.to_text(),
        square_ok=bool(square.ok and square.lam == mf.lam),
        lam=square.lam.to_text() if square.ok else "",
        basis_change_wedge_contraction=is_wedge_contraction_supported(changed),
        lam_after_change=after.lam.to_text() if after.ok else "",
        extracted_matches=(extracted == g),
    )
