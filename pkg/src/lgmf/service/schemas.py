"""Pydantic request/response models for the verification service.

The wire formats mirror the on-disk JSON conventions exactly: rationals as
``"p/q"`` strings, polynomials in the canonical text form, matrices as
``{"n", "entries": [{"row", "col", "poly"}]}`` with subset-mask indices.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..exterior import ExteriorEndo
from ..laurent import LaurentRing
from ..toric import ToricFan, make_fan


class RayModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    v: list[int]
    support: str = Field(alias="lambda")


class FanModel(BaseModel):
    n: int
    rays: list[RayModel]
    basepoint: list[str]

    @classmethod
    def from_fan(cls, fan: ToricFan) -> "FanModel":
        return cls.model_validate(fan.to_json_dict())

    def to_fan(self) -> ToricFan:
        return make_fan(
            self.n,
            [ray.v for ray in self.rays],
            [ray.support for ray in self.rays],
            self.basepoint,
        )

    def model_dump_wire(self) -> dict:
        return self.model_dump(by_alias=True)


class MatrixEntryModel(BaseModel):
    row: int
    col: int
    poly: str


class MatrixModel(BaseModel):
    n: int
    field: str = "QQ"
    entries: list[MatrixEntryModel]

    @classmethod
    def from_endo(cls, endo: ExteriorEndo) -> "MatrixModel":
        doc = endo.to_json_dict()
        return cls(
            n=doc["n"],
            field=endo.ring.field.name,
            entries=[MatrixEntryModel(**e) for e in doc["entries"]],
        )

    def to_endo(self, ring: LaurentRing) -> ExteriorEndo:
        return ExteriorEndo.from_json_dict(
            ring, {"n": self.n, "entries": [e.model_dump() for e in self.entries]}
        )


class FailureModel(BaseModel):
    reason: str
    row: Optional[int] = None
    col: Optional[int] = None
    difference: Optional[str] = None


class VerificationModel(BaseModel):
    """One pass/fail line of the report, with the verified scalar."""

    subject: str
    passed: bool
    lam: Optional[str] = None
    wall_time: float = 0.0
    failure: Optional[FailureModel] = None


class PotentialResponse(BaseModel):
    n: int
    m: int
    potential: str
    weights: list[str]
    signs: list[list[int]]
    moment_map_form: str


class MFBuildResponse(BaseModel):
    matrix: MatrixModel
    potential: str
    report: VerificationModel
    labels: dict[str, str] = {}


class PresetResponse(MFBuildResponse):
    name: str


class CritRequest(BaseModel):
    fan: FanModel
    t: float = Field(default=0.36787944117144233, gt=0)  # e^{-1}
    tol: float = Field(default=1e-12, gt=0)
    phases: Optional[int] = None
    max_iter: int = 80


class CriticalPointModel(BaseModel):
    point: list[list[float]]   # [re, im] pairs
    residual: float
    value: list[float]


class CritResponse(BaseModel):
    count: int
    points: list[CriticalPointModel]
    distinct_values: bool


class GeneratorsRequest(BaseModel):
    fan: FanModel
    t: float = Field(default=0.36787944117144233, gt=0)
    tol: float = Field(default=1e-12, gt=0)
    checks: int = 20
    seed: int = 0


class GeneratorModel(BaseModel):
    point: CriticalPointModel
    matrix: MatrixModel
    max_square_error: float


class GeneratorsResponse(BaseModel):
    count: int
    generators: list[GeneratorModel]


class TelescopeRequest(BaseModel):
    n: int = Field(default=2, ge=1, le=8)
    max_entry: int = Field(default=3, ge=1)
    count: Optional[int] = Field(default=None, description="random sample size; exhaustive when omitted")
    seed: int = 0


class TelescopeResponse(BaseModel):
    mode: Literal["exhaustive", "random"]
    checked: int
    all_pass: bool
    seed: int
    failures: list[list[int]] = []


class Quantum4Request(BaseModel):
    fan: FanModel
    g: Optional[str] = Field(default=None, description="canonical poly text; random when omitted")
    seed: int = 0


class Quantum4Response(BaseModel):
    g: str
    square_ok: bool
    lam: str
    basis_change_wedge_contraction: bool
    lam_after_change: str
    extracted_matches: bool
