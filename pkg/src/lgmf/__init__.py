"""Exact matrix factorizations of toric Landau-Ginzburg potentials."""

from .fields import CC, GF2, QQ
from .laurent import LaurentPoly, LaurentRing
from .novikov import NovikovScalar
from .toric import (
    Potential,
    ToricFan,
    build_potential,
    load_fan,
    make_fan,
    parse_fan,
    preset_fan,
    projective_space,
)
from .exterior import (
    ExtElement,
    ExteriorEndo,
    MatrixFactorization,
    MFError,
    conjugate_diagonal,
    mf_verify,
)

__all__ = [
    "CC",
    "GF2",
    "QQ",
    "LaurentPoly",
    "LaurentRing",
    "NovikovScalar",
    "Potential",
    "ToricFan",
    "build_potential",
    "load_fan",
    "make_fan",
    "parse_fan",
    "preset_fan",
    "projective_space",
    "ExtElement",
    "ExteriorEndo",
    "MatrixFactorization",
    "MFError",
    "conjugate_diagonal",
    "mf_verify",
]
