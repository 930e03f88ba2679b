"""Algebraic relations Phi(z, w, X) and their power-series branches."""

from .consistency import (
    ConsistencyReport,
    check_point,
    singularity_radius,
    theorem1_consistency,
)
from .gauss import GaussPoly, GaussQ, RatFunc, parse_gauss
from .lift import (
    SeriesInW,
    certify_root,
    hensel_lift_exact,
    hensel_lift_numeric,
    residual_exact,
    root_seeds,
)
from .poly import BivarPoly, Monicization, XPoly, discriminant, format_xpoly, monicize
from .roots import RootEnclosure, roots_univar
from .serialize import format_lift, parse_lift, write_lift

__all__ = [
    "BivarPoly",
    "ConsistencyReport",
    "GaussPoly",
    "GaussQ",
    "Monicization",
    "RatFunc",
    "RootEnclosure",
    "SeriesInW",
    "XPoly",
    "certify_root",
    "check_point",
    "discriminant",
    "format_lift",
    "format_xpoly",
    "hensel_lift_exact",
    "hensel_lift_numeric",
    "monicize",
    "parse_gauss",
    "parse_lift",
    "residual_exact",
    "root_seeds",
    "roots_univar",
    "singularity_radius",
    "theorem1_consistency",
    "write_lift",
]
