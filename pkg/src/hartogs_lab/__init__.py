"""Numerical laboratory for Hartogs series: a theta-function counterexample
whose restriction to lines converges only on a dense lattice, and the
algebraic relations under which convergence is forced."""

from .errors import (
    CertificationFailed,
    EscalatePrecision,
    HartogsError,
    ParseError,
    PrecisionExhausted,
    PreconditionError,
)
from .numeric import Ball, BallComplex, ExactReal, PrecisionBudget, working_precision

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BallComplex",
    "CertificationFailed",
    "EscalatePrecision",
    "ExactReal",
    "HartogsError",
    "ParseError",
    "PrecisionBudget",
    "PrecisionExhausted",
    "PreconditionError",
    "working_precision",
]
