from .main import CommandResult, build_parser, main, run
from .parser import parse_complex, parse_lattice_point, parse_poly, parse_real

__all__ = [
    "CommandResult",
    "build_parser",
    "main",
    "parse_complex",
    "parse_lattice_point",
    "parse_poly",
    "parse_real",
    "run",
]
