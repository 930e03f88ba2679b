"""Branch radius against discriminant distance for a relation Phi(z, w, X).

    python scripts/theorem1_check.py --phi "X^2 - (1 + z*w)" --at 1 --at 2 --at 4
"""

import argparse
from dataclasses import dataclass, field

from hartogs_lab.algebraic import theorem1_consistency
from hartogs_lab.cli import parse_complex, parse_poly


@dataclass
class CheckConfig:
    phi: str = "X^2 - (1 + z*w)"
    samples: list = field(default_factory=lambda: ["1", "2", "4"])
    terms: int = 512
    tol: float = 0.1
    workers: int = 1


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--phi", default=CheckConfig.phi)
    ap.add_argument("--at", action="append")
    ap.add_argument("--terms", type=int, default=512)
    ap.add_argument("--workers", type=int, default=1)
    a = ap.parse_args()
    cfg = CheckConfig(phi=a.phi, terms=a.terms, workers=a.workers)
    if a.at:
        cfg.samples = a.at
    rep = theorem1_consistency(
        parse_poly(cfg.phi), [parse_complex(s) for s in cfg.samples],
        N=cfg.terms, tol=cfg.tol, workers=cfg.workers,
    )
    print(rep.text())
    raise SystemExit(0 if rep.passed else 1)


if __name__ == "__main__":
    main()
