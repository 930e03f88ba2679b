"""Scan the counterexample series over a square of lattice coordinates.

Writes the scan CSV (rational points terminate, surd points diverge) and a
short tally to stderr.

    python scripts/dichotomy_scan.py --res 7 --terms 25 --out scan.csv
"""

import argparse
import sys
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from hartogs_lab.hartogs import counterexample_series, scan_grid, write_scan_csv
from hartogs_lab.theta import ThetaContext


@dataclass
class ScanConfig:
    x0: Fraction = Fraction(0)
    x1: Fraction = Fraction(1, 2)
    y0: Fraction = Fraction(0)
    y1: Fraction = Fraction(1, 2)
    res: int = 7
    terms: int = 25
    workers: int = 1
    tau_re: Fraction = Fraction(0)
    tau_im: Fraction = Fraction(1)


def run(cfg: ScanConfig, out):
    F = counterexample_series(ThetaContext(cfg.tau_re, cfg.tau_im))
    rows = scan_grid(F, (cfg.x0, cfg.x1, cfg.y0, cfg.y1), cfg.res, cfg.terms, workers=cfg.workers)
    write_scan_csv(rows, out)
    return Counter(r.verdict for r in rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--res", type=int, default=7)
    ap.add_argument("--terms", type=int, default=25)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="-")
    a = ap.parse_args()
    cfg = ScanConfig(res=a.res, terms=a.terms, workers=a.workers)
    if a.out == "-":
        tally = run(cfg, sys.stdout)
    else:
        with open(a.out, "w", newline="") as fh:
            tally = run(cfg, fh)
    print(dict(tally), file=sys.stderr)


if __name__ == "__main__":
    main()
