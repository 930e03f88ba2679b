"""Certified lower bound c for |theta11(z)| / |z| on the fundamental cell, per level."""

import argparse
import time
from fractions import Fraction

from hartogs_lab.errors import LogOfNonpositive
from hartogs_lab.theta import ThetaContext, c_constant


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tau-re", type=Fraction, default=Fraction(0))
    ap.add_argument("--tau-im", type=Fraction, default=Fraction(1))
    ap.add_argument("--max-level", type=int, default=6)
    a = ap.parse_args()
    ctx = ThetaContext(a.tau_re, a.tau_im)
    prev = None
    for level in range(a.max_level + 1):
        t0 = time.perf_counter()
        try:
            cb = c_constant(ctx, level)
        except LogOfNonpositive as exc:
            print(f"level {level}: not yet positive ({exc})")
            continue
        change = "" if prev is None else f"  change {100 * (cb.value - prev) / cb.value:+.2f}%"
        print(f"level {level}: c >= {cb.value:.6f}  (best sample {cb.upper:.6f}, "
              f"{cb.cells} cells, boundary {cb.on_boundary}, {time.perf_counter() - t0:.2f}s){change}")
        prev = cb.value


if __name__ == "__main__":
    main()
