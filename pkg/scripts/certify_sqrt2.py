"""Certified divergence chain at alpha = sqrt(2) tau0, one line per witness."""

import argparse
import time
from dataclasses import dataclass

from hartogs_lab.hartogs import ExactPoint, counterexample_series, divergence_certificate
from hartogs_lab.numeric import ExactReal, PrecisionBudget, fmt_ball


@dataclass
class CertifyConfig:
    radicand: int = 2
    max_n: int = 15
    bits: int = 128
    max_restarts: int = 5
    c_level: int = 5


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radicand", type=int, default=2)
    ap.add_argument("--max-n", type=int, default=15)
    a = ap.parse_args()
    cfg = CertifyConfig(radicand=a.radicand, max_n=a.max_n)
    alpha = ExactPoint(ExactReal.sqrt(cfg.radicand), 0)
    t0 = time.perf_counter()
    certs = divergence_certificate(
        counterexample_series(), alpha, cfg.max_n,
        PrecisionBudget(cfg.bits, cfg.max_restarts), cfg.c_level,
    )
    for c in certs:
        print(f"n={c.n:3d}  |d|={fmt_ball(c.d_coord, 8)}  >= {c.threshold}  "
              f"log bound {fmt_ball(c.lower_bound, 8)} <= log|f_n| {fmt_ball(c.log_abs_fn, 8)}")
    print(f"{len(certs)} witnesses certified in {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
