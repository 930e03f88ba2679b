"""Radius of the lifted branch versus distance to the discriminant locus."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from flint import acb, arb

from ..errors import DiscriminantVanishesIdentically, RootNotCertified
from ..hartogs import ExactPoint, RadiusVerdict, counterexample_series, radius_estimate, radius_from_logs
from ..numeric import ExactReal, PrecisionBudget, fmt_ball
from .gauss import GaussQ
from .lift import _exact_or_ball, hensel_lift_numeric, root_seeds
from .poly import XPoly, discriminant, monicize
from .roots import roots_univar

INFINITE = math.inf


@lru_cache(maxsize=64)
def _discriminant_cached(phi):
    return discriminant(phi)


def _is_zero(v):
    return v.is_zero() if isinstance(v, acb) else not v


def singularity_radius(phi, z0, R=math.inf):
    """min |w| over roots of Delta(z0, w) with |w| < R, as a ball; ``inf`` if none.

    A relation of degree 1 in X has no discriminant locus, so the answer is ``inf``.
    """
    mono = monicize(phi).relation
    if mono.t < 2:
        return INFINITE
    delta = _discriminant_cached(mono)
    z = z0 if isinstance(z0, GaussQ) else _exact_or_ball(z0)
    cs = delta.at_z(z)
    if not cs or all(_is_zero(c) for c in cs):
        raise DiscriminantVanishesIdentically(f"Delta(z0, w) vanishes identically at z0 = {z0}")
    encs = roots_univar(cs, certify=True)
    best_lo, best_hi = math.inf, math.inf
    for e in encs:
        lo, hi = e.modulus_bounds()
        if lo >= R:
            continue
        best_lo, best_hi = min(best_lo, lo), min(best_hi, hi)
    if math.isinf(best_hi):
        return INFINITE
    return arb(best_lo).union(arb(best_hi))


@dataclass
class ConsistencyRow:
    z0: object
    branch: acb
    verdict: RadiusVerdict
    series_radius: object  # arb or inf
    disc_radius: object  # arb or inf
    ratio: float | None
    passed: bool

    def line(self):
        sr = "inf" if self.series_radius is INFINITE else fmt_ball(self.series_radius, 6)
        dr = "inf" if self.disc_radius is INFINITE else fmt_ball(self.disc_radius, 6)
        ratio = "-" if self.ratio is None else f"{self.ratio:.4f}"
        return (
            f"z0={self.z0}  branch={fmt_ball(self.branch.real, 6)}"
            f"{'+' if float(self.branch.imag.mid()) >= 0 else ''}{fmt_ball(self.branch.imag, 6)}i  "
            f"verdict={self.verdict.kind}  series_radius={sr}  disc_radius={dr}  "
            f"ratio={ratio}  {'PASS' if self.passed else 'FAIL'}"
        )


@dataclass
class ConsistencyReport:
    relation: str
    N: int
    rows: list
    contrast: str | None = None
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    def text(self):
        out = [f"relation: {self.relation}", f"terms: N = {self.N}"]
        out += [r.line() for r in self.rows]
        out += self.notes
        if self.contrast:
            out.append(self.contrast)
        out.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(out)


def _pick_branch(seeds):
    # deterministic: largest real part, then largest imaginary part
    return max(seeds, key=lambda b: (float(b.real.mid()), float(b.imag.mid())))


def check_point(phi, z0, N, window=None, budget=PrecisionBudget(), tol=0.1):
    seeds = root_seeds(phi, z0)
    if not seeds:
        raise RootNotCertified(f"no certified simple root of Phi(z0, 0, X) at z0 = {z0}")
    branch = _pick_branch(seeds)
    lift = hensel_lift_numeric(phi, z0, branch, N, budget)
    verdict = radius_from_logs(lift.log_magnitudes(), window)
    disc = singularity_radius(phi, z0)
    if verdict.kind == "infinite":
        series_r = INFINITE
    elif verdict.kind == "finite":
        series_r = verdict.radius
    else:
        series_r = None
    if series_r is INFINITE or disc is INFINITE:
        ratio = None
        passed = series_r is INFINITE and disc is INFINITE
    elif series_r is None:
        ratio, passed = None, False
    else:
        ratio = float((series_r / disc).mid())
        passed = 1 - tol <= ratio <= 1 + tol
    return ConsistencyRow(z0, branch, verdict, series_r, disc, ratio, passed)


def _enc(x):
    # flint balls do not pickle; move them across processes as strings
    if isinstance(x, (arb, acb)):
        return ("ball", type(x).__name__, x.str(40, radius=True, more=True) if isinstance(x, arb)
                else (x.real.str(40, radius=True, more=True), x.imag.str(40, radius=True, more=True)))
    return x


def _dec(x):
    if isinstance(x, tuple) and len(x) == 3 and x[0] == "ball":
        return arb(x[2]) if x[1] == "arb" else acb(arb(x[2][0]), arb(x[2][1]))
    return x


def _task(args):
    r = check_point(*args)
    v = r.verdict
    verdict = (v.kind, _enc(v.radius), v.n0, _enc(v.rho_hat), v.diagnostics)
    return (r.z0, _enc(r.branch), verdict, _enc(r.series_radius), _enc(r.disc_radius), r.ratio, r.passed)


def _untask(t):
    z0, branch, (kind, radius, n0, rho, diag), sr, dr, ratio, passed = t
    verdict = RadiusVerdict(kind, _dec(radius), n0, _dec(rho), diag)
    return ConsistencyRow(z0, _dec(branch), verdict, _dec(sr), _dec(dr), ratio, passed)


def counterexample_contrast(N=25):
    """One line on the theta counterexample, which has no algebraic relation."""
    v = radius_estimate(counterexample_series(), ExactPoint(ExactReal.sqrt(2), 0), N)
    return (
        f"contrast: n^n theta11(n! z; i) at (x, y) = (sqrt(2), 0) with N = {N}: "
        f"verdict={v.kind} (no polynomial relation exists; off Q tau0 + Q the radius is 0)"
    )


def theorem1_consistency(phi, samples, N=512, window=None, budget=PrecisionBudget(),
                         tol=0.1, workers=1, contrast=True):
    """Compare the Cauchy-Hadamard radius of the lifted branch with the
    discriminant distance at each sample point z0."""
    if not isinstance(phi, XPoly):
        phi = XPoly(tuple(phi))
    notes = []
    if not phi.is_monic:
        notes.append("note: relation is not monic; radii refer to the monicized relation's locus")
    args = [(phi, z0, N, window, budget, tol) for z0 in samples]
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = [_untask(t) for t in ex.map(_task, args)]
    else:
        rows = [_untask(_task(a)) for a in args]
    return ConsistencyReport(str(phi), N, rows, counterexample_contrast() if contrast else None, notes)
