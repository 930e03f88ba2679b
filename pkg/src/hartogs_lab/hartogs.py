"""Hartogs series F(z, w) = sum_n f_n(z) w^n restricted to points z = alpha.

Points are given in lattice coordinates ``alpha = x*tau0 + y`` with exact
``x, y``, so membership in Q*tau0 + Q is decidable.  The series of interest
is the theta counterexample

    f_0 = 0,   f_n(z) = n^n theta11(n! z; tau0)  (n >= 1)

whose restriction converges everywhere on Q*tau0 + Q (it is a polynomial
there) and nowhere else.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import flint
from flint import acb, arb

from .diophantine import (
    d_factorial,
    factoradic_states,
    first_divisor_factorial,
    witness_search,
)
from .errors import (
    CertificationFailed,
    EscalatePrecision,
    IrrationalPoint,
    PrecisionExhausted,
    RationalPoint,
)
from .numeric import (
    ExactReal,
    PrecisionBudget,
    fmt_ball,
    frac_ball,
    square,
    with_restarts,
    working_precision,
)
from .theta import (
    NEG_INF,
    LogMagnitude,
    ThetaContext,
    c_constant,
    log_abs_theta_reduced,
    reduction_exponent,
    theta11_direct,
)
from .diophantine import factorial_bits, to_ball

BLOWUP_RHO = 50.0
SUPER_SLOPE = 0.5
FINITE_SLOPE = 0.25


@dataclass(frozen=True)
class ExactPoint:
    x: ExactReal
    y: ExactReal

    def __post_init__(self):
        for name in ("x", "y"):
            v = getattr(self, name)
            if not isinstance(v, ExactReal):
                object.__setattr__(self, name, ExactReal(v))

    @property
    def is_rational(self):
        return self.x.is_rational and self.y.is_rational

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass
class HartogsSeries:
    """A coefficient provider ``(n, alpha, budget) -> LogMagnitude``."""

    name: str
    provider: Callable
    ctx: ThetaContext | None = None

    def log_coefficient(self, n, alpha, budget=PrecisionBudget()):
        return self.provider(n, alpha, budget)


class _CounterexampleProvider:
    # picklable, so scans can fan out over processes
    def __init__(self, ctx):
        self.ctx = ctx

    def __call__(self, n, alpha, budget):
        return counterexample_log_coefficient(self.ctx, n, alpha, budget)


def counterexample_series(ctx=None):
    ctx = ctx or ThetaContext()
    return HartogsSeries("n^n theta11(n! z; tau0)", _CounterexampleProvider(ctx), ctx)


def _reduced_coords(alpha, n, budget):
    """(e(n! x), d(n! x), e(n! y), d(n! y)) from the factoradic recurrence."""
    dx, ex = d_factorial(alpha.x, n, budget)
    dy, ey = d_factorial(alpha.y, n, budget)
    return ex, dx, ey, dy


def counterexample_log_coefficient(ctx, n, alpha, budget=PrecisionBudget()):
    """log|f_n(alpha)| = n log n + log|theta11(n! alpha)| (log 0 -> NEG_INF)."""
    if n == 0:
        return NEG_INF
    alpha = alpha if isinstance(alpha, ExactPoint) else ExactPoint(*alpha)

    def attempt(bits):
        ex, dx, _, dy = _reduced_coords(alpha, n, budget)
        lg = log_abs_theta_reduced(ex, dx, dy, ctx, bits)
        if lg.is_neg_inf:
            return NEG_INF
        return LogMagnitude(lg.value + n * arb(n).log())

    return with_restarts(attempt, budget)


def counterexample_value(ctx, n, alpha, bits=None):
    """f_n(alpha) as a complex ball by direct summation (small n only)."""
    if n == 0:
        return acb(0)
    alpha = alpha if isinstance(alpha, ExactPoint) else ExactPoint(*alpha)
    fact = math.factorial(n)
    z = to_ball_exact(alpha.x * fact) * ctx.tau + to_ball_exact(alpha.y * fact)
    return arb(n) ** n * theta11_direct(z, ctx.tau, bits)


def to_ball_exact(x):
    from .numeric import eval_exact

    return eval_exact(x, flint.ctx.prec)


# ---------------------------------------------------------------------------
# convergence on Q tau0 + Q


def rational_termination(F, alpha):
    """Smallest n0 with f_n(alpha) = 0 for every n >= n0 (rational alpha)."""
    alpha = alpha if isinstance(alpha, ExactPoint) else ExactPoint(*alpha)
    if not alpha.is_rational:
        raise IrrationalPoint(f"{alpha} is not in Q tau0 + Q")
    qx = alpha.x.as_fraction().denominator
    qy = alpha.y.as_fraction().denominator
    n0 = max(first_divisor_factorial(qx), first_divisor_factorial(qy))
    # n0! alpha must land exactly on the lattice
    dx, _ = d_factorial(alpha.x, n0)
    dy, _ = d_factorial(alpha.y, n0)
    assert dx == 0 and dy == 0, (alpha, n0, dx, dy)
    if F is not None and F.ctx is not None:
        assert F.log_coefficient(n0, alpha).is_neg_inf
    return n0


@dataclass(frozen=True)
class RadiusVerdict:
    kind: str  # "zero" | "finite" | "infinite" | "inconclusive"
    radius: arb | None = None
    n0: int | None = None
    rho_hat: arb | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def positive(self):
        return self.kind in ("finite", "infinite")


def _window_max(rhos, lo, hi):
    best = None
    for n in range(lo, hi + 1):
        r = rhos[n]
        if r is None:
            continue
        if best is None or float(r.mid()) > float(best.mid()):
            best = r
    return best


def radius_from_logs(logs, window=None, blowup=BLOWUP_RHO):
    """Cauchy-Hadamard verdict from log|f_n|, n = 0..N.

    With rho_n = log|f_n| / n, compares the maxima m1, m2 of rho over the two
    trailing windows.  The growth rate s = (m2 - m1)/log(c2/c1) (c the window
    centres) separates super-exponential growth (s >= 1/2, e.g. n^n), a finite
    limit (|s| <= 1/4) and super-exponential decay (s <= -1/2, e.g. 1/n!).
    A trailing run of exact zeros at least one window long gives Infinite
    with its start index n0.
    """
    N = len(logs) - 1
    w = window or max(2, N // 3)
    if N < 2 * w:
        raise ValueError(f"need N >= 2*window (N={N}, window={w})")
    nonzero = [n for n in range(1, N + 1) if not logs[n].is_neg_inf]
    last = nonzero[-1] if nonzero else 0
    if N - last >= w:
        n0 = last + 1
        return RadiusVerdict("infinite", n0=n0, diagnostics={"reason": "trailing zeros", "n0": n0})
    rhos = [None] + [None if lg.is_neg_inf else lg.value / n for n, lg in enumerate(logs[1:], 1)]
    lo1, hi1 = N - 2 * w + 1, N - w
    lo2, hi2 = N - w + 1, N
    m1, m2 = _window_max(rhos, lo1, hi1), _window_max(rhos, lo2, hi2)
    if m1 is None or m2 is None:
        return RadiusVerdict("inconclusive", diagnostics={"reason": "empty window"})
    c1, c2 = (lo1 + hi1) / 2, (lo2 + hi2) / 2
    f1, f2 = float(m1.mid()), float(m2.mid())
    slope = (f2 - f1) / math.log(c2 / c1)
    diag = {"m1": f1, "m2": f2, "slope": slope, "window": w, "N": N}
    if (f2 > blowup and f2 > f1) or slope >= SUPER_SLOPE:
        diag["note"] = (
            "super-exponential growth; finite N cannot separate radius 0 "
            f"from radius < exp(-{blowup:g})"
        )
        return RadiusVerdict("zero", radius=arb(0), rho_hat=m2, diagnostics=diag)
    if slope <= -SUPER_SLOPE:
        return RadiusVerdict("infinite", rho_hat=m2, diagnostics=diag)
    if abs(slope) <= FINITE_SLOPE:
        return RadiusVerdict("finite", radius=(-m2).exp(), rho_hat=m2, diagnostics=diag)
    return RadiusVerdict("inconclusive", rho_hat=m2, diagnostics=diag)


def radius_estimate(F, alpha, N, window=None, budget=PrecisionBudget(), blowup=BLOWUP_RHO):
    logs = [F.log_coefficient(n, alpha, budget) for n in range(N + 1)]
    return radius_from_logs(logs, window, blowup)


# ---------------------------------------------------------------------------
# divergence off Q tau0 + Q


@dataclass(frozen=True)
class ChainCertificate:
    n: int
    coord: str  # "x" or "y"
    d_coord: arb  # |d(n! coord)|
    threshold: Fraction
    links: dict  # name -> bool, all True when returned
    lower_bound: arb  # n log n + log(c M / (2(n+1)))
    log_abs_fn: arb  # independently reduced log|f_n(alpha)|

    @property
    def dominated(self):
        return bool(self.lower_bound <= self.log_abs_fn)


def _certify_one(ctx, alpha, coord, n, cbound, bits):
    ex, dx, ey, dy = _reduced_coords(alpha, n, PrecisionBudget(bits=max(bits, 64)))
    tau = ctx.tau
    dxb, dyb = to_ball(dx), to_ball(dy)
    d = dxb * tau + dyb
    c = cbound.c
    M = ctx.metric_constant()
    dc = abs(dxb if coord == "x" else dyb)
    thr = Fraction(1, 2 * (n + 1))
    im = frac_ball(ctx.tau_im)

    links = {}
    half = arb(0.5)
    links["in_cell"] = bool(abs(dxb) <= half and abs(dyb) <= half)
    # |theta(n! alpha)| = exp(pi (a^2 + 2 a dx) Im tau) |theta(d)| >= |theta(d)|
    expo = reduction_exponent(ex, dx, ctx)
    links["modulus_reduction"] = bool(expo >= 0)
    # |theta(d)| >= c |d|
    theta_d = abs(theta11_direct(d, tau, bits))
    links["cell_constant"] = bool(theta_d >= c * abs(d))
    # |d| >= M |d_coord|, through |d|^2 - M^2 dx^2 = (Re d)^2 + (Im tau)^2 (1 - mu^2) dx^2
    # with mu = min(1, 1/|tau|) (and the conjugate form for y)
    t2 = ctx.abs_tau_sq
    if coord == "x":
        mu2 = Fraction(1) if t2 <= 1 else 1 / t2
        slack = square(d.real) + im * im * frac_ball(1 - mu2) * square(dxb)
    else:
        nu = Fraction(0) if t2 >= 1 else 1 - t2
        slack = square((tau.conjugate() * d).real) + im * im * frac_ball(nu) * square(dyb)
    links["metric"] = bool(slack >= 0)
    links["witness"] = bool(dc >= frac_ball(thr))
    lower = n * arb(n).log() + (c * M / (2 * (n + 1))).log()
    lg = log_abs_theta_reduced(ex, dx, dy, ctx, bits)
    logf = lg.value + n * arb(n).log()
    if not all(links.values()):
        failed = [k for k, v in links.items() if not v]
        raise _LinkIndeterminate(failed)
    cert = ChainCertificate(n, coord, dc, thr, links, lower, logf)
    if not cert.dominated:
        raise _LinkIndeterminate(["dominance"])
    return cert


class _LinkIndeterminate(EscalatePrecision):
    def __init__(self, links):
        self.links = links
        super().__init__(",".join(links))


def divergence_certificate(F, alpha, n_max, budget=PrecisionBudget(), c_level=5):
    """Certify |f_n(alpha)| >= n^n c M / (2(n+1)) at every witness n <= n_max."""
    alpha = alpha if isinstance(alpha, ExactPoint) else ExactPoint(*alpha)
    if alpha.is_rational:
        raise RationalPoint(f"{alpha} lies in Q tau0 + Q; the series converges there")
    ctx = F.ctx if F is not None and F.ctx is not None else ThetaContext()
    coord = "x" if not alpha.x.is_rational else "y"
    seed = alpha.x if coord == "x" else alpha.y
    cbound = c_constant(ctx, c_level)
    witnesses = witness_search(seed, n_max, budget)
    out = []
    for wit in witnesses:
        try:
            out.append(
                with_restarts(
                    lambda bits: _certify_one(ctx, alpha, coord, wit.n, cbound, bits),
                    budget,
                    start_bits=factorial_bits(wit.n),
                )
            )
        except PrecisionExhausted as exc:
            link = getattr(exc.__cause__, "links", None)
            raise CertificationFailed(wit.n, link) from exc
    return out


# ---------------------------------------------------------------------------
# region scans


@dataclass(frozen=True)
class ScanRow:
    x: ExactReal
    y: ExactReal
    verdict: str
    n0: int | None
    rho_hat: arb | None
    witness_count: int

    def csv_fields(self):
        return [
            fmt_ball(self.x),
            fmt_ball(self.y),
            self.verdict,
            "" if self.n0 is None else str(self.n0),
            "" if self.rho_hat is None else fmt_ball(self.rho_hat),
            str(self.witness_count),
        ]


SCAN_HEADER = ["x", "y", "verdict", "n0_or_blank", "rho_hat", "witness_count"]


def grid_nodes(lo, hi, res):
    if res < 2:
        raise ValueError("resolution must be >= 2 per axis")
    lo = lo if isinstance(lo, ExactReal) else ExactReal(lo)
    hi = hi if isinstance(hi, ExactReal) else ExactReal(hi)
    step = (hi - lo) / (res - 1)
    return [lo + step * i for i in range(res)]


def scan_point(F, alpha, N, window=None, budget=PrecisionBudget()):
    if alpha.is_rational:
        n0 = rational_termination(F, alpha)
        return ScanRow(alpha.x, alpha.y, "infinite", n0, None, 0)
    v = radius_estimate(F, alpha, N, window, budget)
    seed = alpha.x if not alpha.x.is_rational else alpha.y
    wc = len(witness_search(seed, N, budget))
    return ScanRow(alpha.x, alpha.y, v.kind, v.n0, v.rho_hat, wc)


def _scan_task(args):
    # flint balls do not pickle; ship rho_hat as a decimal string
    F, alpha, N, window, budget = args
    row = scan_point(F, alpha, N, window, budget)
    rho = None if row.rho_hat is None else row.rho_hat.str(40, radius=True, more=True)
    return (row.x, row.y, row.verdict, row.n0, rho, row.witness_count)


def _unpack(t):
    x, y, verdict, n0, rho, wc = t
    return ScanRow(x, y, verdict, n0, None if rho is None else arb(rho), wc)


def scan_grid(F, region, resolution, N, window=None, budget=PrecisionBudget(), workers=1):
    """One row per grid node, rows ordered by y then x (row-major).

    ``region`` is ``(x0, x1, y0, y1)`` in lattice coordinates; ``resolution``
    is an int or an ``(rx, ry)`` pair.
    """
    x0, x1, y0, y1 = region
    rx, ry = (resolution, resolution) if isinstance(resolution, int) else resolution
    xs, ys = grid_nodes(x0, x1, rx), grid_nodes(y0, y1, ry)
    points = [ExactPoint(x, y) for y in ys for x in xs]
    tasks = [(F, p, N, window, budget) for p in points]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return [_unpack(t) for t in pool.map(_scan_task, tasks)]
    return [_unpack(_scan_task(t)) for t in tasks]


def write_scan_csv(rows, fh):
    import csv

    wr = csv.writer(fh, lineterminator="\n")
    wr.writerow(SCAN_HEADER)
    for r in rows:
        wr.writerow(r.csv_fields())
