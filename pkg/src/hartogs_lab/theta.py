"""The odd theta function theta11 with rigorous enclosures.

    theta11(z; tau) = sum_{n in Z + 1/2} exp(pi i (n^2 tau + 2 n (z + 1/2)))

Direct summation carries an explicit geometric tail bound.  Arguments far
from the fundamental cell are handled in the log domain by lattice reduction
(the modulus-level quasi-periodicity)

    |theta11(z)| = exp(pi (a^2 + 2 a dx) Im tau) |theta11(d)|,
    z = a tau + b + d,  d = dx tau + dy,

with the big integer ``a`` squared exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint
from flint import acb, arb, fmpq, fmpz

from .diophantine import lattice_reduce, to_ball
from .errors import CutoffOverflow, LogOfNonpositive, NonpositiveImTau
from .numeric import PrecisionBudget, frac_ball, is_exact_zero, working_precision

MAX_TERMS = 4000
LN2 = math.log(2)


@dataclass(frozen=True)
class ThetaContext:
    """A fixed tau0 in the upper half plane, stored exactly.

    ``tau`` re-derives the ball at whatever precision is current, so restarts
    never reuse a low-precision value.
    """

    tau_re: Fraction = Fraction(0)
    tau_im: Fraction = Fraction(1)
    budget: PrecisionBudget = field(default_factory=PrecisionBudget)

    def __post_init__(self):
        object.__setattr__(self, "tau_re", Fraction(self.tau_re))
        object.__setattr__(self, "tau_im", Fraction(self.tau_im))
        if self.tau_im <= 0:
            raise NonpositiveImTau(f"Im tau0 = {self.tau_im} <= 0")

    @property
    def tau(self):
        return acb(frac_ball(self.tau_re), frac_ball(self.tau_im))

    @property
    def abs_tau_sq(self):
        return self.tau_re**2 + self.tau_im**2

    def metric_constant(self):
        """M = Im(tau0) * min(1, 1/|tau0|), so that |z| >= M max(|x(z)|, |y(z)|)."""
        im = frac_ball(self.tau_im)
        if self.abs_tau_sq <= 1:
            return im
        return im / frac_ball(self.abs_tau_sq).sqrt()

    def key(self):
        return (self.tau_re, self.tau_im)


@dataclass(frozen=True)
class LogMagnitude:
    """log|value| as a ball; ``value is None`` encodes log 0 = -inf."""

    value: arb | None

    @property
    def is_neg_inf(self):
        return self.value is None

    def __repr__(self):
        return "LogMagnitude(-inf)" if self.value is None else f"LogMagnitude({self.value})"


NEG_INF = LogMagnitude(None)


def _tail_bound(n1, s_lo, Y, power=0):
    """Bound sum_{|n| >= n1, n in Z+1/2} |n|^power exp(-pi (n^2 s - 2|n| Y)).

    Returns an arb upper bound, or None when the tail is not yet geometric.
    """
    with working_precision(64):
        n1b = frac_ball(n1)
        s, y = arb(s_lo), arb(Y)
        expo = (2 * n1b + 1) * s - 2 * y
        if not expo > 0:
            return None
        q = (-arb.pi() * expo).exp()
        if power:
            q = q * ((1 + 1 / n1b) ** power)
        if not q < 1:
            return None
        lead = n1b**power * (-arb.pi() * (n1b * n1b * s - 2 * n1b * y)).exp()
        return (2 * lead / (1 - q)).upper()


def _cutoff(s_lo, Y, bits, power=0):
    """Number N of half-integers kept on each side (|n| <= N - 1/2)."""
    # peak of -(n^2 s - 2nY) sits at n = Y/s
    peak = math.pi * Y * Y / s_lo
    target = peak - (bits + 10) * LN2
    N = max(1, int(Y / s_lo) + 1)
    while True:
        n1 = N + 0.5
        val = -math.pi * (n1 * n1 * s_lo - 2 * n1 * Y) + power * math.log(n1)
        if val < target and (2 * n1 + 1) * s_lo > 2 * Y + 1:
            return N
        N += 1
        if N > MAX_TERMS:
            raise CutoffOverflow(
                f"direct theta summation needs more than {MAX_TERMS} terms "
                f"(|Im z| ~ {Y:.3g}); use the lattice-reduced evaluation"
            )


def _im_bounds(z, tau):
    s_lo = float(tau.imag.lower())
    Y = float(abs(z.imag).upper())
    if not s_lo > 0:
        raise NonpositiveImTau(f"Im tau = {tau.imag}")
    return s_lo, Y


def theta11_direct(z, tau, bits=None, deriv=0):
    """Enclosure of theta11(z; tau) (or its z-derivative, ``deriv=1``) by
    truncated summation plus a geometric tail bound."""
    z, tau = acb(z), acb(tau)
    bits = bits or flint.ctx.prec
    s_lo, Y = _im_bounds(z, tau)
    N = _cutoff(s_lo, Y, bits, power=deriv)
    guard = int(math.pi * Y * Y / s_lo / LN2) + 16
    with working_precision(bits + guard):
        zh = z + arb(0.5)
        two_pi_i = acb(0, 2 * arb.pi())
        total = acb(0)
        for m in range(-N, N):
            n = fmpq(2 * m + 1, 2)
            term = (n * n * tau + 2 * n * zh).exp_pi_i()
            if deriv:
                term *= two_pi_i * n
            total += term
        tail = _tail_bound(N + Fraction(1, 2), s_lo, Y, power=deriv)
        if tail is None:  # pragma: no cover - _cutoff guarantees a geometric tail
            raise CutoffOverflow("tail not geometric")
        if deriv:
            tail = (2 * arb.pi() * tail).upper()
        total += acb(arb(0, tail), arb(0, tail))
    return +total


def _coef(k, deriv):
    # Taylor coefficients of (e^u - 1)/u  and of its u-derivative
    if deriv == 0:
        return 1 / arb(k + 1).gamma() / (k + 1)
    return arb(k + 1) / arb(k + 3).gamma()


def _exprel(u, deriv=0):
    """Enclosure of E(u) = (e^u - 1)/u (or E'(u)), valid for balls containing 0."""
    if not u.contains(0) and u.abs_lower() >= 0.5:
        if deriv == 0:
            return u.expm1() / u
        return (u.exp() * (u - 1) + 1) / (u * u)
    r = float(u.abs_upper())
    prec = flint.ctx.prec
    # coefficient ratios are <= 1/(K+1) beyond K, so the tail is geometric
    K = 1
    while True:
        lg = K * math.log(max(r, 1e-300)) - math.lgamma(K + 2) + math.log(K + 1)
        if K + 1 > 2 * r and lg < -(prec + 10) * LN2:
            break
        K += 1
    total, power = acb(0), acb(1)
    for k in range(K):
        total += power * _coef(k, deriv)
        power = power * u
    with working_precision(64):
        rb = arb(r)
        rem = (rb**K * _coef(K, deriv) / (1 - rb / (K + 1))).upper()
    return total + acb(arb(0, rem), arb(0, rem))


def _g_series(z, tau, bits, deriv=0):
    """g = theta11(z)/z as sum_n c_n (2 pi i n)^(1+deriv) E^(deriv)(2 pi i n z)."""
    s_lo, Y = _im_bounds(z, tau)
    N = _cutoff(s_lo, Y, bits, power=1 + deriv)
    with working_precision(bits + int(math.pi * Y * Y / s_lo / LN2) + 16):
        two_pi_i = acb(0, 2 * arb.pi())
        total = acb(0)
        for m in range(-N, N):
            n = fmpq(2 * m + 1, 2)
            c = (n * n * tau + n).exp_pi_i()
            w = two_pi_i * n
            total += c * w ** (1 + deriv) * _exprel(w * z, deriv)
        # |E(u)| <= e^{|Re u|},  |E'(u)| <= e^{|Re u|} / 2
        tail = _tail_bound(N + Fraction(1, 2), s_lo, Y, power=1 + deriv)
        tail = ((2 * arb.pi()) ** (1 + deriv) * tail).upper()
        total += acb(arb(0, tail), arb(0, tail))
    return +total


def g_at(z, ctx_or_tau, bits=None, deriv=0):
    """g(z) = theta11(z; tau0)/z with the removable singularity at 0 filled.

    ``deriv=1`` returns g'(z).
    """
    tau = ctx_or_tau.tau if isinstance(ctx_or_tau, ThetaContext) else acb(ctx_or_tau)
    z = acb(z)
    bits = bits or flint.ctx.prec
    if z.contains(0) or z.abs_upper() < 0.25:
        return _g_series(z, tau, bits, deriv)
    th = theta11_direct(z, tau, bits)
    if deriv == 0:
        return th / z
    return theta11_direct(z, tau, bits, deriv=1) / z - th / (z * z)


def _log_abs_theta_cell(d, tau, bits):
    """log|theta11(d)| for d near the fundamental cell, d != 0."""
    absd = abs(d)
    if not absd > 0:
        raise LogOfNonpositive(f"|d| = {absd} not certified positive")
    if absd.lower() > 0.0625:
        val = abs(theta11_direct(d, tau, bits))
        if not val > 0:
            raise LogOfNonpositive(f"|theta11(d)| = {val}")
        return val.log()
    gv = abs(_g_series(d, tau, bits))
    if not gv > 0:
        raise LogOfNonpositive(f"|g(d)| = {gv}")
    return gv.log() + absd.log()


def reduction_exponent(a, dx, ctx):
    """pi (a^2 + 2 a dx) Im tau0, with a^2 formed exactly."""
    a = int(a)
    core = arb(fmpz(a * a)) + 2 * a * to_ball(dx)
    return arb.pi() * core * frac_ball(ctx.tau_im)


def log_abs_theta_reduced(a, dx, dy, ctx, bits=None):
    """log|theta11(a tau0 + b + dx tau0 + dy)| given the lattice decomposition.

    ``b`` drops out at modulus level.  ``dx``/``dy`` may be exact Fractions;
    if both are exactly zero the point is on the lattice and the result is
    ``NEG_INF``.
    """
    if is_exact_zero(dx) and is_exact_zero(dy):
        return NEG_INF
    bits = bits or flint.ctx.prec
    tau = ctx.tau
    d = to_ball(dx) * tau + to_ball(dy)
    return LogMagnitude(reduction_exponent(a, dx, ctx) + _log_abs_theta_cell(d, tau, bits))


def log_abs_theta(z, ctx, bits=None):
    """log|theta11(z; tau0)| for arbitrary z through lattice reduction."""
    r = lattice_reduce(acb(z), ctx.tau)
    if r.d.is_zero():
        return NEG_INF
    return log_abs_theta_reduced(r.a, r.dx, r.dy, ctx, bits)


def quasi_period_phase(z, a, b, ctx, bits=None):
    """theta11(z) / (exp(pi i (a^2 tau + 2 a z)) theta11(z + a tau + b)).

    The classical statement of the functional equation carries no factor
    here, but direct summation gives (-1)^(a+b); only the modulus is used
    anywhere in this package.
    """
    tau = ctx.tau
    z = acb(z)
    lhs = theta11_direct(z, tau, bits)
    shifted = theta11_direct(z + a * tau + b, tau, bits)
    factor = (a * a * tau + 2 * a * z).exp_pi_i()
    return lhs / (factor * shifted)


# ---------------------------------------------------------------------------
# the positive constant c with |theta11(z)| >= c|z| on the fundamental cell


@dataclass(frozen=True)
class CBound:
    """Certified lower bound for min |g| over the fundamental cell."""

    c: arb  # exact ball (radius 0) at the certified lower value
    upper: float  # best sampled value of |g|; the true min lies in [c, upper]
    argmin: tuple  # (x, y) centre of the cell holding the best lower bound
    cell_halfwidth: float
    on_boundary: bool
    level: int
    cells: int

    @property
    def value(self):
        return float(self.c)


def _cell_ball(tau, xc, yc, h):
    return arb(xc, h) * tau + arb(yc, h)


def _cell_lower(tau, xc, yc, h, bits):
    """Lower bound of |g| on the cell |x - xc|, |y - yc| <= h.

    Mean-value form: |g(z)| >= |g(centre)| - sup_cell |g'| * |z - centre|,
    valid because the cell is convex.
    """
    centre = arb(xc) * tau + arb(yc)
    g0 = abs(g_at(centre, tau, bits)).lower()
    dg = abs(g_at(_cell_ball(tau, xc, yc, h), tau, bits, deriv=1)).upper()
    reach = arb(h) * (abs(tau) + 1)
    return float((g0 - dg * reach).lower())


def _point_abs(tau, xc, yc, bits):
    z = arb(xc) * tau + arb(yc)
    return float(abs(g_at(z, tau, bits)).upper())


@lru_cache(maxsize=32)
def _c_constant_cached(key, level, bits):
    tau_re, tau_im = key
    with working_precision(bits):
        tau = acb(frac_ball(tau_re), frac_ball(tau_im))
        base = 8
        h = 0.5 / base
        cells = [
            (-0.5 + (2 * i + 1) * h, -0.5 + (2 * j + 1) * h)
            for i in range(base)
            for j in range(base)
        ]
        best_upper = math.inf
        evaluated = 0
        for depth in range(level + 1):
            scored = []
            for xc, yc in cells:
                lo = _cell_lower(tau, xc, yc, h, bits)
                best_upper = min(best_upper, _point_abs(tau, xc, yc, bits))
                scored.append((lo, xc, yc))
            evaluated += len(scored)
            survivors = [t for t in scored if t[0] <= best_upper]
            if depth == level:
                break
            h /= 2
            cells = [
                (xc + sx * h, yc + sy * h)
                for _, xc, yc in survivors
                for sx in (-1, 1)
                for sy in (-1, 1)
            ]
        lo, xc, yc = min(survivors)
    on_boundary = (abs(xc) + h >= 0.5 - 1e-12) or (abs(yc) + h >= 0.5 - 1e-12)
    return CBound(
        c=arb(lo),
        upper=best_upper,
        argmin=(xc, yc),
        cell_halfwidth=h,
        on_boundary=on_boundary,
        level=level,
        cells=evaluated,
    )


def c_constant(ctx, level=5, bits=64):
    """Branch-and-bound certified lower bound c for min_Lambda |theta11(z)/z|.

    Level 0 evaluates an 8x8 grid of cells; each further level splits every
    cell whose lower bound could still hold the minimum.  A cell's bound is
    |g(centre)| - sup|g'| * (cell radius), with g' enclosed on the whole
    cell, so the returned ``c`` is a true lower bound, not a sample minimum.
    """
    out = _c_constant_cached(ctx.key(), level, bits)
    if not out.c > 0:
        raise LogOfNonpositive(f"c lower bound {out.c} is not positive; raise level")
    return out
