"""Newton-Hensel lifting of a simple root of Phi(z, 0, X) to a power series in w.

Each step F <- F - Phi(F) / Phi_X(F) (truncated) doubles the number of
correct coefficients.  Exact mode works over Q(i)(z); numeric mode works on
complex balls at a fixed z0, with the seed certified by an interval Newton
test first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import flint
from flint import acb, acb_series, arb

from ..errors import (
    EscalatePrecision,
    NotARoot,
    RootNotCertified,
    SingularInitialRoot,
)
from ..numeric import PrecisionBudget, with_restarts
from ..theta import NEG_INF, LogMagnitude
from .gauss import GaussPoly, GaussQ, RatFunc
from .poly import BivarPoly, XPoly


@dataclass
class SeriesInW:
    """f_0..f_N of F = sum f_n w^n.

    ``mode`` is "exact" (RatFunc coefficients) or "numeric" (acb balls at ``at``).
    """

    order: int
    coeffs: list
    mode: str
    at: object = None
    meta: dict = field(default_factory=dict)

    def specialize(self, z0):
        if self.mode != "exact":
            raise ValueError("only exact lifts can be specialized")
        z0 = _as_acb(z0)
        return SeriesInW(self.order, [c(z0) for c in self.coeffs], "numeric", at=z0)

    def log_magnitudes(self):
        """log|f_n| per coefficient; a ball straddling 0 contributes its upper bound."""
        out = []
        for c in self.coeffs:
            c = _as_acb(c) if not isinstance(c, acb) else c
            if c.is_zero():
                out.append(NEG_INF)
                continue
            m = abs(c)
            if m > 0:
                out.append(LogMagnitude(m.log()))
            else:
                out.append(LogMagnitude(arb(m.upper()).log()))
        return out


def _as_acb(v):
    if isinstance(v, acb):
        return v
    if isinstance(v, GaussQ):
        return v.to_acb()
    if hasattr(v, "to_acb"):
        return v.to_acb()
    return acb(v)


# ---------------------------------------------------------------------------
# exact truncated series over RatFunc


def _pad(a, n, zero):
    return list(a[:n]) + [zero] * max(0, n - len(a))


def _smul(a, b, n):
    zero = RatFunc(0)
    nz_a = [(i, x) for i, x in enumerate(a[:n]) if not x.is_zero()]
    out = [zero] * n
    for j, y in enumerate(b[:n]):
        if y.is_zero():
            continue
        for i, x in nz_a:
            if i + j >= n:
                break
            out[i + j] = out[i + j] + x * y
    return out


def _sadd(a, b, n):
    zero = RatFunc(0)
    return [x + y for x, y in zip(_pad(a, n, zero), _pad(b, n, zero))]


def _sinv(a, n):
    g0 = RatFunc(1) / a[0]
    g = [g0]
    for k in range(1, n):
        acc = RatFunc(0)
        for i in range(1, min(k, len(a) - 1) + 1):
            if not a[i].is_zero():
                acc = acc + a[i] * g[k - i]
        g.append(-(acc * g0))
    return g


def _horner(series, F, n):
    out = _pad(series[0], n, RatFunc(0))
    for c in series[1:]:
        out = _sadd(_smul(out, F, n), c, n)
    return out


def _exact_coefficient_series(coeffs):
    # Phi_j(z, w) -> [Phi_j coefficient of w^k as RatFunc]
    return [[RatFunc(p, _reduced=True) for p in c.w_slices()] or [RatFunc(0)] for c in coeffs]


def _as_ratfunc(v):
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, GaussPoly):
        return RatFunc(v, _reduced=True)
    if isinstance(v, BivarPoly):
        if v.degree_w() > 0:
            raise ValueError("seed F0 must not depend on w")
        return RatFunc(v.w_slices()[0] if not v.is_zero() else GaussPoly(), _reduced=True)
    return RatFunc(GaussPoly.const(v), _reduced=True)


def hensel_lift_exact(phi, F0, N):
    """Exact branch F with F = F0 mod w and Phi(z, w, F) = 0 mod w^(N+1)."""
    if not isinstance(phi, XPoly):
        phi = XPoly(tuple(phi))
    if N < 0:
        raise ValueError("N must be >= 0")
    F0 = _as_ratfunc(F0)
    P = _exact_coefficient_series(phi.coeffs)
    dP = _exact_coefficient_series(phi.derivative_coeffs())
    if not _horner([[s[0]] for s in P], [F0], 1)[0].is_zero():
        raise NotARoot(f"Phi(z, 0, F0) is not identically zero for F0 = {F0}")
    if _horner([[s[0]] for s in dP], [F0], 1)[0].is_zero():
        raise SingularInitialRoot("dPhi/dX vanishes at the seed; the root is not simple")
    F, k, steps = [F0], 1, 0
    while k < N + 1:
        k2 = min(2 * k, N + 1)
        R = _horner(P, F, k2)
        # R = 0 mod w^k, so the correction needs 1/Phi_X only to order k2 - k
        D = _horner(dP, F, k2 - k)
        corr = _smul(R[k:], _sinv(D, k2 - k), k2 - k)
        F = _pad(F, k2, RatFunc(0))
        for i, c in enumerate(corr):
            F[k + i] = F[k + i] - c
        k, steps = k2, steps + 1
    return SeriesInW(N, F[: N + 1], "exact", meta={"newton_steps": steps})


def residual_exact(phi, F):
    """Phi(z, w, F) mod w^(N+1) as a list of RatFunc (all zero for a valid lift)."""
    n = F.order + 1
    return _horner(_exact_coefficient_series(phi.coeffs), F.coeffs, n)


# ---------------------------------------------------------------------------
# numeric mode


def _point_coeffs(phi_coeffs, z0, n):
    out = []
    for c in phi_coeffs:
        vals = [p(z0) for p in c.w_slices()][:n]
        out.append(vals + [acb(0)] * (n - len(vals)))
    return out


def _ball_horner(series, F, n):
    out = acb_series(series[0][:n], prec=n)
    for c in series[1:]:
        out = out * F + acb_series(c[:n], prec=n)
    return out


def _poly_at(cs, x):
    out = acb(0)
    for c in cs:
        out = out * x + c
    return out


class ResidualNotEnclosed(EscalatePrecision):
    pass


def _inflate(x, rel=2.0**-20):
    x = acb(x)
    r = max(float(x.rad()), rel * (1 + abs(complex(x.mid()))))
    return acb(arb(x.real.mid(), r), arb(x.imag.mid(), r))


def certify_root(cs, dcs, x0, max_iter=60):
    """Interval Newton on p (coefficients ``cs``, leading first).

    Returns a ball containing exactly one, simple, root of p, or raises
    RootNotCertified.  On a convex box N(X) = m - p(m)/p'(X) inside X
    implies a unique zero in X.
    """
    X = _inflate(x0)
    for attempt in range(8):
        dX = _poly_at(dcs, X)
        if not dX.contains(0):
            m = acb(X.mid())
            NX = m - _poly_at(cs, m) / dX
            if X.contains(NX) and NX.rad() < X.rad():
                break
        X = _inflate(X, 2.0 ** (-20 + 2 * (attempt + 1)))
    else:
        raise RootNotCertified(f"interval Newton failed to contract near {x0}")
    X = NX
    for _ in range(max_iter):
        dX = _poly_at(dcs, X)
        m = acb(X.mid())
        NX = m - _poly_at(cs, m) / dX
        if not X.contains(NX) or not NX.rad() < X.rad():
            break
        X = NX
    return X


def hensel_lift_numeric(phi, z0, x0, N, budget=PrecisionBudget()):
    """Ball enclosures of f_0(z0)..f_N(z0) for the branch through the root near x0."""
    if not isinstance(phi, XPoly):
        phi = XPoly(tuple(phi))
    dcoeffs = phi.derivative_coeffs()

    def attempt(bits):
        # flint truncates every series to ctx.cap terms
        old_cap, flint.ctx.cap = flint.ctx.cap, max(flint.ctx.cap, N + 1)
        try:
            return _lift_at(bits)
        finally:
            flint.ctx.cap = old_cap

    def _lift_at(bits):
        z = _exact_or_ball(z0)
        P = _point_coeffs(phi.coeffs, z, N + 1)
        dP = _point_coeffs(dcoeffs, z, N + 1)
        root = certify_root([s[0] for s in P], [s[0] for s in dP], x0)
        F, k = acb_series([root], prec=1), 1
        while k < N + 1:
            k = min(2 * k, N + 1)
            F = acb_series(F.coeffs(), prec=k)
            F = F - _ball_horner(P, F, k) / _ball_horner(dP, F, k)
        coeffs = list(F.coeffs()) + [acb(0)] * (N + 1 - len(F.coeffs()))
        res = _ball_horner(P, acb_series(coeffs, prec=N + 1), N + 1).coeffs()
        bad = [i for i, r in enumerate(res) if not (r.is_finite() and r.contains(0))]
        if bad or not all(c.is_finite() for c in coeffs):
            raise ResidualNotEnclosed(f"residual coefficient {bad[:1]} excludes 0")
        return SeriesInW(N, coeffs, "numeric", at=z, meta={"root": root, "bits": bits})

    start = budget.bits + int(N * math.log2(max(2.0, _mag(z0))) // 4)
    return with_restarts(attempt, budget, start)


def _mag(z0):
    try:
        return abs(complex(_as_acb(z0).mid()))
    except (TypeError, ValueError):
        return 1.0


def _exact_or_ball(z0):
    # GaussQ stays exact so Phi_j(z0, .) are exact rationals when possible
    if isinstance(z0, (GaussQ, acb)):
        return z0 if isinstance(z0, acb) else z0.to_acb()
    if isinstance(z0, complex):
        return acb(z0.real, z0.imag)
    return _as_acb(GaussQ.coerce(z0))


def root_seeds(phi, z0):
    """Simple roots of Phi(z0, 0, X) with certified enclosures (for seeding)."""
    from .roots import roots_univar

    z = _exact_or_ball(z0)
    cs = [c.at_z(z)[0] if c.degree_w() >= 0 else acb(0) for c in phi.coeffs]
    dcs = [c.at_z(z)[0] if c.degree_w() >= 0 else acb(0) for c in phi.derivative_coeffs()]
    out = []
    for enc in roots_univar(list(reversed(cs)), certify=True):
        if enc.multiplicity != 1:
            continue
        try:
            out.append(certify_root(cs, dcs, enc.ball()))
        except RootNotCertified:
            continue
    return out
