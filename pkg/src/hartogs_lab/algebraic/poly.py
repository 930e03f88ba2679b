"""Relations Phi(z, w, X) = sum_j Phi_j(z, w) X^(t-j) with Q(i)[z, w] coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import flint
from flint import acb

from ..errors import DegreeCapExceeded, DegreeTooSmall, NotMonic, ZeroLeadingCoefficient
from .gauss import GaussPoly, GaussQ

MONOMIAL_CAP = 10_000

# z, w and a formal i; results are reduced mod i^2 + 1 on the way back
_MCTX = flint.fmpq_mpoly_ctx.get(("z", "w", "I"), "lex")


def _fq(q):
    return flint.fmpq(q.numerator, q.denominator)


class BivarPoly:
    """Sparse polynomial in z, w: {(deg_z, deg_w): GaussQ}, zeros never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for k, c in (terms or {}).items():
            c = GaussQ.coerce(c)
            if c:
                i, j = k
                if i < 0 or j < 0:
                    raise ValueError(f"negative degree {k}")
                clean[(int(i), int(j))] = c
        if len(clean) > MONOMIAL_CAP:
            raise DegreeCapExceeded(f"{len(clean)} monomials exceed the cap {MONOMIAL_CAP}")
        self.terms = clean

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def z(cls):
        return cls({(1, 0): 1})

    @classmethod
    def w(cls):
        return cls({(0, 1): 1})

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, BivarPoly) else cls.const(x)

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0, 0): GaussQ(1)}

    def degree_z(self):
        return max((i for i, _ in self.terms), default=-1)

    def degree_w(self):
        return max((j for _, j in self.terms), default=-1)

    def __add__(self, o):
        o = BivarPoly.coerce(o)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out.get(k, GaussQ(0)) + c
        return BivarPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-BivarPoly.coerce(o))

    def __rsub__(self, o):
        return BivarPoly.coerce(o) - self

    def __mul__(self, o):
        o = BivarPoly.coerce(o)
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in o.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, GaussQ(0)) + c1 * c2
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out, base = BivarPoly.const(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        if not isinstance(o, BivarPoly):
            try:
                o = BivarPoly.coerce(o)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def w_slices(self):
        """Coefficients of w^j as polynomials in z, j = 0..deg_w."""
        buckets = [dict() for _ in range(self.degree_w() + 1)]
        for (i, j), c in self.terms.items():
            buckets[j][i] = c
        out = []
        for b in buckets:
            n = max(b, default=-1) + 1
            out.append(GaussPoly.from_coeffs([b.get(i, 0) for i in range(n)]))
        return out

    def at_z(self, z0):
        """Coefficients of w^j after z = z0 (GaussQ for exact z0, acb for balls)."""
        return [p(z0) for p in self.w_slices()]

    def __call__(self, z, w):
        ball = isinstance(z, acb) or isinstance(w, acb)
        total = acb(0) if ball else GaussQ(0)
        for (i, j), c in self.terms.items():
            cc = c.to_acb() if ball else c
            total = total + cc * z**i * w**j
        return total

    # flint round trip (i carried as a formal variable)

    def to_mpoly(self):
        d = {}
        for (i, j), c in self.terms.items():
            if c.re:
                d[(i, j, 0)] = _fq(c.re)
            if c.im:
                d[(i, j, 1)] = _fq(c.im)
        return _MCTX.from_dict(d) if d else _MCTX.from_dict({})

    @classmethod
    def from_mpoly(cls, p):
        out = {}
        for (i, j, e), c in p.to_dict().items():
            # i^e with e reduced mod 4
            unit = (GaussQ(1), GaussQ(0, 1), GaussQ(-1), GaussQ(0, -1))[e % 4]
            q = Fraction(int(c.p), int(c.q))
            out[(i, j)] = out.get((i, j), GaussQ(0)) + unit * q
        return cls(out)

    def __str__(self):
        return format_bivar(self)

    def __repr__(self):
        return f"BivarPoly({self})"


def _monomial(i, j):
    parts = []
    for name, e in (("z", i), ("w", j)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _coef_str(c):
    if c.im == 0:
        return str(c.re)
    if c.re == 0:
        return str(c)
    return f"({c})"


def format_bivar(p):
    """Canonical text; terms by descending (deg_z, deg_w)."""
    if p.is_zero():
        return "0"
    out = []
    for k in sorted(p.terms, reverse=True):
        c = p.terms[k]
        mono = _monomial(*k)
        neg = c.im == 0 and c.re < 0 or c.re == 0 and c.im < 0
        mag = -c if neg else c
        if not mono:
            body = str(mag) if mag.im == 0 or mag.re == 0 else f"({mag})"
        elif mag == 1:
            body = mono
        else:
            body = f"{_coef_str(mag)}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


@dataclass(frozen=True)
class XPoly:
    """Phi = sum_{j=0..t} coeffs[j] * X^(t-j), coeffs[0] = Phi_0 not identically 0."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(BivarPoly.coerce(c) for c in self.coeffs)
        if len(cs) < 2:
            raise DegreeTooSmall("relation needs degree t >= 1 in X")
        if cs[0].is_zero():
            raise ZeroLeadingCoefficient("Phi_0 is identically zero")
        object.__setattr__(self, "coeffs", cs)

    @property
    def t(self):
        return len(self.coeffs) - 1

    @property
    def is_monic(self):
        return self.coeffs[0].is_one()

    def derivative_coeffs(self):
        """dPhi/dX as a coefficient list (leading first, degree t-1)."""
        t = self.t
        return [self.coeffs[j] * (t - j) for j in range(t)]

    def __call__(self, z, w, X):
        out = None
        for c in self.coeffs:
            v = c(z, w)
            out = v if out is None else out * X + v
        return out

    def __str__(self):
        return format_xpoly(self)


def format_xpoly(phi):
    parts = []
    t = phi.t
    for j, c in enumerate(phi.coeffs):
        if c.is_zero():
            continue
        e = t - j
        xs = "" if e == 0 else ("X" if e == 1 else f"X^{e}")
        if not xs:
            parts.append(f"({c})")
        elif c.is_one():
            parts.append(xs)
        else:
            parts.append(f"({c})*{xs}")
    return " + ".join(parts)


@dataclass(frozen=True)
class Monicization:
    """Phi* together with the factor Phi_0 that maps branches: F* = Phi_0 * F."""

    relation: XPoly
    phi0: BivarPoly


def monicize(phi):
    """Phi*_j = Phi_j * Phi_0^(j-1), so Phi*(Phi_0 F) = Phi_0^(t-1) Phi(F)."""
    if not isinstance(phi, XPoly):
        phi = XPoly(tuple(phi))
    phi0 = phi.coeffs[0]
    if phi.is_monic:
        return Monicization(phi, phi0)
    out = [BivarPoly.const(1)]
    power = BivarPoly.const(1)
    for j in range(1, phi.t + 1):
        out.append(phi.coeffs[j] * power)
        power = power * phi0
    return Monicization(XPoly(tuple(out)), phi0)


def sylvester_matrix(a, b):
    """Sylvester matrix of two coefficient lists (leading first)."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    zero = a[0] * 0
    rows = []
    for r in range(n):
        rows.append([zero] * r + list(a) + [zero] * (size - m - 1 - r))
    for r in range(m):
        rows.append([zero] * r + list(b) + [zero] * (size - n - 1 - r))
    return rows


def bareiss_det(M):
    """Fraction-free determinant over an integral domain with exact ``//``."""
    M = [row[:] for row in M]
    n = len(M)
    sign, prev = 1, None
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return M[0][0] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                if prev is not None:
                    q, r = divmod(num, prev)
                    assert r == 0, "Bareiss division must be exact"
                    num = q
                M[i][j] = num
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det


def discriminant(phi):
    """(-1)^(t(t-1)/2) Res_X(Phi, dPhi/dX) for monic Phi, t >= 2.

    The Sylvester determinant runs over Q[z, w, i] with i formal (an integral
    domain, so Bareiss divisions are exact) and is reduced mod i^2 + 1 at the end.
    """
    if not isinstance(phi, XPoly):
        phi = XPoly(tuple(phi))
    if phi.t < 2:
        raise DegreeTooSmall(f"discriminant needs t >= 2, got t = {phi.t}")
    if not phi.is_monic:
        raise NotMonic("discriminant expects a monic relation; call monicize first")
    a = [c.to_mpoly() for c in phi.coeffs]
    b = [c.to_mpoly() for c in phi.derivative_coeffs()]
    res = bareiss_det(sylvester_matrix(a, b))
    t = phi.t
    if (t * (t - 1) // 2) % 2:
        res = -res
    return BivarPoly.from_mpoly(res)
