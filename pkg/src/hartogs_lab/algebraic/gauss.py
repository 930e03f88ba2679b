"""Exact arithmetic over Q(i): scalars, polynomials in z, rational functions.

Polynomials keep their real and imaginary parts as two ``fmpq_poly`` so that
products run in C; real-only inputs (the common case) take the plain
``fmpq_poly`` paths for division and gcd.
"""

from __future__ import annotations

from fractions import Fraction

from flint import acb, fmpq, fmpq_poly

from ..numeric import frac_ball


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, fmpq):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


def _fq(x):
    x = _frac(x)
    return fmpq(x.numerator, x.denominator)


class GaussQ:
    """Gaussian rational re + im*i."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussQ):
            re, im = re.re, re.im
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, GaussQ) else cls(x)

    @staticmethod
    def _peer(x):
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, (int, Fraction, fmpq)):
            return GaussQ(x)
        return None

    def __add__(self, o):
        o = GaussQ._peer(o)
        if o is None:
            return NotImplemented
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussQ._peer(o)
        if o is None:
            return NotImplemented
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussQ.coerce(o) - self

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __mul__(self, o):
        o = GaussQ._peer(o)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return GaussQ(self.re * o.re)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, o):
        o = GaussQ._peer(o)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("GaussQ division by zero")
        num = self * o.conjugate()
        return GaussQ(num.re / n, num.im / n)

    def __rtruediv__(self, o):
        return GaussQ.coerce(o) / self

    def __pow__(self, k):
        out = GaussQ(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.im == 0 and self.re == o
        if not isinstance(o, GaussQ):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def to_acb(self):
        return acb(frac_ball(self.re), frac_ball(self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = "i" if abs(self.im) == 1 else f"{abs(self.im)}i"
        if not self.re:
            return ("-" if self.im < 0 else "") + im
        return f"{self.re}{'-' if self.im < 0 else '+'}{im}"

    def __repr__(self):
        return f"GaussQ({self})"


def parse_gauss(text):
    """Inverse of ``str(GaussQ)``: '3', '-1/2', '2i', '1/3-4i', '-i'."""
    t = text.strip()
    if t.endswith("i"):
        body = t[:-1]
        # split at the last sign that is not leading
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-":
                re_part, im_part = body[:k], body[k:]
                break
        else:
            re_part, im_part = "0", body
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return GaussQ(Fraction(re_part), Fraction(im_part))
    return GaussQ(Fraction(t))


def _poly(coeffs):
    return fmpq_poly([_fq(c) for c in coeffs]) if coeffs else fmpq_poly()


def _coeff_list(p):
    return [_frac(c) for c in p.coeffs()]


class GaussPoly:
    """Univariate polynomial in z with Q(i) coefficients."""

    __slots__ = ("re", "im")

    def __init__(self, re=None, im=None):
        self.re = re if re is not None else fmpq_poly()
        self.im = im if im is not None else fmpq_poly()

    @classmethod
    def from_coeffs(cls, coeffs):
        coeffs = [GaussQ.coerce(c) for c in coeffs]
        return cls(_poly([c.re for c in coeffs]), _poly([c.im for c in coeffs]))

    @classmethod
    def const(cls, c):
        return cls.from_coeffs([c])

    @classmethod
    def gen(cls):
        return cls(fmpq_poly([0, 1]))

    def coeffs(self):
        n = self.degree() + 1
        re, im = _coeff_list(self.re), _coeff_list(self.im)
        re += [Fraction(0)] * (n - len(re))
        im += [Fraction(0)] * (n - len(im))
        return [GaussQ(a, b) for a, b in zip(re, im)]

    def degree(self):
        return max(self.re.degree(), self.im.degree())

    def is_zero(self):
        return self.re.is_zero() and self.im.is_zero()

    def is_real(self):
        return self.im.is_zero()

    def is_one(self):
        return self.im.is_zero() and self.re.is_one()

    def lc(self):
        d = self.degree()
        return GaussQ(_frac(self.re[d]), _frac(self.im[d]))

    def __add__(self, o):
        o = _as_poly(o)
        return GaussPoly(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _as_poly(o)
        return GaussPoly(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return _as_poly(o) - self

    def __neg__(self):
        return GaussPoly(-self.re, -self.im)

    def __mul__(self, o):
        o = _as_poly(o)
        if self.im.is_zero() and o.im.is_zero():
            return GaussPoly(self.re * o.re)
        if self.im.is_zero():
            return GaussPoly(self.re * o.re, self.re * o.im)
        if o.im.is_zero():
            return GaussPoly(self.re * o.re, self.im * o.re)
        return GaussPoly(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def scale(self, c):
        c = GaussQ.coerce(c)
        cr, ci = _fq(c.re), _fq(c.im)
        return GaussPoly(self.re * cr - self.im * ci, self.re * ci + self.im * cr)

    def shift(self, k):
        return GaussPoly(self.re.left_shift(k), self.im.left_shift(k))

    def __pow__(self, k):
        out = GaussPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, o):
        o = _as_poly(o)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_real() and o.is_real():
            q, r = divmod(self.re, o.re)
            return GaussPoly(q), GaussPoly(r)
        q, r = GaussPoly(), self
        dlc = o.lc()
        dd = o.degree()
        while not r.is_zero() and r.degree() >= dd:
            c = r.lc() / dlc
            k = r.degree() - dd
            q = q + GaussPoly.const(c).shift(k)
            r = r - o.scale(c).shift(k)
        return q, r

    def __floordiv__(self, o):
        return divmod(self, o)[0]

    def __mod__(self, o):
        return divmod(self, o)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(GaussQ(1) / self.lc())

    def gcd(self, o):
        o = _as_poly(o)
        if self.is_real() and o.is_real():
            return GaussPoly(self.re.gcd(o.re))
        a, b = self, o
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self):
        return GaussPoly(self.re.derivative(), self.im.derivative())

    def __call__(self, v):
        out = None
        for c in reversed(self.coeffs()):
            term = c.to_acb() if isinstance(v, acb) else c
            out = term if out is None else out * v + term
        if out is None:
            return acb(0) if isinstance(v, acb) else GaussQ(0)
        return out

    def __eq__(self, o):
        if not isinstance(o, GaussPoly):
            try:
                o = _as_poly(o)
            except TypeError:
                return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((str(self.re), str(self.im)))

    def __repr__(self):
        return f"GaussPoly({self.coeffs()})"


def _as_poly(x):
    if isinstance(x, GaussPoly):
        return x
    if isinstance(x, (int, Fraction, GaussQ)):
        return GaussPoly.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to GaussPoly")


class RatFunc:
    """num/den in Q(i)(z), gcd-reduced with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        num = _as_poly(num)
        den = GaussPoly.const(1) if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced and not den.is_one():
            g = num.gcd(den)
            if not g.is_one() and not g.is_zero():
                num, den = num // g, den // g
            lc = den.lc()
            if lc != 1:
                inv = GaussQ(1) / lc
                num, den = num.scale(inv), den.scale(inv)
        if num.is_zero():
            den = GaussPoly.const(1)
        self.num, self.den = num, den

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, RatFunc) else cls(x, _reduced=True)

    def is_poly(self):
        return self.den.is_one()

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, o):
        o = RatFunc.coerce(o)
        if self.is_poly() and o.is_poly():
            return RatFunc(self.num + o.num, _reduced=True)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, o):
        return self + (-RatFunc.coerce(o))

    def __rsub__(self, o):
        return RatFunc.coerce(o) - self

    def __mul__(self, o):
        o = RatFunc.coerce(o)
        if self.is_poly() and o.is_poly():
            return RatFunc(self.num * o.num, _reduced=True)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = RatFunc.coerce(o)
        if o.is_zero():
            raise ZeroDivisionError("RatFunc division by zero")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o):
        return RatFunc.coerce(o) / self

    def __eq__(self, o):
        if not isinstance(o, RatFunc):
            try:
                o = RatFunc.coerce(o)
            except TypeError:
                return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, v):
        if isinstance(v, acb):
            d = self.den(v)
            if d.contains(0):
                from ..errors import DivisorStraddlesZero

                raise DivisorStraddlesZero(f"denominator vanishes near {v}")
            return self.num(v) / d
        return self.num(v) / self.den(v)

    def __repr__(self):
        if self.is_poly():
            return f"RatFunc({self.num.coeffs()})"
        return f"RatFunc({self.num.coeffs()} / {self.den.coeffs()})"
