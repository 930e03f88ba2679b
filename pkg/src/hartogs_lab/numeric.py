"""Exact quadratic-surd reals and ball (midpoint-radius) arithmetic.

Balls are flint's ``arb`` (real) and ``acb`` (complex) types; this module adds
the exact seeds that feed them, the precision-restart driver and the checked
operations that raise instead of returning useless enclosures.

Working precision is flint's process-wide ``ctx.prec``.  Use
:func:`working_precision` rather than assigning it directly.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

import flint
from flint import acb, arb, fmpq, fmpz

from .errors import (
    DivisorStraddlesZero,
    EscalatePrecision,
    LogOfNonpositive,
    PrecisionExhausted,
)

Ball = arb
BallComplex = acb

MIN_BITS = 32


@contextmanager
def working_precision(bits):
    old = flint.ctx.prec
    flint.ctx.prec = max(int(bits), MIN_BITS)
    try:
        yield
    finally:
        flint.ctx.prec = old


@dataclass(frozen=True)
class PrecisionBudget:
    bits: int = 128
    max_restarts: int = 4

    def __post_init__(self):
        if self.bits < MIN_BITS:
            raise ValueError(f"bits must be >= {MIN_BITS}, got {self.bits}")
        if self.max_restarts < 0:
            raise ValueError("max_restarts must be nonnegative")

    def schedule(self, start=None):
        """Bit sizes tried by :func:`with_restarts`: start, 2*start, ..."""
        bits = max(self.bits, start or 0)
        return [bits << k for k in range(self.max_restarts + 1)]


def with_restarts(fn, budget, start_bits=None):
    """Call ``fn(bits)`` under increasing precision until it stops escalating.

    ``fn`` must re-derive everything from exact inputs; partial results from a
    failed attempt are discarded.
    """
    last = None
    for bits in budget.schedule(start_bits):
        try:
            with working_precision(bits):
                return fn(bits)
        except EscalatePrecision as exc:
            last = exc
    raise PrecisionExhausted(
        f"gave up after {budget.max_restarts} restarts "
        f"(max {budget.schedule(start_bits)[-1]} bits): {last}"
    ) from last


# ---------------------------------------------------------------------------
# exact reals


def _squarefree_split(m):
    """Return (s, r) with m = s*s*r and r squarefree."""
    s, r = 1, m
    p = 2
    while p * p <= r:
        while r % (p * p) == 0:
            r //= p * p
            s *= p
        p += 1 if p == 2 else 2
    return s, r


def _sign(q):
    return (q > 0) - (q < 0)


@total_ordering
class ExactReal:
    """``a + b*sqrt(m)`` with rational a, b and squarefree m >= 2.

    A plain rational has ``b == 0`` and ``m == 1``.  The constructor
    canonicalizes, so structural equality is value equality.
    """

    __slots__ = ("a", "b", "m")

    def __init__(self, a=0, b=0, m=1):
        a, b, m = Fraction(a), Fraction(b), int(m)
        if m < 0:
            raise ValueError("negative radicand")
        if b == 0 or m == 0:
            b, m = Fraction(0), 1
        else:
            s, m = _squarefree_split(m)
            b *= s
            if m == 1:
                a, b = a + b, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m)

    def __setattr__(self, name, value):
        raise AttributeError("ExactReal is immutable")

    def __reduce__(self):
        return (ExactReal, (self.a, self.b, self.m))

    @classmethod
    def sqrt(cls, k):
        return cls(0, 1, k)

    @property
    def is_rational(self):
        return self.b == 0

    def as_fraction(self):
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.a

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ExactReal):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactReal(other)
        return NotImplemented

    def _common_m(self, other):
        if self.m == 1:
            return other.m
        if other.m == 1 or other.m == self.m:
            return self.m
        raise ValueError(
            f"sqrt({self.m}) and sqrt({other.m}) mix outside quadratic surds"
        )

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self._common_m(other)
        return ExactReal(self.a + other.a, self.b + other.b, m)

    __radd__ = __add__

    def __neg__(self):
        return ExactReal(-self.a, -self.b, self.m)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self._common_m(other)
        a = self.a * other.a + self.b * other.b * m
        b = self.a * other.b + self.b * other.a
        return ExactReal(a, b, m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ExactReal):
            if not other.is_rational:
                # multiply by the conjugate
                conj = ExactReal(other.a, -other.b, other.m)
                return self * conj / (other * conj).as_fraction()
            other = other.a
        other = Fraction(other)
        if other == 0:
            raise ZeroDivisionError("ExactReal division by zero")
        return ExactReal(self.a / other, self.b / other, self.m)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out, base = ExactReal(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- exact order -------------------------------------------------------

    def sign(self):
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: |a| vs |b|*sqrt(m); equality impossible (irrational)
        return sa if self.a * self.a > self.b * self.b * self.m else sb

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self.a, self.b, self.m) == (other.a, other.b, other.m)

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() < 0

    def __hash__(self):
        return hash((self.a, self.b, self.m))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def floor(self):
        """Exact floor using integer square roots only."""
        if self.is_rational:
            return math.floor(self.a)
        den = math.lcm(self.a.denominator, self.b.denominator)
        N = int(self.a * den)
        B = int(self.b * den)
        r = math.isqrt(B * B * self.m)  # B*sqrt(m) is irrational
        num_floor = N + r if B > 0 else N - r - 1
        return num_floor // den

    def nearest(self):
        """Nearest integer with halves rounding down: ceil(x - 1/2)."""
        t = self - Fraction(1, 2)
        f = t.floor()
        return f if t == f else f + 1

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def __repr__(self):
        if self.is_rational:
            return f"ExactReal({self.a})"
        return f"ExactReal({self.a} + {self.b}*sqrt({self.m}))"

    def __str__(self):
        if self.is_rational:
            return str(self.a)
        b = self.b
        sgn = "+" if b > 0 else "-"
        head = "" if self.a == 0 else f"{self.a} {sgn} "
        if self.a == 0 and b < 0:
            head = "-"
        mag = abs(b)
        coef = "" if mag == 1 else f"{mag}*"
        return f"{head}{coef}sqrt({self.m})"


def is_rational(x):
    return x.is_rational


def frac_ball(q):
    """Ball for a rational at the current precision (exact when dyadic)."""
    q = Fraction(q)
    if q.denominator == 1:
        return arb(fmpz(q.numerator))
    return arb(fmpq(q.numerator, q.denominator))


def eval_exact(x, bits):
    """Enclose an :class:`ExactReal` with radius <= 2**(1-bits)*(1+|x|)."""
    x = x if isinstance(x, ExactReal) else ExactReal(x)
    if x.a == 0 and x.b == 0:
        return arb(0)
    # guard bits absorb cancellation between a and b*sqrt(m)
    mag = max(abs(x.a), abs(x.b) * x.m, 1)
    guard = 16 + int(math.log2(mag)) if mag > 1 else 16
    with working_precision(bits + guard):
        out = frac_ball(x.a)
        if x.b:
            out = out + frac_ball(x.b) * arb(x.m).sqrt()
    return out


def ball_of(x):
    """Coerce Fraction / int / ExactReal / arb into a ball at current precision."""
    if isinstance(x, arb):
        return x
    if isinstance(x, ExactReal):
        return eval_exact(x, flint.ctx.prec)
    return frac_ball(x)


def is_exact_zero(x):
    if isinstance(x, arb):
        return x.is_zero()
    if isinstance(x, ExactReal):
        return x == 0
    return x == 0


# ---------------------------------------------------------------------------
# checked ball operations


def checked_div(a, b):
    if isinstance(b, acb):
        if b.contains(0):
            raise DivisorStraddlesZero(f"divisor {b} contains 0")
    elif b.contains(0):
        raise DivisorStraddlesZero(f"divisor {b} contains 0")
    return a / b


def checked_log(a):
    if isinstance(a, acb):
        raise TypeError("checked_log takes a real ball")
    if not a > 0:
        raise LogOfNonpositive(f"log of {a}")
    return a.log()


def square(x):
    """Nonnegative enclosure of x*x (plain ``x*x`` can dip below zero)."""
    return (x * x).nonnegative_part()


_BINARY = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": checked_div,
}


def ball_arith(a, b=None, op="add"):
    """Dispatch one enclosure operation by name.

    Binary ops: add, sub, mul, div.  Unary ops (``b`` ignored): abs, log, exp.
    """
    if op in _BINARY:
        return _BINARY[op](a, b)
    if op == "abs":
        return abs(a)
    if op == "log":
        if isinstance(a, acb):
            if a.contains(0):
                raise LogOfNonpositive(f"log of {a}")
            return a.log()
        return checked_log(a)
    if op == "exp":
        return a.exp()
    raise ValueError(f"unknown op {op!r}")


def unit_exp(s):
    """exp(pi*i*s), computed without forming pi*s explicitly."""
    return acb(s).exp_pi_i()


def upper(x):
    """Upper endpoint of a real ball as a Python float (rounded up)."""
    return float(x.upper()) if math.isfinite(float(x.upper())) else math.inf


def fmt_ball(x, digits=17):
    """Midpoint of a real ball in decimal with ``digits`` significant digits."""
    if isinstance(x, (int, float, Fraction)):
        v = float(x)
    elif isinstance(x, ExactReal):
        v = float(x)
    else:
        if not x.is_finite():
            return "inf"
        v = float(x.mid())
        if not math.isfinite(v):
            return x.mid().str(digits, radius=False)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, f".{digits}g")
