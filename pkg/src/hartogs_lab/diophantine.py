"""Nearest-integer calculus on exact reals.

``e(x)`` is the nearest integer with halves rounding *down*, ``d(x) = x - e(x)``
so that ``|d(x)| <= 1/2``.  The multiple factoradic expansion

    a_1 = e(x),      b_1 = d(x)
    a_k = e(k*b_{k-1}),  b_k = d(k*b_{k-1})

gives ``d(n! x) = b_n`` and ``e(n! x) = E_n`` with ``E_k = k*E_{k-1} + a_k``,
so ``n! x`` is never formed.  Rational seeds run in exact ``Fraction``
arithmetic; surd seeds run on balls with ``log2(n!) + 64`` guard bits since
each step multiplies the absolute error by ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import flint
from flint import acb, arb, fmpq

from .errors import NonpositiveImTau, RationalInput, TieStraddle
from .numeric import (
    ExactReal,
    PrecisionBudget,
    eval_exact,
    frac_ball,
    with_restarts,
)

HALF = Fraction(1, 2)
GUARD_BITS = 64


def nearest_int(x):
    """Return ``(e(x), d(x))``.

    Exact for ``int``/``Fraction``/``ExactReal`` input; for a ball, raises
    :class:`TieStraddle` when the ball overlaps a half-integer boundary.
    """
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        e = math.ceil(x - HALF)
        return e, x - e
    if isinstance(x, ExactReal):
        e = x.nearest()
        return e, x - e
    c = (x - arb(0.5)).ceil().unique_fmpz()
    if c is None:
        raise TieStraddle(f"{x} straddles a half-integer")
    e = int(c)
    return e, x - e


def factorial_bits(n):
    """Bits needed to carry d(n! x) with GUARD_BITS of absolute accuracy."""
    return int(math.lgamma(n + 1) / math.log(2)) + GUARD_BITS + 8


@dataclass(frozen=True)
class FactoradicState:
    k: int
    a: int
    b: object  # Fraction (rational seed) or arb (surd seed)
    E: int
    seed: ExactReal

    @property
    def exact(self):
        return isinstance(self.b, Fraction)


def _states_exact(q, K, seed):
    out = []
    a, b = nearest_int(q)
    E = a
    out.append(FactoradicState(1, a, b, E, seed))
    for k in range(2, K + 1):
        a, b = nearest_int(k * b)
        E = k * E + a
        out.append(FactoradicState(k, a, b, E, seed))
    return out


def _states_ball(x, K):
    b = eval_exact(x, flint.ctx.prec)
    a, b = nearest_int(b)
    E = a
    out = [FactoradicState(1, a, b, E, x)]
    for k in range(2, K + 1):
        a, b = nearest_int(k * b)
        E = k * E + a
        out.append(FactoradicState(k, a, b, E, x))
    return out


def factoradic_states(x, K, budget=PrecisionBudget()):
    """States ``k = 1..K`` of the multiple factoradic recurrence for ``x``."""
    if K < 1:
        raise ValueError("depth K must be >= 1")
    x = x if isinstance(x, ExactReal) else ExactReal(x)
    if x.is_rational:
        return _states_exact(x.a, K, x)
    mag_bits = max(abs(x.floor()), 1).bit_length()
    start = factorial_bits(K) + mag_bits
    return with_restarts(lambda bits: _states_ball(x, K), budget, start)


def factoradic_expand(x, K, budget=PrecisionBudget()):
    """Digits ``a_1..a_K`` and remainder ``b_K`` with x = sum a_k/k! + b_K/K!."""
    states = factoradic_states(x, K, budget)
    return [s.a for s in states], states[-1].b


def factoradic_partial_sum(digits):
    """Exact ``sum_{k} a_k / k!`` for digits a_1, a_2, ..."""
    total, fact = Fraction(0), 1
    for k, a in enumerate(digits, start=1):
        fact *= k
        total += Fraction(a, fact)
    return total


def d_factorial(x, n, budget=PrecisionBudget()):
    """``(d(n! x), e(n! x))`` via the factoradic recurrence."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = factoradic_states(x, n, budget)[-1]
    return s.b, s.E


@dataclass(frozen=True)
class Witness:
    n: int
    d_bound: arb  # enclosure of |d(n! x)|
    threshold: Fraction  # 1 / (2(n+1))


def witness_threshold(n):
    return Fraction(1, 2 * (n + 1))


def witness_search(x, n_max, budget=PrecisionBudget(), states=None):
    """Every n <= n_max whose certified |d(n! x)| is >= 1/(2(n+1)).

    The ball for |d(n! x)| must lie entirely above the threshold; indices
    where the ball overlaps it are left out (the caller may raise precision).
    """
    x = x if isinstance(x, ExactReal) else ExactReal(x)
    if x.is_rational:
        raise RationalInput(f"{x} is rational; no witnesses are guaranteed")
    if states is None:
        states = factoradic_states(x, n_max, budget)
    out = []
    for s in states[:n_max]:
        thr = witness_threshold(s.k)
        mag = abs(s.b)
        if mag >= frac_ball(thr):
            out.append(Witness(s.k, mag, thr))
    return out


# ---------------------------------------------------------------------------
# complex lattice coordinates


@dataclass(frozen=True)
class LatticeCoords:
    x: arb
    y: arb


@dataclass(frozen=True)
class ReducedPoint:
    """z = (a*tau + b) + d with d = dx*tau + dy in the fundamental cell."""

    a: int
    b: int
    dx: object
    dy: object
    d: acb


def lattice_coords(z, tau):
    """Real coordinates (x, y) with z = x*tau + y."""
    z, tau = acb(z), acb(tau)
    if not tau.imag > 0:
        raise NonpositiveImTau(f"Im tau0 = {tau.imag} is not certified positive")
    x = z.imag / tau.imag
    y = z.real - x * tau.real
    return LatticeCoords(x, y)


def lattice_reduce(z, tau):
    c = lattice_coords(z, tau)
    a, dx = nearest_int(c.x)
    b, dy = nearest_int(c.y)
    return ReducedPoint(a, b, dx, dy, dx * acb(tau) + dy)


def to_ball(v):
    """Fraction -> ball at current precision; balls pass through."""
    if isinstance(v, (int, Fraction)):
        return frac_ball(v)
    return v


def first_divisor_factorial(q):
    """Smallest n >= 1 with q | n!."""
    q = abs(int(q))
    n, f = 1, 1 % q if q else 0
    while f % q:
        n += 1
        f = f * n % q
    return n
