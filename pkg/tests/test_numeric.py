import math
import random
from decimal import Decimal, getcontext
from fractions import Fraction

import flint
import pytest
from flint import arb, fmpq
from hypothesis import given
from hypothesis import strategies as st

from hartogs_lab.errors import (
    DivisorStraddlesZero,
    EscalatePrecision,
    LogOfNonpositive,
    PrecisionExhausted,
)
from hartogs_lab.numeric import (
    ExactReal,
    PrecisionBudget,
    ball_arith,
    eval_exact,
    fmt_ball,
    frac_ball,
    square,
    with_restarts,
    working_precision,
)

getcontext().prec = 120

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=10_000)
radicands = st.sampled_from([2, 3, 5, 6, 7, 10, 11, 13])
surds = st.builds(lambda a, b, m: ExactReal(a, b, m), rationals, rationals, radicands)


def dec(x: ExactReal) -> Decimal:
    """Oracle value with 120 significant digits."""
    a = Decimal(x.a.numerator) / Decimal(x.a.denominator)
    b = Decimal(x.b.numerator) / Decimal(x.b.denominator)
    return a + b * Decimal(x.m).sqrt()


def test_canonical_forms():
    assert ExactReal.sqrt(4) == ExactReal(2)
    assert ExactReal.sqrt(4).is_rational
    r = ExactReal.sqrt(8)
    assert (r.a, r.b, r.m) == (0, 2, 2)
    assert ExactReal.sqrt(0) == 0
    assert str(ExactReal(Fraction(1, 2), Fraction(1, 2), 5)) == "1/2 + 1/2*sqrt(5)"


def test_mixed_radicands_rejected():
    with pytest.raises(ValueError):
        ExactReal.sqrt(2) + ExactReal.sqrt(3)


def test_immutable():
    x = ExactReal(1)
    with pytest.raises(AttributeError):
        x.a = 2


@given(surds, surds)
def test_field_identities(x, y):
    if x.m != y.m and not (x.is_rational or y.is_rational):
        return
    assert (x + y) - y == x
    assert x * y == y * x
    if y != 0:
        assert (x / y) * y == x


@given(surds)
def test_floor_and_sign_match_decimal_oracle(x):
    v = dec(x)
    assert x.floor() == math.floor(v)
    assert x.sign() == (v > 0) - (v < 0)
    n = x.nearest()
    assert n - Decimal("0.5") < v <= n + Decimal("0.5")


def test_sqrt2_against_rational_newton():
    # Newton x <- (x + 2/x)/2 gives brackets 2/x < sqrt(2) < x
    x = Fraction(3, 2)
    for _ in range(9):
        x = (x + 2 / x) / 2
    lo, hi = 2 / x, x
    assert hi - lo < Fraction(1, 10**300)
    for bits in (64, 256, 900):
        b = eval_exact(ExactReal.sqrt(2), bits)
        with working_precision(4000):
            assert b.lower() <= frac_ball(hi) and b.upper() >= frac_ball(lo)
        assert float(b.rad()) <= 2.0 ** (2 - bits) * 2


def test_ball_containment_random_ops():
    rng = random.Random(20240611)
    ops = ["add", "sub", "mul", "div"]
    for _ in range(10_000):
        a = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        b = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        op = rng.choice(ops)
        if op == "div" and b == 0:
            continue
        exact = {"add": a + b, "sub": a - b, "mul": a * b, "div": a / b if b else None}[op]
        with working_precision(53):
            got = ball_arith(frac_ball(a), frac_ball(b), op)
        # the oracle point itself must be resolved far below the 53-bit radius
        with working_precision(400):
            assert got.contains(frac_ball(exact)), (a, b, op)


def test_transcendental_containment_against_high_precision():
    rng = random.Random(7)
    for _ in range(500):
        q = Fraction(rng.randint(1, 10**5), rng.randint(1, 10**3))
        with working_precision(600):
            ref_log, ref_exp = frac_ball(q).log(), frac_ball(-q / 100).exp()
        with working_precision(53):
            lo = ball_arith(frac_ball(q), op="log")
            ex = ball_arith(frac_ball(-q / 100), op="exp")
        assert lo.contains(ref_log) and ex.contains(ref_exp)


@pytest.mark.parametrize("x", [ExactReal.sqrt(2), ExactReal(Fraction(1, 3), 5, 7), ExactReal(Fraction(-2, 3))])
def test_monotone_refinement(x):
    prev = None
    for bits in (32, 64, 128, 256, 512):
        b = eval_exact(x, bits)
        if prev is not None:
            assert b.rad() <= prev.rad()
            assert prev.contains(b) or prev.overlaps(b)
        prev = b


def test_checked_operations_raise():
    with pytest.raises(DivisorStraddlesZero):
        ball_arith(arb(1), arb(0, 1e-3), "div")
    with pytest.raises(LogOfNonpositive):
        ball_arith(arb(0, 0.5), op="log")
    assert square(arb(0, 1)).lower() >= 0


def test_with_restarts_escalates_then_succeeds():
    seen = []

    def fn(bits):
        seen.append(bits)
        if bits < 512:
            raise EscalatePrecision("need more")
        return flint.ctx.prec

    assert with_restarts(fn, PrecisionBudget(bits=128, max_restarts=4)) == 512
    assert seen == [128, 256, 512]


def test_with_restarts_exhausts():
    def fn(bits):
        raise DivisorStraddlesZero("never")

    with pytest.raises(PrecisionExhausted):
        with_restarts(fn, PrecisionBudget(bits=64, max_restarts=2))


def test_working_precision_restores():
    old = flint.ctx.prec
    with working_precision(300):
        assert flint.ctx.prec == 300
    assert flint.ctx.prec == old


def test_budget_validation():
    with pytest.raises(ValueError):
        PrecisionBudget(bits=8)
    assert PrecisionBudget(bits=100, max_restarts=2).schedule() == [100, 200, 400]


def test_fmt_ball_digits():
    assert fmt_ball(Fraction(1, 3)) == "0.33333333333333331"
    assert fmt_ball(arb(2)) == "2"
