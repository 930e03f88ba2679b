import math
from decimal import Decimal, getcontext, localcontext
from fractions import Fraction

import pytest
from flint import acb
from hypothesis import given
from hypothesis import strategies as st

from hartogs_lab.diophantine import (
    d_factorial,
    factoradic_expand,
    factoradic_partial_sum,
    factoradic_states,
    first_divisor_factorial,
    lattice_coords,
    lattice_reduce,
    nearest_int,
    witness_search,
    witness_threshold,
)
from hartogs_lab.errors import NonpositiveImTau, RationalInput, TieStraddle
from hartogs_lab.numeric import ExactReal, frac_ball, working_precision

getcontext().prec = 60


def oracle_nearest_of_multiple(x: ExactReal, n: int):
    """e(n! x) from integer square roots only, and d(n! x) as a 60-digit decimal."""
    f = math.factorial(n)
    den = math.lcm(x.a.denominator, x.b.denominator)
    P = int(x.a * den) * f
    Q = int(x.b * den) * f
    # floor((2P + 2Q sqrt(m) - den) / (2 den)) + 1 = ceil(n! x - 1/2) for irrational x
    r = math.isqrt(4 * Q * Q * x.m)
    top = 2 * P - den + (r if Q > 0 else -r - 1)
    e = top // (2 * den) + 1
    with localcontext() as ctx:
        ctx.prec = len(str(abs(P) + abs(Q))) + 60
        v = (Decimal(P) + Decimal(Q) * Decimal(x.m).sqrt()) / Decimal(den) - e
    return e, +v


def test_spec_examples():
    digits, b = factoradic_expand(Fraction(1, 3), 4)
    assert digits == [0, 1, -1, 0] and b == 0
    digits, b = factoradic_expand(ExactReal.sqrt(2), 3)
    assert digits == [1, 1, -1]
    assert abs(float(b.mid()) - 0.48528137423857) < 1e-12
    d, E = d_factorial(ExactReal.sqrt(2), 2)
    assert E == 3 and abs(float(d.mid()) + 0.17157287525381) < 1e-12
    assert [w.n for w in witness_search(ExactReal.sqrt(2), 10)] == [1, 2, 3, 5, 6, 7, 8, 9, 10]


def test_ties_round_down():
    assert nearest_int(Fraction(1, 2)) == (0, Fraction(1, 2))
    assert nearest_int(Fraction(-1, 2)) == (-1, Fraction(1, 2))
    assert nearest_int(Fraction(5, 2)) == (2, Fraction(1, 2))


def test_ball_tie_straddle():
    from flint import arb

    with pytest.raises(TieStraddle):
        nearest_int(arb(0.5, 1e-10))


@pytest.mark.parametrize(
    "x",
    [ExactReal.sqrt(2), ExactReal.sqrt(3), ExactReal(Fraction(1, 2), Fraction(1, 2), 5),
     ExactReal(Fraction(-7, 3), Fraction(2, 5), 11)],
)
def test_recurrence_matches_isqrt_oracle(x):
    states = factoradic_states(x, 80)
    for s in states[::7] + [states[-1]]:
        e, v = oracle_nearest_of_multiple(x, s.k)
        assert s.E == e
        mid, rad = Decimal(float(s.b.mid())), Decimal(float(s.b.rad()))
        assert abs(mid - v) <= rad + Decimal(10) ** -15


@given(st.fractions(min_value=-50, max_value=50, max_denominator=400), st.integers(1, 25))
def test_rational_states_exact(q, n):
    for s in factoradic_states(q, n):
        assert s.E + s.b == math.factorial(s.k) * q
        assert -Fraction(1, 2) < s.b <= Fraction(1, 2)


@given(st.fractions(min_value=-5, max_value=5, max_denominator=60))
def test_reconstruction_rational(q):
    digits, b = factoradic_expand(q, 12)
    assert q - factoradic_partial_sum(digits) == b / math.factorial(12)


@given(st.integers(1, 2000))
def test_first_divisor_factorial_bruteforce(q):
    n = first_divisor_factorial(q)
    assert math.factorial(n) % q == 0
    assert n == 1 or math.factorial(n - 1) % q != 0


def test_witness_thresholds_and_rational_rejection():
    assert witness_threshold(3) == Fraction(1, 8)
    with pytest.raises(RationalInput):
        witness_search(Fraction(1, 3), 10)


def test_lattice_reduce_example():
    with working_precision(128):
        z = acb(frac_ball(Fraction(17, 5)), frac_ball(Fraction(11, 5)))
        r = lattice_reduce(z, acb(0, 1))
        assert (r.a, r.b) == (2, 3)
        assert r.d.overlaps(acb(frac_ball(Fraction(2, 5)), frac_ball(Fraction(1, 5))))


def test_lattice_coords_inverse():
    tau = acb(0.5, 0.8)
    c = lattice_coords(acb(1.25, 2.0), tau)
    assert (c.x * tau + c.y).overlaps(acb(1.25, 2.0))
    with pytest.raises(NonpositiveImTau):
        lattice_coords(acb(1, 1), acb(1, -1))


def test_high_depth_precision_holds():
    x = ExactReal.sqrt(7)
    states = factoradic_states(x, 300)
    e, v = oracle_nearest_of_multiple(x, 300)
    assert states[-1].E == e
    assert abs(Decimal(float(states[-1].b.mid())) - v) < Decimal(10) ** -12
