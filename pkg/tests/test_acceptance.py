"""Acceptance criteria 1-8; criterion 9 (suite wall time) is reported by conftest.

Run with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
Each criterion prints one PASS/FAIL line in the terminal summary.
"""

import math
import random
import time
from fractions import Fraction

import pytest
from flint import acb, arb

import hartogs_lab.numeric as numeric
from hartogs_lab.algebraic import (
    BivarPoly,
    XPoly,
    hensel_lift_exact,
    hensel_lift_numeric,
    residual_exact,
    theorem1_consistency,
)
from hartogs_lab.algebraic.gauss import GaussPoly, RatFunc
from hartogs_lab.diophantine import (
    factoradic_expand,
    factoradic_partial_sum,
    factoradic_states,
    first_divisor_factorial,
    witness_threshold,
)
from hartogs_lab.hartogs import (
    ExactPoint,
    counterexample_series,
    divergence_certificate,
    radius_estimate,
    scan_grid,
)
from hartogs_lab.numeric import ExactReal, PrecisionBudget, frac_ball, working_precision
from hartogs_lab.theta import (
    ThetaContext,
    c_constant,
    log_abs_theta,
    quasi_period_phase,
    theta11_direct,
)

Z, W, ONE = BivarPoly.z(), BivarPoly.w(), BivarPoly.const(1)
SQRT_REL = XPoly((ONE, BivarPoly.const(0), -(ONE + Z * W)))
GOLDEN = ExactReal(Fraction(1, 2), Fraction(1, 2), 5)


@pytest.mark.criterion(1, "convergence dichotomy on a 7x7 rational grid and 6 surd points")
def test_criterion_1_dichotomy(criterion):
    t0 = time.perf_counter()
    F = counterexample_series()
    rows = scan_grid(F, (0, Fraction(1, 2), 0, Fraction(1, 2)), 7, 25)
    assert len(rows) == 49
    for row in rows:
        qx, qy = row.x.as_fraction().denominator, row.y.as_fraction().denominator
        assert max(qx, qy) <= 12
        expected = first_divisor_factorial(math.lcm(qx, qy))
        assert row.verdict == "infinite" and row.n0 == expected, (row.x, row.y)
        # the evaluated coefficients vanish from the same index on
        v = radius_estimate(F, ExactPoint(row.x, row.y), 25)
        assert v.kind == "infinite" and v.n0 == expected, (row.x, row.y, v)
    surd_pts = []
    for s in (ExactReal.sqrt(2), ExactReal.sqrt(3), GOLDEN):
        surd_pts += [ExactPoint(s, 0), ExactPoint(0, s)]
    kinds = [radius_estimate(F, p, 25).kind for p in surd_pts]
    assert kinds == ["zero"] * 6
    elapsed = time.perf_counter() - t0
    criterion(f"49/49 rational infinite with exact n0, 6/6 surd zero, {elapsed:.1f}s <= 60s")
    assert elapsed <= 60


@pytest.mark.criterion(2, "divergence certificate for sqrt(2) tau0, witnesses n <= 15")
def test_criterion_2_certificate(criterion, monkeypatch):
    seen = []
    real_wp = numeric.working_precision

    def spy(bits):
        seen.append(int(bits))
        return real_wp(bits)

    monkeypatch.setattr(numeric, "working_precision", spy)
    budget = PrecisionBudget(bits=128, max_restarts=5)  # schedule tops out at 4096
    assert budget.schedule()[-1] == 4096
    t0 = time.perf_counter()
    certs = divergence_certificate(counterexample_series(), ExactPoint(ExactReal.sqrt(2), 0), 15, budget)
    elapsed = time.perf_counter() - t0
    ns = [c.n for c in certs]
    assert ns, "no witnesses found"
    assert all(len(c.links) == 5 and all(c.links.values()) for c in certs)
    assert all(c.dominated for c in certs)
    # every witness n <= 15 from the exact digit criterion is covered
    states = factoradic_states(ExactReal.sqrt(2), 15)
    expected = [s.k for s in states if abs(s.b) >= frac_ball(witness_threshold(s.k))]
    assert ns == expected
    top = max(seen)
    criterion(f"{len(ns)} witnesses {ns}, all links certified, max {top} bits, {elapsed:.2f}s")
    assert top <= 4096 and elapsed <= 120


@pytest.mark.criterion(3, "witness inequality at nonzero next digits, 20 surds, n <= 200")
def test_criterion_3_witness_inequality(criterion):
    rng = random.Random(2024)
    checked = violations = 0
    for _ in range(20):
        m = rng.choice([2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19])
        x = ExactReal(Fraction(rng.randint(-20, 20), rng.randint(1, 9)),
                      Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9)), m)
        states = factoradic_states(x, 201)
        for n in range(1, 201):
            if states[n].a == 0:  # a_{n+1}
                continue
            checked += 1
            if not (abs(states[n - 1].b) >= frac_ball(Fraction(1, 2 * (n + 1)))):
                violations += 1
    criterion(f"{checked} indices checked, {violations} violations")
    assert checked > 0 and violations == 0


def _oracle_state(x, n):
    # e(n! x) from integer square roots: independent of the ball recurrence
    f = math.factorial(n)
    den = math.lcm(x.a.denominator, x.b.denominator)
    P, Q = int(x.a * den) * f, int(x.b * den) * f
    r = math.isqrt(4 * Q * Q * x.m)
    return (2 * P - den + (r if Q > 0 else -r - 1)) // (2 * den) + 1


def test_criterion_3_recurrence_agrees_with_isqrt_oracle():
    x = ExactReal(Fraction(-3, 7), Fraction(5, 3), 11)
    states = factoradic_states(x, 200)
    for n in (1, 17, 64, 133, 200):
        assert states[n - 1].E == _oracle_state(x, n)


@pytest.mark.criterion(4, "factoradic reconstruction at K = 100")
def test_criterion_4_reconstruction(criterion):
    K = 100
    bound = Fraction(1, 2 * math.factorial(K))
    seeds = [ExactReal.sqrt(2), ExactReal.sqrt(3), GOLDEN, ExactReal(Fraction(-7, 3), Fraction(2, 5), 11)]
    for x in seeds:
        digits, _ = factoradic_expand(x, K)
        err = abs(x - factoradic_partial_sum(digits))
        assert not (bound < err), x
    rationals = [Fraction(1, 3), Fraction(-22, 7), Fraction(355, 113), Fraction(1, 97), Fraction(5, 144)]
    terminated = 0
    for q in rationals:
        digits, b = factoradic_expand(q, K)
        assert abs(q - factoradic_partial_sum(digits)) <= bound
        n0 = first_divisor_factorial(q.denominator)
        if n0 <= K:
            assert factoradic_partial_sum(digits[:n0]) == q
            assert all(d == 0 for d in digits[n0:]) and b == 0
            terminated += 1
        else:
            # 113 is prime, so 355/113 needs 113 digits
            assert b != 0
    criterion(f"{len(seeds)} surd and {len(rationals)} rational seeds within 1/(2 K!), "
              f"{terminated} rationals terminate exactly")


@pytest.mark.criterion(5, "theta identities")
def test_criterion_5_theta(criterion):
    ctx = ThetaContext()
    rng = random.Random(5)
    bad_q = bad_odd = bad_log = 0
    with working_precision(128):
        tau = ctx.tau
        zs = [acb(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(100)]
        for z in zs:
            for a in range(-2, 3):
                for b in range(-2, 3):
                    r = quasi_period_phase(z, a, b, ctx)
                    bad_q += not abs(r).overlaps(arb(1))
            bad_odd += not (theta11_direct(-z, tau) + theta11_direct(z, tau)).contains(0)
            direct = abs(theta11_direct(z, tau)).log()
            bad_log += not log_abs_theta(z, ctx).value.overlaps(direct)
        lattice = [theta11_direct(a * tau + b, tau).contains(0) for a in (-1, 0, 1) for b in (-1, 0, 1)]
    criterion(f"quasi-period failures {bad_q}/2500, oddness {bad_odd}/100, "
              f"lattice zeros {sum(lattice)}/9, log mismatches {bad_log}/100")
    assert bad_q == bad_odd == bad_log == 0 and all(lattice)


@pytest.mark.criterion(6, "cell constant c for tau0 = i")
def test_criterion_6_c_constant(criterion):
    ctx = ThetaContext()
    c4, c5 = c_constant(ctx, 4), c_constant(ctx, 5)
    rel = abs(c5.value - c4.value) / c5.value
    criterion(f"c = {c5.value:.5f} > 0, level 4 vs 5 differ by {100 * rel:.2f}%, "
              f"argmin {tuple(round(v, 4) for v in c5.argmin)} on boundary: {c5.on_boundary}")
    assert c5.c > 0 and c4.c > 0
    assert rel <= 0.02
    assert c5.on_boundary


def _binom_half(n):
    out = Fraction(1)
    for k in range(n):
        out *= (Fraction(1, 2) - k) / (k + 1)
    return out


@pytest.mark.criterion(7, "Hensel lift of X^2 - (1 + zw) through order 64")
def test_criterion_7_hensel(criterion):
    F = hensel_lift_exact(SQRT_REL, 1, 64)
    for n, c in enumerate(F.coeffs):
        assert c == RatFunc(GaussPoly.from_coeffs([0] * n + [_binom_half(n)])), n
    assert all(r.is_zero() for r in residual_exact(SQRT_REL, F))
    spec = F.specialize(2)
    num = hensel_lift_numeric(SQRT_REL, 2, acb(1), 64)
    misses = [n for n, (a, b) in enumerate(zip(spec.coeffs, num.coeffs)) if not a.overlaps(b)]
    worst = max(float(c.rad()) for c in num.coeffs)
    criterion(f"65/65 exact coefficients, residual 0 mod w^65, numeric overlap misses {len(misses)}, "
              f"max radius {worst:.1e}")
    assert not misses


@pytest.mark.criterion(8, "branch radius vs discriminant distance at z0 = 1, 2, 4 (N = 512)")
def test_criterion_8_consistency(criterion):
    rep = theorem1_consistency(SQRT_REL, [1, 2, 4], N=512)
    text = rep.text()
    print(text)
    expected = {1: 1.0, 2: 0.5, 4: 0.25}
    for row in rep.rows:
        assert row.verdict.kind == "finite"
        assert abs(float(row.disc_radius.mid()) - expected[row.z0]) < 1e-12
        assert abs(float(row.series_radius.mid()) / expected[row.z0] - 1) <= 0.10
    assert rep.contrast and "verdict=zero" in rep.contrast
    ratios = ", ".join(f"{r.ratio:.3f}" for r in rep.rows)
    criterion(f"ratios {ratios}; contrast line emitted ({rep.contrast.split(':')[0]})")
    assert rep.passed


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
