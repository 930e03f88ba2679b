import io
import math
from fractions import Fraction

import pytest
from flint import arb

from hartogs_lab.diophantine import first_divisor_factorial
from hartogs_lab.errors import IrrationalPoint, RationalPoint
from hartogs_lab.hartogs import (
    SCAN_HEADER,
    ExactPoint,
    HartogsSeries,
    counterexample_log_coefficient,
    counterexample_series,
    counterexample_value,
    divergence_certificate,
    radius_estimate,
    radius_from_logs,
    rational_termination,
    scan_grid,
    write_scan_csv,
)
from hartogs_lab.numeric import ExactReal, working_precision
from hartogs_lab.theta import NEG_INF, LogMagnitude, ThetaContext

SQRT2 = ExactReal.sqrt(2)


def synthetic(logf):
    """Series whose coefficients do not depend on alpha: log|f_n| = logf(n)."""

    def provider(n, alpha, budget):
        v = logf(n)
        return NEG_INF if v is None else LogMagnitude(arb(v))

    return HartogsSeries("synthetic", provider)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 10.0])
def test_geometric_radius(r):
    F = synthetic(lambda n: -n * math.log(r))
    v = radius_estimate(F, ExactPoint(0, 0), 60)
    assert v.kind == "finite"
    assert abs(float(v.radius.mid()) / r - 1) < 1e-9


def test_geometric_with_polynomial_factor():
    # n^3 2^n: radius 1/2 up to the n^3 bias at N = 512
    F = synthetic(lambda n: 3 * math.log(max(n, 1)) + n * math.log(2))
    v = radius_estimate(F, ExactPoint(0, 0), 512)
    assert v.kind == "finite" and abs(float(v.radius.mid()) / 0.5 - 1) < 0.05


def test_inverse_factorial_is_entire():
    F = synthetic(lambda n: -math.lgamma(n + 1))
    assert radius_estimate(F, ExactPoint(0, 0), 60).kind == "infinite"


def test_n_to_the_n_has_radius_zero():
    F = synthetic(lambda n: n * math.log(max(n, 1)))
    assert radius_estimate(F, ExactPoint(0, 0), 30).kind == "zero"


def test_trailing_zeros_give_termination_index():
    logs = [NEG_INF] + [LogMagnitude(arb(1.0)) for _ in range(4)] + [NEG_INF] * 20
    v = radius_from_logs(logs)
    assert v.kind == "infinite" and v.n0 == 5


def test_window_too_large():
    with pytest.raises(ValueError):
        radius_from_logs([NEG_INF] * 10, window=6)


@pytest.mark.parametrize(
    "x,y",
    [(Fraction(1, 3), Fraction(1, 2)), (Fraction(1, 11), Fraction(5, 12)), (0, 0), (Fraction(3, 8), Fraction(-2, 7))],
)
def test_rational_points_terminate_at_first_divisor_factorial(x, y):
    F = counterexample_series()
    n0 = rational_termination(F, ExactPoint(x, y))
    assert n0 == max(first_divisor_factorial(Fraction(x).denominator),
                     first_divisor_factorial(Fraction(y).denominator))
    alpha = ExactPoint(x, y)
    for n in range(n0, n0 + 5):
        assert F.log_coefficient(n, alpha).is_neg_inf
    if n0 > 1:
        assert not F.log_coefficient(n0 - 1, alpha).is_neg_inf


def test_termination_rejects_irrational():
    with pytest.raises(IrrationalPoint):
        rational_termination(None, ExactPoint(SQRT2, 0))


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_log_coefficient_matches_direct_summation(n):
    ctx = ThetaContext()
    alpha = ExactPoint(SQRT2, Fraction(1, 3))
    with working_precision(256):
        direct = abs(counterexample_value(ctx, n, alpha, 256)).log()
    lg = counterexample_log_coefficient(ctx, n, alpha)
    assert lg.value.overlaps(direct)


@pytest.mark.parametrize(
    "alpha",
    [ExactPoint(SQRT2, 0), ExactPoint(0, ExactReal.sqrt(3)),
     ExactPoint(ExactReal(Fraction(1, 2), Fraction(1, 2), 5), Fraction(1, 4))],
)
def test_surd_points_diverge(alpha):
    assert radius_estimate(counterexample_series(), alpha, 25).kind == "zero"


def test_divergence_certificate_small():
    certs = divergence_certificate(counterexample_series(), ExactPoint(SQRT2, 0), 6)
    assert [c.n for c in certs] == [1, 2, 3, 5, 6]
    assert all(c.dominated and all(c.links.values()) for c in certs)


def test_divergence_certificate_via_y_coordinate():
    certs = divergence_certificate(counterexample_series(), ExactPoint(Fraction(1, 3), ExactReal.sqrt(3)), 5)
    assert certs and all(c.coord == "y" and c.dominated for c in certs)


def test_divergence_certificate_rejects_rational():
    with pytest.raises(RationalPoint):
        divergence_certificate(counterexample_series(), ExactPoint(Fraction(1, 3), Fraction(1, 2)), 5)


def _csv(rows):
    buf = io.StringIO()
    write_scan_csv(rows, buf)
    return buf.getvalue()


def test_scan_csv_schema_and_order():
    rows = scan_grid(counterexample_series(), (0, Fraction(1, 2), 0, Fraction(1, 2)), 3, 25)
    text = _csv(rows).splitlines()
    assert text[0].split(",") == SCAN_HEADER
    assert len(text) == 10
    coords = [tuple(line.split(",")[:2]) for line in text[1:]]
    ys = [c[1] for c in coords]
    assert ys == sorted(ys, key=float)  # y outer, x inner
    assert coords[:3] == [("0", "0"), ("0.25", "0"), ("0.5", "0")]


def test_scan_workers_deterministic():
    region = (0, SQRT2 / 4, 0, Fraction(1, 2))
    a = _csv(scan_grid(counterexample_series(), region, 2, 12, workers=1))
    b = _csv(scan_grid(counterexample_series(), region, 2, 12, workers=2))
    assert a == b
    assert "zero" in a
