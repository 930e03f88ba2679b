"""Line-oriented text form of exact lifts.

One line per coefficient: ``n<TAB>num<TAB>den`` where num and den are
monomial maps ``deg:coeff;deg:coeff`` (``0`` for the empty map) in z.
Lines starting with ``#`` are comments.
"""

from __future__ import annotations

from .gauss import GaussPoly, RatFunc, parse_gauss
from .lift import SeriesInW


def _map(p):
    items = [f"{k}:{c}" for k, c in enumerate(p.coeffs()) if c]
    return ";".join(items) if items else "0"


def _unmap(text):
    if text == "0":
        return GaussPoly()
    terms = {}
    for item in text.split(";"):
        k, c = item.split(":", 1)
        terms[int(k)] = parse_gauss(c)
    return GaussPoly.from_coeffs([terms.get(k, 0) for k in range(max(terms) + 1)])


def format_lift(series, header=None):
    if series.mode != "exact":
        raise ValueError("only exact lifts are serialized in this format")
    lines = [f"# {h}" for h in (header or [])]
    lines.append(f"# order {series.order}")
    for n, c in enumerate(series.coeffs):
        lines.append(f"{n}\t{_map(c.num)}\t{_map(c.den)}")
    return "\n".join(lines) + "\n"


def write_lift(series, fh, header=None):
    fh.write(format_lift(series, header))


def parse_lift(text):
    coeffs = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        n, num, den = line.split("\t")
        if int(n) != len(coeffs):
            raise ValueError(f"coefficient index {n} out of order")
        coeffs.append(RatFunc(_unmap(num), _unmap(den)))
    return SeriesInW(len(coeffs) - 1, coeffs, "exact")
