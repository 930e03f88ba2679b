"""Expression grammar for relations, exact reals and complex literals.

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := ('+' | '-') unary | power
    power   := atom ('^' INT)?
    atom    := NUMBER ['i'] | 'i' | VAR | 'sqrt' '(' INT ')' | '(' expr ')'
    NUMBER  := DIGITS ['.' DIGITS] ['/' DIGITS]
    VAR     := 'z' | 'w' | 'X' | 't0'

Decimals and ``p/q`` literals are exact.  Every ParseError carries a byte
offset into the source.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..algebraic.gauss import GaussQ
from ..algebraic.poly import BivarPoly, XPoly
from ..errors import NotPolynomialInX, ParseError
from ..numeric import ExactReal

VARS = ("z", "w", "X", "t0")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?(?:/\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, imag, ident, op, end
    text: str
    offset: int  # byte offset


def _byte_offsets(src):
    # char index -> byte offset (identical for ASCII input)
    out, b = [], 0
    for ch in src:
        out.append(b)
        b += len(ch.encode("utf-8"))
    out.append(b)
    return out


def tokenize(src):
    boff = _byte_offsets(src)
    toks, pos = [], 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", boff[pos], src)
        if m.group("num"):
            kind = "imag" if m.group("imag") else "num"
            toks.append(Token(kind, m.group("num"), boff[pos]))
        elif m.group("ident"):
            toks.append(Token("ident", m.group("ident"), boff[pos]))
        elif m.group("op"):
            toks.append(Token("op", m.group("op"), boff[pos]))
        pos = m.end()
    toks.append(Token("end", "", boff[len(src)]))
    return toks


# ---------------------------------------------------------------------------
# values: polynomials over VARS with coefficients (re + im i), re/im ExactReal


class Coef:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, ExactReal) else ExactReal(re)
        self.im = im if isinstance(im, ExactReal) else ExactReal(im)

    def __add__(self, o):
        return Coef(self.re + o.re, self.im + o.im)

    def __neg__(self):
        return Coef(-self.re, -self.im)

    def __mul__(self, o):
        return Coef(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def is_zero(self):
        return self.re == 0 and self.im == 0


def _padd(a, b):
    out = dict(a)
    for k, c in b.items():
        s = out[k] + c if k in out else c
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _pmul(a, b):
    out = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = tuple(x + y for x, y in zip(k1, k2))
            out = _padd(out, {k: c1 * c2})
    return out


_ONE = (0, 0, 0, 0)


def _const(c):
    return {} if c.is_zero() else {_ONE: c}


class _Parser:
    def __init__(self, src):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise ParseError(msg, tok.offset, self.src)

    def expect(self, text):
        if self.tok.text != text or self.tok.kind != "op":
            what = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            self.error(f"expected {text!r}, found {what}")
        return self.take()

    def parse(self):
        v = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take()
            rhs = self.term()
            v = _padd(v, rhs if op.text == "+" else {k: -c for k, c in rhs.items()})
        return v

    def term(self):
        v = self.unary()
        while self.tok.kind == "op" and self.tok.text == "*":
            op = self.take()
            rhs = self.unary()
            try:
                v = _pmul(v, rhs)
            except ValueError as exc:
                raise ParseError(str(exc), op.offset, self.src) from None
        return v

    def unary(self):
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take()
            v = self.unary()
            return v if op.text == "+" else {k: -c for k, c in v.items()}
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            t = self.tok
            if t.kind != "num" or not t.text.isdigit():
                what = "end of input" if t.kind == "end" else repr(t.text)
                self.error(f"exponent must be a nonnegative integer literal, found {what}")
            self.take()
            out = _const(Coef(1))
            for _ in range(int(t.text)):
                try:
                    out = _pmul(out, base)
                except ValueError as exc:
                    raise ParseError(str(exc), t.offset, self.src) from None
            return out
        return base

    def atom(self):
        t = self.tok
        if t.kind in ("num", "imag"):
            self.take()
            try:
                q = _literal(t.text)
            except ZeroDivisionError:
                self.error("zero denominator in literal", t)
            return _const(Coef(0, q) if t.kind == "imag" else Coef(q))
        if t.kind == "ident":
            self.take()
            if t.text == "i":
                return _const(Coef(0, 1))
            if t.text in VARS:
                k = [0, 0, 0, 0]
                k[VARS.index(t.text)] = 1
                return {tuple(k): Coef(1)}
            if t.text == "sqrt":
                self.expect("(")
                arg = self.tok
                if arg.kind != "num" or not arg.text.isdigit():
                    self.error("sqrt takes a nonnegative integer literal")
                self.take()
                self.expect(")")
                return _const(Coef(ExactReal.sqrt(int(arg.text))))
            self.error(f"unknown identifier {t.text!r}", t)
        if t.kind == "op" and t.text == "(":
            self.take()
            v = self.expr()
            self.expect(")")
            return v
        what = "end of input" if t.kind == "end" else repr(t.text)
        self.error(f"expected a number, variable or '(', found {what}")


def _literal(text):
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ZeroDivisionError
        return Fraction(num) / int(den)
    return Fraction(text)


def parse_expr(src):
    """Parse to a monomial map {(deg_z, deg_w, deg_X, deg_t0): Coef}."""
    return _Parser(src).parse()


def _only_vars(poly, allowed, src):
    for k in poly:
        for name, e in zip(VARS, k):
            if e and name not in allowed:
                raise ParseError(f"variable {name!r} not allowed here", _var_offset(src, name), src)


def _var_offset(src, name):
    for t in tokenize(src):
        if t.kind == "ident" and t.text == name:
            return t.offset
    return 0


def _gauss(c, src):
    if not (c.re.is_rational and c.im.is_rational):
        raise ParseError("irrational coefficient not allowed here", _var_offset(src, "sqrt"), src)
    return GaussQ(c.re.as_fraction(), c.im.as_fraction())


def parse_real(src):
    """Exact real: rational or a + b*sqrt(m)."""
    poly = parse_expr(src)
    _only_vars(poly, (), src)
    c = poly.get(_ONE, Coef(0))
    if c.im != 0:
        raise ParseError("expected a real number", _var_offset(src, "i"), src)
    return c.re


def parse_complex(src):
    """Exact Gaussian rational such as '2+0i', '1/2-3i', '0.25'."""
    poly = parse_expr(src)
    _only_vars(poly, (), src)
    return _gauss(poly.get(_ONE, Coef(0)), src)


def parse_lattice_point(src):
    """``x*t0 + y`` with real x, y -> (x, y) as ExactReal."""
    poly = parse_expr(src)
    _only_vars(poly, ("t0",), src)
    x, y = ExactReal(0), ExactReal(0)
    for k, c in poly.items():
        if c.im != 0:
            raise ParseError("lattice coordinates must be real", 0, src)
        if k == _ONE:
            y = c.re
        elif k == (0, 0, 0, 1):
            x = c.re
        else:
            raise ParseError("point must be linear in t0", _var_offset(src, "t0"), src)
    return x, y


def parse_bivar(src):
    poly = parse_expr(src)
    _only_vars(poly, ("z", "w"), src)
    return BivarPoly({(k[0], k[1]): _gauss(c, src) for k, c in poly.items()})


def parse_poly(src):
    """Relation sum_j Phi_j(z, w) X^(t-j) with t >= 1."""
    poly = parse_expr(src)
    _only_vars(poly, ("z", "w", "X"), src)
    t = max((k[2] for k in poly), default=0)
    if t < 1:
        raise NotPolynomialInX(f"{src!r} does not involve X")
    coeffs = [dict() for _ in range(t + 1)]
    for (i, j, e, _), c in poly.items():
        coeffs[t - e][(i, j)] = _gauss(c, src)
    return XPoly(tuple(BivarPoly(c) for c in coeffs))
