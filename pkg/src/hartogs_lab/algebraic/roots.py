"""Simultaneous polynomial root finding with certified inclusion disks.

Aberth-Ehrlich iteration runs in complex128 from a perturbed circle.  The
approximations z_i are then certified in ball arithmetic with the
Weierstrass corrections

    W_i = p(z_i) / (a_n prod_{j != i} (z_i - z_j)):

the disks D(z_i, n|W_i|) cover every root, and a connected union of k of
them holds exactly k roots (counted with multiplicity).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from flint import acb, arb

from ..errors import ZeroPolynomial
from .gauss import GaussQ


@dataclass(frozen=True)
class RootEnclosure:
    center: complex
    radius: float  # rigorous upper bound (inf when uncertified)
    multiplicity: int
    certified: bool

    def ball(self):
        r = self.radius if math.isfinite(self.radius) else 0.0
        return acb(arb(self.center.real, r), arb(self.center.imag, r))

    def modulus_bounds(self):
        """(lo, hi) bounds on |root| for every root in this enclosure."""
        c = abs(acb(self.center.real, self.center.imag))
        r = arb(self.radius)
        lo = (c - r).lower()
        return max(0.0, float(lo)), float((c + r).upper())


def _to_acb(c):
    if isinstance(c, acb):
        return c
    if isinstance(c, GaussQ):
        return c.to_acb()
    if isinstance(c, complex):
        return acb(c.real, c.imag)
    if hasattr(c, "numerator"):
        return GaussQ(c).to_acb()
    return acb(c)


def _is_exact_zero(c):
    if isinstance(c, acb):
        return c.is_zero()
    return not c


def _trim(coeffs):
    cs = list(coeffs)
    while cs and _is_exact_zero(cs[-1]):
        cs.pop()
    return cs


def aberth(coeffs, max_iter=500, tol=1e-15, seed_angle=0.4):
    """Approximate roots of sum coeffs[k] x^k (complex128)."""
    a = np.array([complex(_to_acb(c).mid()) for c in coeffs], dtype=complex)
    n = len(a) - 1
    a = a / a[-1]
    if n == 1:
        return np.array([-a[0]])
    # half the Fujiwara bound: every root has modulus <= 2 max |a_k|^(1/(n-k))
    rad = max(max(abs(a[k]) ** (1.0 / (n - k)) for k in range(n)), 1e-3)
    z = np.array([rad * cmath.exp(1j * (2 * math.pi * k / n + seed_angle)) for k in range(n)])
    pa = np.polynomial.polynomial
    da = pa.polyder(a)
    for _ in range(max_iter):
        p = pa.polyval(z, a)
        dp = pa.polyval(z, da)
        with np.errstate(all="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            s = (1.0 / diff).sum(axis=1) - 1.0  # drop the diagonal 1/1
            step = ratio / (1 - ratio * s)
        step = np.where(np.isfinite(step), step, 0)
        z = z - step
        if np.all(np.abs(step) <= tol * (1 + np.abs(z))):
            break
    return z


def _certify(coeffs_acb, z):
    n = len(coeffs_acb) - 1
    lead = coeffs_acb[-1]
    radii = []
    for i, zi in enumerate(z):
        x = acb(zi.real, zi.imag)
        p = acb(0)
        for c in reversed(coeffs_acb):
            p = p * x + c
        den = lead
        for j, zj in enumerate(z):
            if j != i:
                den = den * (x - acb(zj.real, zj.imag))
        if den.contains(0):
            radii.append(math.inf)
            continue
        W = abs(p / den)
        radii.append(float((W * n).upper()))
    return radii


def _components(z, radii):
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= radii[i] + radii[j]:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: min(g))


def roots_univar(coeffs, certify=True):
    """Root enclosures of sum coeffs[k] x^k, coefficients lowest degree first.

    Exact-zero leading coefficients are trimmed; a nonzero constant has no
    roots and gives ``[]``.  Clustered roots come back as one enclosure with
    its multiplicity.
    """
    cs = _trim(coeffs)
    if not cs:
        raise ZeroPolynomial("polynomial is identically zero")
    if len(cs) == 1:
        return []
    acs = [_to_acb(c) for c in cs]
    z = aberth(cs)
    if not certify:
        return [RootEnclosure(complex(r), math.inf, 1, False) for r in _sorted(z)]
    for bump in range(4):
        radii = _certify(acs, z)
        if all(math.isfinite(r) for r in radii):
            break
        # coincident approximations: nudge them apart and re-polish
        z = aberth(cs, seed_angle=0.4 + 0.7 * (bump + 1))
    out = []
    for g in _components(z, radii):
        if len(g) == 1:
            i = g[0]
            out.append(RootEnclosure(complex(z[i]), radii[i], 1, math.isfinite(radii[i])))
            continue
        c = complex(np.mean(z[g]))
        r = float(max(abs(z[i] - c) + radii[i] for i in g)) * (1 + 1e-12)
        out.append(RootEnclosure(c, r, len(g), math.isfinite(r)))
    return _sorted_enc(out)


def _sorted(z):
    return sorted(z, key=lambda v: (round(v.real, 12), round(v.imag, 12)))


def _sorted_enc(encs):
    return sorted(encs, key=lambda e: (round(e.center.real, 12), round(e.center.imag, 12)))
