"""Independent reference implementations used to cross-check the library.

They are deliberately slow and simple: nothing here shares code with the
package apart from the Polynomial container.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np


def _dominated_by_segment(v, u, w) -> bool:
    """Is v in conv{u, w} + R_+^2 (u, w, v lattice points)?"""
    # v dominates some convex combination of u and w; check the closed segment
    # by testing whether v lies on or above the line through u and w inside
    # the t1-range, plus the endpoint dominance cases.
    for p in (u, w):
        if p[0] <= v[0] and p[1] <= v[1]:
            return True
    (a1, b1), (a2, b2) = sorted([u, w])
    if not a1 < v[0] < a2 or b1 <= b2:
        return False
    # line height at v[0]
    lam = Fraction(v[0] - a1, a2 - a1)
    return v[1] >= b1 + lam * (b2 - b1)


def hull_vertices(points) -> list[tuple[int, int]]:
    """Vertices of conv(points) + R_+^2, found by brute force in O(n^3)."""
    pts = sorted(set(map(tuple, points)))
    out = []
    for v in pts:
        others = [p for p in pts if p != v]
        if any(_dominated_by_segment(v, u, w) for u, w in combinations(others, 2)):
            continue
        if any(p[0] <= v[0] and p[1] <= v[1] for p in others):
            continue
        out.append(v)
    return sorted(out)


def _pair_diagonal(u, w) -> Fraction:
    """min over the segment uw of max(t1, t2)."""
    cands = [max(u), max(w)]
    du = Fraction(u[0] - u[1])
    dw = Fraction(w[0] - w[1])
    if du * dw < 0:
        lam = dw / (dw - du)  # lam*u + (1-lam)*w lies on t1 = t2
        cands.append(lam * u[0] + (1 - lam) * w[0])
    return min(Fraction(c) for c in cands)


def newton_distance(points) -> Fraction:
    """Smallest t with (t, t) in conv(points) + R_+^2, by pairs of support points."""
    pts = sorted(set(map(tuple, points)))
    best = min(Fraction(max(p)) for p in pts)
    for u, w in combinations(pts, 2):
        best = min(best, _pair_diagonal(u, w))
    return best


def clustered_multiplicities(coeffs, radius: float = 0.15, imag_tol: float = 0.2) -> list[tuple[float, int]]:
    """Real roots with multiplicities by clustering numpy's floating-point roots.

    ``coeffs`` are lowest degree first.  A root of multiplicity k is perturbed
    by roughly eps^(1/k), so well separated exact roots stay in separate
    clusters as long as they are further apart than ``radius``.
    """
    c = [float(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    roots = np.roots(c[::-1]) if len(c) > 1 else np.array([])
    near_real = sorted(r.real for r in roots if abs(r.imag) < imag_tol)
    clusters: list[list[float]] = []
    for x in near_real:
        if clusters and x - clusters[-1][-1] < radius:
            clusters[-1].append(x)
        else:
            clusters.append([x])
    return [(float(np.mean(cl)), len(cl)) for cl in clusters]


def expand_factors(factors, constant=1) -> list[Fraction]:
    """Coefficients (lowest first) of constant * prod(f^k) for univariate f given lowest first."""
    out = [Fraction(constant)]
    for f, k in factors:
        for _ in range(k):
            new = [Fraction(0)] * (len(out) + len(f) - 1)
            for i, a in enumerate(out):
                for j, b in enumerate(f):
                    new[i + j] += a * Fraction(b)
            out = new
    return out


def chart_orders(P) -> int:
    """Maximal vanishing order of a homogeneous P on the unit circle by sampling lines.

    For every real root t0 of P(1, t), P(-1, t) (and of P(t, +-1) at t = 0)
    the order is found by repeated exact differentiation; this only uses
    polynomial evaluation, not square-free decompositions.
    """
    import sympy

    t = sympy.Symbol("t")
    best = 0
    exprs = []
    for s in (1, -1):
        exprs.append(sum(sympy.Rational(c.numerator, c.denominator) * s ** a * t ** b for (a, b), c in P.items()))
    for s in (1, -1):
        e = sum(sympy.Rational(c.numerator, c.denominator) * t ** a * s ** b for (a, b), c in P.items())
        k = 0
        while sympy.expand(e).subs(t, 0) == 0:
            e = sympy.diff(e, t)
            k += 1
        best = max(best, k)
    for e in exprs:
        e = sympy.expand(e)
        if e == 0:
            continue
        for r in sympy.real_roots(sympy.Poly(e, t)):
            k = 0
            g = e
            while sympy.simplify(g.subs(t, r)) == 0:
                g = sympy.diff(g, t)
                k += 1
            best = max(best, k)
    return best
