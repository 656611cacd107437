"""Weighted-homogeneous polynomials: factorization, circle multiplicity, height.

Exact factorization over the rationals is delegated to sympy; real-root
counting and multiplicities use the Sturm machinery in :mod:`poly`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

import sympy

from .errors import NotHomogeneous, PreconditionViolated
from .newton import NewtonData, Weight, newton_polyhedron, principal_part
from .poly import (
    Polynomial,
    _as_poly,
    isolate_real_roots,
    real_root_multiplicities,
    upoly_monic,
)


@dataclass(frozen=True)
class HomogeneousFactor:
    """Monic irreducible factor g(u) in u = x2^q / x1^p, raised to ``multiplicity``."""

    coeffs: tuple[Fraction, ...]  # lowest degree first
    multiplicity: int
    real_roots: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class FactoredForm:
    constant: Fraction
    nu1: int
    nu2: int
    p: int
    q: int
    factors: tuple[HomogeneousFactor, ...]

    def lifted_factor(self, f: HomogeneousFactor) -> Polynomial:
        """x1^(p*deg g) * g(x2^q / x1^p) as a polynomial."""
        e = f.degree
        return Polynomial({(self.p * (e - k), self.q * k): c for k, c in enumerate(f.coeffs)})

    def expand(self) -> Polynomial:
        out = Polynomial.monomial(self.nu1, self.nu2, self.constant)
        for f in self.factors:
            out = out * self.lifted_factor(f) ** f.multiplicity
        return out

    @property
    def real_root_multiplicities(self) -> list[int]:
        return [f.multiplicity for f in self.factors for _ in range(f.real_roots)]


@dataclass(frozen=True)
class HeightData:
    n_P: int
    d_h: Fraction
    h: Fraction
    adapted: Optional[bool] = None
    reason: Optional[str] = None  # edge-and-small-multiplicity | vertex | unbounded-edge | not-adapted
    distance: Optional[Fraction] = None
    non_integer_ratio: bool = False  # weight ratio not an integer, which already forces adaptedness


def check_homogeneous(P, kappa: Weight) -> Polynomial:
    P = _as_poly(P)
    if P.is_zero():
        raise NotHomogeneous("zero polynomial")
    bad = [e for e in P.support if kappa.degree(e) != 1]
    if bad:
        raise NotHomogeneous(f"terms {sorted(bad)} do not have weighted degree 1 under {kappa}")
    return P


def _ratio(kappa: Weight) -> tuple[int, int]:
    w1, w2 = kappa.oriented()
    r = w2 / w1
    return r.numerator, r.denominator


def dehomogenize(P, kappa: Weight):
    """Return (nu1, nu2, p, q, coefficients of f(u)) with P = x1^nu1 x2^nu2 x1^(pK) f(x2^q/x1^p)."""
    P = check_homogeneous(P, kappa)
    p, q = _ratio(kappa)
    nu1 = min(a for a, _ in P.support)
    nu2 = min(b for _, b in P.support)
    coeffs: dict[int, Fraction] = {}
    for (a, b), c in P.items():
        bb = b - nu2
        if bb % q:
            raise NotHomogeneous("exponent step incompatible with the weight ratio")
        coeffs[bb // q] = c
    K = max(coeffs)
    f = [coeffs.get(k, Fraction(0)) for k in range(K + 1)]
    return nu1, nu2, p, q, f


def factor_homogeneous(P, kappa: Weight) -> FactoredForm:
    nu1, nu2, p, q, f = dehomogenize(P, kappa)
    lead = f[-1]
    factors = []
    if len(f) > 1:
        u = sympy.Symbol("u")
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f)], u, domain="QQ")
        _, flist = poly.factor_list()
        for g, k in flist:
            cs = [Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())]
            cs = upoly_monic(cs)
            factors.append(HomogeneousFactor(tuple(cs), int(k), len(isolate_real_roots(cs))))
        factors.sort(key=lambda h: (h.degree, h.coeffs))
    return FactoredForm(lead, nu1, nu2, p, q, tuple(factors))


def chart_polynomials(P) -> dict[str, list[Fraction]]:
    """Univariate restrictions P(1,t), P(-1,t), P(t,1), P(t,-1)."""
    P = _as_poly(P)
    n1, n2 = P.degree_in(1), P.degree_in(2)
    out = {k: None for k in ("x1=1", "x1=-1", "x2=1", "x2=-1")}
    c = {k: [Fraction(0)] * (n + 1) for k, n in (("x1=1", n2), ("x1=-1", n2), ("x2=1", n1), ("x2=-1", n1))}
    for (a, b), v in P.items():
        c["x1=1"][b] += v
        c["x1=-1"][b] += v * (-1) ** a
        c["x2=1"][a] += v
        c["x2=-1"][a] += v * (-1) ** b
    for k in out:
        out[k] = c[k]
    return out


def max_root_multiplicity(P, kappa: Weight) -> int:
    """Maximal order of vanishing of P along the unit circle, via four charts."""
    P = check_homogeneous(P, kappa)
    charts = chart_polynomials(P)
    best = 0
    for key in ("x1=1", "x1=-1"):
        best = max(best, real_root_multiplicities(charts[key]).max_multiplicity)
    for key in ("x2=1", "x2=-1"):
        cs = charts[key]
        order = next(i for i, v in enumerate(cs) if v != 0)
        best = max(best, order)
    return best


def homogeneous_distance(kappa: Weight) -> Fraction:
    return 1 / kappa.norm


def height_of_homogeneous(P, kappa: Weight) -> HeightData:
    n = max_root_multiplicity(P, kappa)
    dh = homogeneous_distance(kappa)
    return HeightData(n, dh, max(Fraction(n), dh))


def check_critical(p) -> Polynomial:
    p = _as_poly(p)
    if p.is_zero():
        raise PreconditionViolated("phase vanishes identically (not of finite type)")
    if p.coeff(0, 0) != 0:
        raise PreconditionViolated("phase must vanish at the origin")
    if p.coeff(1, 0) != 0 or p.coeff(0, 1) != 0:
        raise PreconditionViolated("gradient must vanish at the origin")
    return p


def is_adapted(p, nd: NewtonData | None = None) -> HeightData:
    """Decide whether the given coordinates are adapted to ``p``.

    For a compact principal edge the verdict compares n(p_pr) with d; vertex
    and unbounded principal faces are always adapted.  ``h`` is the height of
    the principal part, which equals h(p) whenever the verdict is positive.
    """
    p = check_critical(p)
    nd = nd or newton_polyhedron(p)
    d = nd.distance
    face = nd.principal_face
    if face.kind == "edge":
        kappa = nd.principal_weight
        P = principal_part(p, nd)
        hd = height_of_homogeneous(P, kappa)
        ok = Fraction(hd.n_P) <= d
        r = kappa.k2 / kappa.k1
        return HeightData(hd.n_P, hd.d_h, hd.h, ok,
                          "edge-and-small-multiplicity" if ok else "not-adapted",
                          d, r.denominator != 1)
    if face.kind == "vertex":
        (v,) = face.points
        return HeightData(v[0], d, d, True, "vertex", d)
    (v,) = face.points
    n = v[1] if face.kind == "horizontal-ray" else v[0]
    return HeightData(n, d, d, True, "unbounded-edge", d)
