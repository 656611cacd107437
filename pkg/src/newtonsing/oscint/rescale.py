"""Dyadic rescaling phi^k(x) = 2^k phi(2^(-k kappa1) x1, 2^(-k kappa2) x2).

The kappa-principal part is invariant; every other term c x^alpha picks up the
factor 2^(k (1 - kappa.alpha)), kept here with its exact rational exponent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from ..newton import Weight, kappa_degree_split, newton_polyhedron, principal_weight
from ..poly import Polynomial, _as_poly
from .decay import loglog_fit


@dataclass(frozen=True)
class RemainderTerm:
    alpha: tuple
    coeff: Fraction
    exponent: Fraction  # the term is coeff * 2^(k * exponent) * x^alpha

    def scale(self, k: int) -> float:
        return float(self.coeff) * 2.0 ** float(k * self.exponent)


class ScaledRemainder:
    """x -> 2^k phi_r(delta_{2^-k} x), evaluable on floats or arrays."""

    def __init__(self, terms: list[RemainderTerm], k: int):
        self.terms = terms
        self.k = k

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, float)
        x2 = np.asarray(x2, float)
        out = np.zeros(np.broadcast(x1, x2).shape)
        for t in self.terms:
            out = out + t.scale(self.k) * x1 ** t.alpha[0] * x2 ** t.alpha[1]
        return out

    def coefficients(self) -> dict:
        """Exact coefficient of each monomial as (c, e) meaning c * 2^e."""
        return {t.alpha: (t.coeff, self.k * t.exponent) for t in self.terms}

    def is_zero(self) -> bool:
        return not self.terms


@dataclass
class RescaleCheck:
    kappa: Weight
    k_grid: tuple
    sup_norms: tuple
    eps_hat: Optional[float]
    eps_exact: Optional[Fraction]
    inner: float = 0.5
    outer: float = 2.0

    @property
    def relative_error(self) -> Optional[float]:
        if self.eps_hat is None or not self.eps_exact:
            return None
        return abs(self.eps_hat - float(self.eps_exact)) / float(self.eps_exact)


def remainder_terms(phi, kappa: Weight) -> tuple[Polynomial, list[RemainderTerm]]:
    principal, rest = kappa_degree_split(phi, kappa)
    terms = [RemainderTerm(a, c, 1 - kappa.degree(a)) for a, c in sorted(rest.items())]
    return principal, terms


def exact_eps(terms: list[RemainderTerm]) -> Optional[Fraction]:
    """min over remainder terms of (kappa-degree - 1); None for an empty remainder."""
    return min((-t.exponent for t in terms), default=None)


def annulus_sup(f, inner: float = 0.5, outer: float = 2.0, n_r: int = 41, n_t: int = 256) -> float:
    r = np.linspace(inner, outer, n_r)
    t = np.linspace(0, 2 * np.pi, n_t, endpoint=False)
    R, T = np.meshgrid(r, t)
    return float(np.max(np.abs(f(R * np.cos(T), R * np.sin(T)))))


def rescale_phase(phi, kappa: Optional[Weight] = None, k: int = 0, inner: float = 0.5, outer: float = 2.0):
    """Return (principal part, scaled remainder, (k, sup over the annulus))."""
    if k < 0:
        raise ValueError("k must be non-negative")
    phi = _as_poly(phi)
    if kappa is None:
        kappa = principal_weight(newton_polyhedron(phi))
    principal, terms = remainder_terms(phi, kappa)
    rem = ScaledRemainder(terms, k)
    sup = 0.0 if rem.is_zero() else annulus_sup(rem, inner, outer)
    return principal, rem, (k, sup)


def rescale_check(phi, kappa: Optional[Weight] = None, ks: Iterable[int] = range(21),
                  inner: float = 0.5, outer: float = 2.0) -> RescaleCheck:
    """Sup norms of the scaled remainder over k and the fitted rate eps_hat (sup ~ 2^(-eps k))."""
    phi = _as_poly(phi)
    if kappa is None:
        kappa = principal_weight(newton_polyhedron(phi))
    ks = tuple(int(k) for k in ks)
    sups = tuple(rescale_phase(phi, kappa, k, inner, outer)[2][1] for k in ks)
    _, terms = remainder_terms(phi, kappa)
    eps_hat = None
    if terms and all(v > 0 for v in sups) and len(ks) >= 2:
        # slope of log2 sup against k, i.e. the log-log slope against 2^k
        slope, _ = loglog_fit([2.0 ** k for k in ks], sups)
        eps_hat = -slope
    return RescaleCheck(kappa, ks, sups, eps_hat, exact_eps(terms), inner, outer)
