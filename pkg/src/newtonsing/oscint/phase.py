"""Floating-point evaluation of polynomial phases (real or complex points)."""
from __future__ import annotations

import numpy as np

from ..poly import Polynomial, _as_poly


class FloatPolynomial:
    """Polynomial with float coefficients, vectorized over numpy arrays."""

    def __init__(self, terms):
        # terms: iterable of (a1, a2, coeff)
        self.terms = [(int(a), int(b), float(c)) for a, b, c in terms if c != 0]
        self.deg1 = max((a for a, _, _ in self.terms), default=0)
        self.deg2 = max((b for _, b, _ in self.terms), default=0)

    @classmethod
    def from_poly(cls, p) -> "FloatPolynomial":
        if isinstance(p, FloatPolynomial):
            return p
        return cls(_as_poly(p).float_terms())

    def __call__(self, x1, x2):
        x1 = np.asarray(x1)
        x2 = np.asarray(x2)
        p1 = [np.ones_like(x1)]
        for _ in range(self.deg1):
            p1.append(p1[-1] * x1)
        p2 = [np.ones_like(x2)]
        for _ in range(self.deg2):
            p2.append(p2[-1] * x2)
        out = np.zeros(np.broadcast(x1, x2).shape, dtype=np.result_type(x1, x2, float))
        for a, b, c in self.terms:
            out = out + c * p1[a] * p2[b]
        return out

    def diff(self, var: int) -> "FloatPolynomial":
        if var == 1:
            return FloatPolynomial((a - 1, b, c * a) for a, b, c in self.terms if a > 0)
        return FloatPolynomial((a, b - 1, c * b) for a, b, c in self.terms if b > 0)

    def add_linear(self, s1: float, s2: float) -> "FloatPolynomial":
        t = dict(((a, b), c) for a, b, c in self.terms)
        t[(1, 0)] = t.get((1, 0), 0.0) + s1
        t[(0, 1)] = t.get((0, 1), 0.0) + s2
        return FloatPolynomial((a, b, c) for (a, b), c in t.items())

    def scaled(self, f: float) -> "FloatPolynomial":
        return FloatPolynomial((a, b, c * f) for a, b, c in self.terms)

    @property
    def is_separable(self) -> bool:
        return all(a == 0 or b == 0 for a, b, _ in self.terms)

    def univariate_parts(self):
        """(f1, f2) with p = f1(x1) + f2(x2); constant kept in f1."""
        f1 = FloatPolynomial((a, 0, c) for a, b, c in self.terms if b == 0)
        f2 = FloatPolynomial((0, b, c) for a, b, c in self.terms if a == 0 and b > 0)
        return f1, f2


class PhaseDerivatives:
    """Gradient, Hessian and third-derivative tensors of a float polynomial."""

    def __init__(self, p: FloatPolynomial):
        self.p = p
        self.g = [p.diff(1), p.diff(2)]
        self.h = [[self.g[0].diff(1), self.g[0].diff(2)], [self.g[1].diff(1), self.g[1].diff(2)]]
        self.t = [[[self.h[i][j].diff(k) for k in (1, 2)] for j in (0, 1)] for i in (0, 1)]

    def grad(self, x1, x2):
        return self.g[0](x1, x2), self.g[1](x1, x2)

    def hess(self, x1, x2):
        return ((self.h[0][0](x1, x2), self.h[0][1](x1, x2)),
                (self.h[1][0](x1, x2), self.h[1][1](x1, x2)))

    def third_norm(self, x1, x2):
        """Frobenius norm of the third-derivative tensor (upper bound on its operator norm)."""
        s = 0.0
        for i in (0, 1):
            for j in (0, 1):
                for k in (0, 1):
                    s = s + self.t[i][j][k](x1, x2) ** 2
        return np.sqrt(s)
