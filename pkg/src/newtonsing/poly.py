"""Exact bivariate polynomials and truncated jets over the rationals.

Polynomials are immutable maps ``(a1, a2) -> Fraction`` with no stored zeros.
A :class:`Jet` pairs a polynomial with a total-degree truncation order and a
flag telling whether anything nonzero was discarded to get there.

Univariate work (gcd, square-free decomposition, Sturm sequences) uses dense
coefficient lists, lowest degree first.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegenerateSecondDerivative,
    PreconditionViolated,
    SingularMatrix,
    TruncationInsufficient,
    ZeroPolynomial,
)

Exponent = tuple[int, int]


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.strip())
    if isinstance(c, float):
        # floats are accepted only when they are exact binary rationals
        return Fraction(c)
    raise TypeError(f"cannot convert {c!r} to an exact rational")


class Polynomial:
    """Bivariate polynomial in ``x1, x2`` with exact rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, object] | Iterable[tuple[Exponent, object]] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for (a1, a2), c in items:
                a1, a2 = int(a1), int(a2)
                if a1 < 0 or a2 < 0:
                    raise ValueError(f"negative exponent {(a1, a2)}")
                c = as_fraction(c)
                if c:
                    s = clean.get((a1, a2), 0) + c
                    if s:
                        clean[(a1, a2)] = s
                    else:
                        clean.pop((a1, a2), None)
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def monomial(cls, a1: int, a2: int, c=1) -> "Polynomial":
        return cls({(a1, a2): c})

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({(0, 0): c})

    @classmethod
    def x1(cls) -> "Polynomial":
        return cls({(1, 0): 1})

    @classmethod
    def x2(cls) -> "Polynomial":
        return cls({(0, 1): 1})

    @classmethod
    def from_univariate(cls, coeffs: Sequence, var: int = 1) -> "Polynomial":
        if var == 1:
            return cls({(k, 0): c for k, c in enumerate(coeffs)})
        return cls({(0, k): c for k, c in enumerate(coeffs)})

    # mapping-like access
    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, a1: int, a2: int) -> Fraction:
        return self._terms.get((a1, a2), Fraction(0))

    @property
    def support(self) -> frozenset[Exponent]:
        return frozenset(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((a + b for a, b in self._terms), default=-1)

    @property
    def order(self) -> int | None:
        """Lowest total degree present (None for zero)."""
        return min((a + b for a, b in self._terms), default=None)

    def degree_in(self, var: int) -> int:
        i = var - 1
        return max((e[i] for e in self._terms), default=-1)

    def is_univariate(self, var: int = 1) -> bool:
        other = 1 if var == 1 else 0
        return all(e[other] == 0 for e in self._terms)

    def univariate_coeffs(self, var: int = 1) -> list[Fraction]:
        if not self.is_univariate(var):
            raise ValueError(f"polynomial is not univariate in x{var}")
        i = var - 1
        n = self.degree_in(var)
        out = [Fraction(0)] * (n + 1)
        for e, c in self._terms.items():
            out[e[i]] = c
        return out

    # arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, Jet):
            return other.poly
        return Polynomial.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return _from_clean(out)

    __radd__ = __add__

    def __neg__(self):
        return _from_clean({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (Polynomial, Jet)):
            c = as_fraction(other)
            if not c:
                return Polynomial()
            return _from_clean({e: c * v for e, v in self._terms.items()})
        other = self._coerce(other)
        return self.mul_truncated(other, None)

    __rmul__ = __mul__

    def mul_truncated(self, other: "Polynomial", order: int | None) -> "Polynomial":
        """Product keeping only terms of total degree <= order (all if None)."""
        out: dict[Exponent, Fraction] = {}
        for (a1, a2), c in self._terms.items():
            for (b1, b2), d in other._terms.items():
                if order is not None and a1 + a2 + b1 + b2 > order:
                    continue
                e = (a1 + b1, a2 + b2)
                out[e] = out.get(e, 0) + c * d
        return _from_clean({e: c for e, c in out.items() if c})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, c):
        c = as_fraction(c)
        return _from_clean({e: v / c for e, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, Jet):
            other = other.poly
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.constant(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # calculus and slicing
    def diff(self, var: int, k: int = 1) -> "Polynomial":
        i = var - 1
        out = {}
        for e, c in self._terms.items():
            if e[i] < k:
                continue
            f = 1
            for j in range(k):
                f *= e[i] - j
            ne = (e[0] - k, e[1]) if i == 0 else (e[0], e[1] - k)
            out[ne] = c * f
        return _from_clean(out)

    def truncate(self, order: int) -> "Polynomial":
        return _from_clean({e: c for e, c in self._terms.items() if e[0] + e[1] <= order})

    def homogeneous_part(self, k: int) -> "Polynomial":
        return _from_clean({e: c for e, c in self._terms.items() if e[0] + e[1] == k})

    def filter(self, pred) -> "Polynomial":
        return _from_clean({e: c for e, c in self._terms.items() if pred(e)})

    def shift_exponents(self, d1: int, d2: int) -> "Polynomial":
        """Multiply by x1^d1 x2^d2 (negative shifts must divide exactly)."""
        out = {}
        for (a1, a2), c in self._terms.items():
            if a1 + d1 < 0 or a2 + d2 < 0:
                raise ValueError("monomial division is not exact")
            out[(a1 + d1, a2 + d2)] = c
        return _from_clean(out)

    def swap(self) -> "Polynomial":
        return _from_clean({(b, a): c for (a, b), c in self._terms.items()})

    def x2_coefficients(self) -> dict[int, "Polynomial"]:
        """Write p = sum_k c_k(x1) x2^k; returns {k: c_k} with c_k univariate in x1."""
        out: dict[int, dict] = {}
        for (a1, a2), c in self._terms.items():
            out.setdefault(a2, {})[(a1, 0)] = c
        return {k: _from_clean(v) for k, v in out.items()}

    def __call__(self, x1, x2):
        return self.evaluate(x1, x2)

    def evaluate(self, x1, x2):
        """Evaluate at scalars or numpy arrays; exact when given Fractions."""
        if not self._terms:
            return 0 * x1
        d1 = self.degree_in(1)
        d2 = self.degree_in(2)
        p1 = [1, x1]
        for _ in range(d1 - 1):
            p1.append(p1[-1] * x1)
        p2 = [1, x2]
        for _ in range(d2 - 1):
            p2.append(p2[-1] * x2)
        total = 0
        for (a1, a2), c in sorted(self._terms.items()):
            total = total + c * p1[a1] * p2[a2]
        return total

    def float_terms(self) -> list[tuple[int, int, float]]:
        return [(a1, a2, float(c)) for (a1, a2), c in sorted(self._terms.items())]

    def __repr__(self):
        return f"Polynomial({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (a1, a2), c in sorted(self._terms.items(), key=lambda t: (t[0][0] + t[0][1], -t[0][1])):
            mono = []
            if a1:
                mono.append("x1" if a1 == 1 else f"x1^{a1}")
            if a2:
                mono.append("x2" if a2 == 1 else f"x2^{a2}")
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mono:
                body = "*".join(mono) if mag == 1 else f"{mag}*" + "*".join(mono)
            else:
                body = str(mag)
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def _from_clean(terms: dict) -> Polynomial:
    p = Polynomial.__new__(Polynomial)
    p._terms = terms
    p._hash = None
    return p


@dataclass(frozen=True)
class Jet:
    """A polynomial known modulo terms of total degree > ``order``."""

    poly: Polynomial
    order: int
    truncated: bool = False

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("jet order must be nonnegative")
        if self.poly.degree > self.order:
            raise ValueError("jet polynomial exceeds its truncation order")

    @classmethod
    def of(cls, p: Polynomial, order: int) -> "Jet":
        t = p.truncate(order)
        return cls(t, order, len(t) != len(p))

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self.poly == other.poly and self.order == other.order and self.truncated == other.truncated
        return NotImplemented

    def __hash__(self):
        return hash((self.poly, self.order, self.truncated))

    def __str__(self):
        tail = f" + O({self.order + 1})" if self.truncated else ""
        return f"{self.poly}{tail}"


def _as_poly(p) -> Polynomial:
    return p.poly if isinstance(p, Jet) else p


# ---------------------------------------------------------------------------
# substitutions


def substitute_linear(p: Polynomial, M, shift=(0, 0)) -> Polynomial:
    """Return ``p(M x + shift)`` exactly.

    ``M`` is a 2x2 nested sequence of rationals; row i gives the new
    expression for the old variable x_i.
    """
    p = _as_poly(p)
    m = [[as_fraction(v) for v in row] for row in M]
    sh = [as_fraction(v) for v in shift]
    if m[0][0] * m[1][1] - m[0][1] * m[1][0] == 0:
        raise SingularMatrix("linear substitution matrix is singular")
    l1 = Polynomial({(1, 0): m[0][0], (0, 1): m[0][1], (0, 0): sh[0]})
    l2 = Polynomial({(1, 0): m[1][0], (0, 1): m[1][1], (0, 0): sh[1]})
    pw1 = _powers(l1, p.degree_in(1))
    pw2 = _powers(l2, p.degree_in(2))
    out = Polynomial()
    for (a1, a2), c in p.items():
        out = out + (pw1[a1] * pw2[a2]) * c
    return out


def _powers(base: Polynomial, n: int, order: int | None = None) -> list[Polynomial]:
    pw = [Polynomial.constant(1)]
    for _ in range(max(n, 0)):
        pw.append(pw[-1].mul_truncated(base, order))
    return pw


def substitute_series(p, j, order: int | None = None) -> Jet:
    """Compose ``p(x1, j)``: the variable x2 is replaced by ``j``.

    ``j`` may be a polynomial or jet in x1 alone (a graph ``x2 = j(x1)``) or
    in both variables (a shear such as ``x2 + psi(x1)``).  The result is
    truncated at ``order`` (default: the order of ``j`` if it is a jet).
    """
    p = _as_poly(p)
    j_trunc = isinstance(j, Jet) and j.truncated
    if order is None:
        if isinstance(j, Jet):
            order = j.order
        else:
            raise ValueError("order is required when j is a plain polynomial")
    jp = _as_poly(j)
    coeffs = p.x2_coefficients()
    kmax = max(coeffs, default=0)
    # Horner in x2 with truncation at every step
    acc = Polynomial()
    dropped = False
    if jp.coeff(0, 0) != 0:
        # a constant term feeds high degrees back down: compose exactly first
        exact = Polynomial()
        pw = _powers(jp, kmax)
        for k, ck in coeffs.items():
            exact = exact + ck * pw[k]
        kept = exact.truncate(order)
        return Jet(kept, order, len(kept) != len(exact) or j_trunc)
    for k in range(kmax, -1, -1):
        full = acc * jp if not acc.is_zero() else acc
        kept = full.truncate(order)
        if len(kept) != len(full):
            dropped = True
        acc = kept + coeffs.get(k, Polynomial())
    kept = acc.truncate(order)
    if len(kept) != len(acc):
        dropped = True
    if dropped and not j_trunc:
        # truncation during Horner can overstate the tail; settle it exactly when cheap
        if p.degree_in(2) * max(jp.degree, 1) + p.degree <= 160:
            exact = Polynomial()
            pw = _powers(jp, kmax)
            for k, ck in coeffs.items():
                exact = exact + ck * pw[k]
            kept = exact.truncate(order)
            dropped = len(kept) != len(exact)
    return Jet(kept, order, dropped or j_trunc)


def shear(p, psi, order: int) -> Jet:
    """``p(x1, x2 + psi(x1))`` truncated at ``order``."""
    psi = _as_poly(psi)
    return substitute_series(p, Polynomial.x2() + psi, order)


# ---------------------------------------------------------------------------
# dense univariate helpers (coefficient lists, lowest degree first)


def _trim(a: list) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_deg(a) -> int:
    return len(_trim(a)) - 1


def upoly_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def upoly_deriv(a) -> list:
    return [k * a[k] for k in range(1, len(a))]


def upoly_mul(a, b) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def upoly_divmod(a, b) -> tuple[list, list]:
    a = [Fraction(c) for c in _trim(a)]
    b = [Fraction(c) for c in _trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 1)
    r = a[:]
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        f = r[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        r = _trim(r)
    return _trim(q), r


def upoly_monic(a) -> list:
    a = _trim(a)
    if not a:
        return a
    return [Fraction(c) / a[-1] for c in a]


def upoly_gcd(a, b) -> list:
    a, b = _trim(a), _trim(b)
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, r
    return upoly_monic(a)


def square_free_decomposition(a) -> list[tuple[list, int]]:
    """Yun's algorithm: returns [(g_k, k)] with a = c * prod g_k^k, g_k square-free, monic."""
    a = upoly_monic(a)
    if upoly_deg(a) <= 0:
        return []
    out = []
    da = upoly_deriv(a)
    b = upoly_gcd(a, da)
    c, _ = upoly_divmod(a, b)
    d, _ = upoly_divmod(da, b)
    d = _sub(d, upoly_deriv(c))
    k = 1
    while upoly_deg(c) > 0:
        g = upoly_gcd(c, d)
        if upoly_deg(g) > 0:
            out.append((g, k))
        c, _ = upoly_divmod(c, g)
        d, _ = upoly_divmod(d, g)
        d = _sub(d, upoly_deriv(c))
        k += 1
    return out


def _sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def sturm_sequence(a) -> list[list]:
    seq = [_trim(a), upoly_deriv(_trim(a))]
    while upoly_deg(seq[-1]) > 0:
        _, r = upoly_divmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x) -> int:
    signs = []
    for s in seq:
        v = upoly_eval(s, x)
        if v:
            signs.append(v > 0)
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _cauchy_bound(a) -> Fraction:
    a = _trim(a)
    lead = abs(a[-1])
    return 1 + max((abs(Fraction(c)) / lead for c in a[:-1]), default=Fraction(0))


def isolate_real_roots(a) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the real roots of a square-free polynomial.

    Each interval is either ``(r, r)`` for an exact rational root or an open
    interval ``(lo, hi)`` with exactly one root and a sign change of ``a``.
    """
    a = [Fraction(c) for c in _trim(a)]
    if upoly_deg(a) < 1:
        return []
    seq = sturm_sequence(a)
    B = _cauchy_bound(a)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = _sign_changes(seq, lo) - _sign_changes(seq, hi)
        if n == 0:
            continue
        if n == 1 and upoly_eval(a, lo) * upoly_eval(a, hi) < 0:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if upoly_eval(a, mid) == 0:
            out.append((mid, mid))
            # shrink around the exact root so neighbours stay separate
            w = (hi - lo) / 4
            while _sign_changes(seq, mid - w) - _sign_changes(seq, mid + w) > 1 or \
                    upoly_eval(a, mid - w) == 0 or upoly_eval(a, mid + w) == 0:
                w /= 2
            stack.append((lo, mid - w))
            stack.append((mid + w, hi))
        else:
            stack.append((lo, mid))
            stack.append((mid, hi))
    return sorted(out)


def refine_interval(a, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """One bisection step on an isolating interval of a square-free ``a``."""
    if lo == hi:
        return lo, hi
    mid = (lo + hi) / 2
    fm = upoly_eval(a, mid)
    if fm == 0:
        return mid, mid
    if upoly_eval(a, lo) * fm < 0:
        return lo, mid
    return mid, hi


@dataclass(frozen=True)
class RootEntry:
    lo: Fraction
    hi: Fraction
    multiplicity: int

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


@dataclass(frozen=True)
class MultiplicityList:
    """Real roots with multiplicities; ``zero_multiplicity`` is the order at t = 0."""

    entries: tuple[RootEntry, ...]
    zero_multiplicity: int
    degree: int

    @property
    def max_multiplicity(self) -> int:
        return max((e.multiplicity for e in self.entries), default=0)

    @property
    def real_root_count(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)


def _to_coeffs(u) -> list[Fraction]:
    if isinstance(u, (Polynomial, Jet)):
        u = _as_poly(u)
        if u.is_univariate(1):
            return u.univariate_coeffs(1)
        if u.is_univariate(2):
            return u.univariate_coeffs(2)
        raise ValueError("expected a univariate polynomial")
    return [as_fraction(c) for c in u]


def real_root_multiplicities(u) -> MultiplicityList:
    """Real roots of a univariate polynomial with exact multiplicities.

    Multiplicities come from the square-free decomposition; each square-free
    factor is isolated separately with Sturm sequences.
    """
    a = _trim(_to_coeffs(u))
    if not a:
        raise ZeroPolynomial("real_root_multiplicities of the zero polynomial")
    v = 0
    while a[v] == 0:
        v += 1
    rest = a[v:]
    raw: list[list] = []  # [lo, hi, k, factor]
    for g, k in square_free_decomposition(rest):
        for lo, hi in isolate_real_roots(g):
            raw.append([lo, hi, k, g])
    # refine until intervals of different factors are pairwise disjoint
    changed = True
    while changed:
        changed = False
        raw.sort(key=lambda r: (r[0], r[1]))
        for r1, r2 in zip(raw, raw[1:]):
            if r2[0] <= r1[1]:
                for r in (r1, r2):
                    r[0], r[1] = refine_interval(r[3], r[0], r[1])
                changed = True
    entries = [RootEntry(lo, hi, k) for lo, hi, k, _ in raw]
    if v:
        # separate the nonzero roots from 0 before recording the zero root
        fixed = []
        for e in entries:
            lo, hi = e.lo, e.hi
            g = next(r[3] for r in raw if r[0] == lo and r[1] == hi)
            while lo <= 0 <= hi and lo != hi:
                lo, hi = refine_interval(g, lo, hi)
            fixed.append(RootEntry(lo, hi, e.multiplicity))
        entries = fixed + [RootEntry(Fraction(0), Fraction(0), v)]
    entries.sort(key=lambda e: (e.lo, e.hi))
    return MultiplicityList(tuple(entries), v, len(a) - 1)


# ---------------------------------------------------------------------------
# truncated univariate power series (dense lists) for root jets


def _series_mul(a, b, n) -> list:
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                if y:
                    out[i + j] += x * y
    return out


def _series_div(a, b, n, shift: int) -> list:
    """(a / b) mod x^(n+1), where b has valuation ``shift`` and a is divisible by x^shift."""
    a = list(a) + [Fraction(0)] * (n + shift + 1 - len(a))
    b = list(b) + [Fraction(0)] * (n + shift + 1 - len(b))
    if any(a[i] for i in range(shift)):
        raise ArithmeticError("series quotient is not a power series")
    a = a[shift:]
    b = b[shift:]
    if b[0] == 0:
        raise ZeroDivisionError("series division by a series of higher valuation")
    q = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        s = a[k] - sum(q[i] * b[k - i] for i in range(k))
        q[k] = s / b[0]
    return q


def compose_x1_series(F: Polynomial, psi: Sequence, n: int) -> list:
    """Series of F(x1, psi(x1)) mod x1^(n+1); psi is a dense list."""
    coeffs = F.x2_coefficients()
    kmax = max(coeffs, default=0)
    acc = [Fraction(0)] * (n + 1)
    for k in range(kmax, -1, -1):
        acc = _series_mul(acc, psi, n)
        ck = coeffs.get(k)
        if ck is not None:
            for (a1, _), c in ck.items():
                if a1 <= n:
                    acc[a1] += c
    return acc


def root_jet(F: Polynomial, order: int, valuation: int = 0, max_iter: int | None = None) -> Jet:
    """Solve ``F(x1, psi(x1)) = 0`` for a jet psi with psi(0) = 0 by Newton on jets.

    ``valuation`` is the x1-adic valuation of ``dF/dx2`` along the root
    (0 for a regular root, 1 for the type D situation where dF/dx2 = c*x1 + ...).
    The truncated flag is False only when the returned polynomial is an
    exact root of F.
    """
    v = valuation
    n = order
    dF = F.diff(2)
    psi = [Fraction(0)] * (n + 1)
    max_iter = max_iter or (n + 5)
    for _ in range(max_iter):
        R = compose_x1_series(F, psi, n + v)
        if not any(R):
            break
        D = compose_x1_series(dF, psi, n + v)
        delta = _series_div(R, D, n, v)
        psi = [p - d for p, d in zip(psi, delta)]
    else:
        R = compose_x1_series(F, psi, n + v)
        if any(R):
            raise ArithmeticError("Newton iteration on jets did not converge")
    poly = Polynomial.from_univariate(psi, 1)
    exact = _exact_root(F, poly)
    return Jet(poly, order, not exact)


def _exact_root(F: Polynomial, psi: Polynomial) -> bool:
    if psi.degree * max(F.degree_in(2), 1) > 400:
        return False
    full = substitute_series(F, psi, order=psi.degree * F.degree_in(2) + F.degree + 1)
    return full.poly.is_zero()


def solve_critical_series(p, order: int) -> Jet:
    """Jet psi(x1) with d2p(x1, psi(x1)) = 0 mod x1^(order+1).

    Requires d2p(0,0) = 0 and d2^2 p(0,0) != 0 (implicit function theorem).
    """
    p = _as_poly(p)
    if p.coeff(0, 1) != 0:
        raise PreconditionViolated("d2 p(0,0) must vanish")
    if p.coeff(0, 2) == 0:
        raise DegenerateSecondDerivative("d2^2 p(0,0) = 0")
    return root_jet(p.diff(2), order, 0)


def taylor_divide(p, psi, order: int) -> tuple[Jet, Jet]:
    """Split ``p = b (x2 - psi)^2 + b0(x1)`` in the jet ring.

    ``b0 = p(x1, psi(x1))``; ``b`` comes from dividing the shifted polynomial
    twice by ``x2 - psi``.  The linear coefficient ``d2p(x1, psi)`` is
    returned inside the remainder check only; when psi solves the critical
    equation it vanishes to the truncation order.
    """
    if isinstance(p, Jet) and order > p.order:
        raise TruncationInsufficient(f"requested order {order} exceeds input jet order {p.order}")
    in_trunc = isinstance(p, Jet) and p.truncated
    pp = _as_poly(p)
    psi_p = _as_poly(psi)
    psi_trunc = isinstance(psi, Jet) and psi.truncated
    if any(a2 for (_, a2) in psi_p.support):
        raise ValueError("psi must be a function of x1 only")
    q = shear(pp, psi_p, order)
    parts = q.poly.x2_coefficients()
    b0 = parts.get(0, Polynomial())
    ba = Polynomial()
    for k, ck in parts.items():
        if k >= 2:
            ba = ba + ck.shift_exponents(0, k - 2)
    # undo the shear on b: b(x1, x2) = b^a(x1, x2 - psi(x1))
    b = substitute_series(ba, Polynomial.x2() - psi_p, order)
    flag = q.truncated or b.truncated or in_trunc or psi_trunc
    return Jet(b.poly, order, flag), Jet(b0.truncate(order), order, flag)


def linear_coefficient(p, psi, order: int) -> Jet:
    """``(d2 p)(x1, psi(x1))`` as a jet: the term that taylor_divide assumes is zero."""
    q = shear(_as_poly(p), _as_poly(psi), order)
    return Jet(q.poly.x2_coefficients().get(1, Polynomial()), order, q.truncated)


def valuation_x1(p) -> int | None:
    """Order of vanishing in x1 of a univariate-in-x1 polynomial (None if zero)."""
    p = _as_poly(p)
    return min((a1 for (a1, _) in p.support), default=None)


def random_polynomial(rng, max_degree: int, n_terms: int, coeff_range: int = 5) -> Polynomial:
    """Random polynomial used by property tests and demos."""
    terms = {}
    monos = [(a, b) for a, b in product(range(max_degree + 1), repeat=2) if a + b <= max_degree]
    for _ in range(n_terms):
        e = monos[rng.randrange(len(monos))]
        terms[e] = Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 3))
    return Polynomial(terms)
