"""Classification of degenerate critical points with height below two.

The pipeline is exact: Hessian rank, a rational linear normalization, the
root jet of the second partial derivative, and the orders n and m read from
jets.  Types are A(n-1), D(n+1), D4plus/D4minus, E6/E7/E8, or out of scope.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import (
    JetOrderInsufficient,
    NotA2Germ,
    PreconditionViolated,
    ShiftNotFound,
    TypeHasNoRootJet,
    UndefinedAtAxis,
)
from .homog import check_critical, factor_homogeneous, is_adapted, max_root_multiplicity
from .newton import NewtonData, Weight, newton_polyhedron
from .poly import (
    Jet,
    Polynomial,
    _as_poly,
    as_fraction,
    isolate_real_roots,
    refine_interval,
    root_jet,
    shear,
    square_free_decomposition,
    substitute_linear,
    substitute_series,
    taylor_divide,
    upoly_eval,
    valuation_x1,
)

F = Fraction
CUBIC_WEIGHT = Weight(F(1, 3), F(1, 3))
E_TYPES = (
    ("E6", (4, 0), Weight(F(1, 4), F(1, 3)), F(12, 7)),
    ("E7", (3, 1), Weight(F(2, 9), F(1, 3)), F(9, 5)),
    ("E8", (5, 0), Weight(F(1, 5), F(1, 3)), F(15, 8)),
)


@dataclass
class SingularityReport:
    type_label: str
    family: str  # nondegenerate | A | D | E | out-of-scope
    rank: int
    input: Polynomial
    jet_order: int
    normalized: Polynomial  # input composed with linear_map
    linear_map: tuple  # x = M y, rows of M
    kappa: Optional[Weight] = None
    kappa_adapted: Optional[Weight] = None
    d: Optional[Fraction] = None
    h: Optional[Fraction] = None
    n: Optional[int] = None
    m: Optional[int] = None
    m_status: Optional[str] = None  # exact | flat | at-least
    psi: Optional[Jet] = None
    adapted_input: Optional[bool] = None
    p_c: Optional[Fraction] = None
    p_c_applicability: str = "not-applicable"
    reason: Optional[str] = None
    cubic_multiplicity: Optional[int] = None
    input_coordinates_adapted: Optional[bool] = None
    newton_distance_normalized: Optional[Fraction] = None
    warnings: list = field(default_factory=list)

    @property
    def m_display(self) -> Optional[str]:
        if self.m_status == "flat":
            return "inf"
        if self.m_status == "at-least":
            return f">={self.m}"
        return None if self.m is None else str(self.m)


def hessian_matrix(p) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    p = _as_poly(p)
    a, b, c = p.coeff(2, 0), p.coeff(1, 1), p.coeff(0, 2)
    return ((2 * a, b), (b, 2 * c))


def hessian_rank(p) -> int:
    p = check_critical(p)
    (h11, h12), (_, h22) = hessian_matrix(p)
    if h11 * h22 - h12 * h12 != 0:
        return 2
    if h11 or h12 or h22:
        return 1
    return 0


def default_jet_order(p) -> int:
    return 2 * _as_poly(p).degree + 4


def _inverse(rows) -> tuple:
    (a, b), (c, d) = rows
    det = a * d - b * c
    return ((d / det, -b / det), (-c / det, a / det))


def _linear_forms(P3: Polynomial) -> list[tuple[tuple[Fraction, Fraction], int]]:
    """Rational linear factors of a binary cubic as ((coef x1, coef x2), multiplicity)."""
    ff = factor_homogeneous(P3, CUBIC_WEIGHT)
    out = []
    if ff.nu1:
        out.append(((F(1), F(0)), ff.nu1))
    if ff.nu2:
        out.append(((F(0), F(1)), ff.nu2))
    for f in ff.factors:
        if f.degree == 1:
            lam = -f.coeffs[0]
            out.append(((-lam, F(1)), f.multiplicity))
    return out


def _psi_order(psi: Jet, order: int) -> tuple[Optional[int], str]:
    if psi.poly.is_zero():
        return (None, "flat") if not psi.truncated else (order + 1, "at-least")
    return valuation_x1(psi.poly), "exact"


def _root_data(phi: Polynomial, order: int, valuation: int):
    """Root jet psi of d2 phi, b0 = phi(x1, psi) and the orders n, m."""
    psi = root_jet(phi.diff(2), order, valuation)
    b0 = substitute_series(phi, psi, order)
    n = valuation_x1(b0.poly)
    if n is None:
        if psi.truncated:
            raise JetOrderInsufficient(
                f"b0 vanishes through jet order {order}; raise the jet order")
        exact = substitute_series(phi, psi.poly, order=phi.degree * max(psi.poly.degree, 1) + 1)
        n = valuation_x1(exact.poly)
        if n is None:
            raise PreconditionViolated(
                "phase has a flat restriction to its critical curve (type A-infinity / D-infinity, not of finite type along it)")
    m, status = _psi_order(psi, order)
    return psi, b0, n, m, status


def _base_report(p: Polynomial, order: int, rank: int, **kw) -> SingularityReport:
    ident = ((F(1), F(0)), (F(0), F(1)))
    r = SingularityReport(type_label="", family="", rank=rank, input=p, jet_order=order,
                          normalized=kw.pop("normalized", p), linear_map=kw.pop("linear_map", ident), **kw)
    return r


def classify(p, jet_order: int | None = None) -> SingularityReport:
    """Classify the critical point of ``p`` at the origin."""
    poly = _as_poly(p)
    order = jet_order if jet_order is not None else default_jet_order(poly)
    if isinstance(p, Jet):
        order = min(order, p.order)
    poly = check_critical(poly.truncate(order))
    rank = hessian_rank(poly)
    nd = newton_polyhedron(poly)
    raw_adapted = is_adapted(poly, nd).adapted

    if rank == 2:
        r = _base_report(poly, order, rank, kappa=nd.principal_weight, d=F(1), h=F(1),
                         p_c=F(3, 2), p_c_applicability="classical-3/2", adapted_input=True)
        r.type_label, r.family = "Nondegenerate", "nondegenerate"
    elif rank == 1:
        r = _classify_rank1(poly, order)
    else:
        r = _classify_rank0(poly, order, nd)
    r.input_coordinates_adapted = raw_adapted
    if r.normalized is not None and not r.normalized.is_zero():
        r.newton_distance_normalized = newton_polyhedron(r.normalized).distance
        if r.d is not None and r.newton_distance_normalized != r.d:
            r.warnings.append(
                f"Newton distance {r.newton_distance_normalized} of normalized phase differs from formula value {r.d}")
    return r


def _classify_rank1(poly: Polynomial, order: int) -> SingularityReport:
    a, b, c = poly.coeff(2, 0), poly.coeff(1, 1), poly.coeff(0, 2)
    if c != 0:
        M = ((F(1), F(0)), (-b / (2 * c), F(1)))
    else:
        M = ((F(0), F(1)), (F(1), F(0)))
    phi = substitute_linear(poly, M)
    psi, b0, n, m, status = _root_data(phi, order, 0)
    adapted = status != "exact" or n <= 2 * m
    h = F(2 * n, n + 2)
    if adapted:
        kappa, d = Weight.normalized(F(1, n), F(1, 2)), h
    else:
        kappa, d = Weight.normalized(F(1, 2 * m), F(1, 2)), F(2 * m, m + 1)
    r = _base_report(poly, order, 1, normalized=phi, linear_map=M, kappa=kappa,
                     kappa_adapted=Weight.normalized(F(1, n), F(1, 2)), d=d, h=h, n=n, m=m,
                     m_status=status, psi=psi, adapted_input=adapted, p_c=None,
                     p_c_applicability="deferred")
    r.type_label, r.family = f"A{n - 1}", "A"
    if status == "at-least":
        r.warnings.append(f"root jet vanishes through order {order}: m is only known to be >= {m}")
    return r


def _classify_rank0(poly: Polynomial, order: int, nd: NewtonData) -> SingularityReport:
    P3 = poly.homogeneous_part(3)
    if P3.is_zero():
        r = _base_report(poly, order, 0, d=nd.distance, reason="cubic part vanishes, so h >= 2")
        r.type_label, r.family = "OutOfScope", "out-of-scope"
        return r
    n3 = max_root_multiplicity(P3, CUBIC_WEIGHT)
    if n3 == 1:
        ff = factor_homogeneous(P3, CUBIC_WEIGHT)
        real = ff.nu1 + ff.nu2 + sum(f.real_roots * f.multiplicity for f in ff.factors)
        label = "D4minus" if real == 3 else "D4plus"
        r = _base_report(poly, order, 0, kappa=CUBIC_WEIGHT, kappa_adapted=CUBIC_WEIGHT,
                         d=F(3, 2), h=F(3, 2), n=3, psi=Jet(Polynomial(), order, False),
                         adapted_input=True, p_c=F(3, 2), p_c_applicability="rank0-height-below-2",
                         cubic_multiplicity=1)
        r.type_label, r.family = label, "D"
        return r
    forms = _linear_forms(P3)
    if n3 == 2:
        double = next(l for l, k in forms if k == 2)
        simple = next(l for l, k in forms if k == 1)
        M = _inverse((simple, double))
        phi = substitute_linear(poly, M)
        psi, b0, n, m, status = _root_data(phi, order, 1)
        adapted = status != "exact" or n <= 2 * m + 1
        h = F(2 * n, n + 1)
        ka = Weight.normalized(F(1, n), F(n - 1, 2 * n))
        if adapted:
            kappa, d = ka, h
        else:
            kappa, d = Weight.normalized(F(1, 2 * m + 1), F(m, 2 * m + 1)), F(2 * m + 1, m + 1)
        r = _base_report(poly, order, 0, normalized=phi, linear_map=M, kappa=kappa,
                         kappa_adapted=ka, d=d, h=h, n=n, m=m, m_status=status, psi=psi,
                         adapted_input=adapted, p_c=h, p_c_applicability="rank0-height-below-2",
                         cubic_multiplicity=2)
        r.type_label, r.family = f"D{n + 1}", "D"
        if status == "at-least":
            r.warnings.append(f"root jet vanishes through order {order}: m is only known to be >= {m}")
        return r
    # triple linear factor
    triple = forms[0][0]
    other = (F(1), F(0)) if triple[1] != 0 else (F(0), F(1))
    M = _inverse((other, triple))
    phi = substitute_linear(poly, M)
    for label, mono, kappa, h in E_TYPES:
        if phi.coeff(*mono) != 0:
            r = _base_report(poly, order, 0, normalized=phi, linear_map=M, kappa=kappa,
                             kappa_adapted=kappa, d=h, h=h, adapted_input=True, p_c=h,
                             p_c_applicability="rank0-height-below-2", cubic_multiplicity=3)
            r.type_label, r.family = label, "E"
            return r
    r = _base_report(poly, order, 0, normalized=phi, linear_map=M, d=newton_polyhedron(phi).distance,
                     cubic_multiplicity=3, reason="h >= 2 or insufficient jet order")
    r.type_label, r.family = "OutOfScope", "out-of-scope"
    return r


def adapted_shear(report: SingularityReport, p=None, check: bool = True) -> tuple[Jet, NewtonData]:
    """Compose the normalized phase with y2 -> y2 + psi(y1).

    ``p`` is accepted for symmetry with :func:`classify`; the report already
    carries the normalized phase.  With ``check`` the Newton distance of the
    result is compared with the height and a mismatch raises ArithmeticError.
    """
    if report.family not in ("A", "D") or report.psi is None:
        raise TypeHasNoRootJet(f"type {report.type_label} has no principal root jet")
    phi = report.normalized if p is None else substitute_linear(_as_poly(p), report.linear_map)
    phi_a = shear(phi, report.psi.poly, report.jet_order)
    nd = newton_polyhedron(phi_a.poly)
    if check and nd.distance != report.h:
        raise ArithmeticError(f"adapted distance {nd.distance} differs from height {report.h}")
    return phi_a, nd


# ---------------------------------------------------------------------------
# regions near the root curve


@dataclass(frozen=True)
class RegionParams:
    eps: Fraction
    N: Fraction
    m: int
    a: Fraction

    def __post_init__(self):
        for name in ("eps", "N", "a"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.eps <= 0 or self.N <= 0:
            raise ValueError("eps and N must be positive")


def region_params(report: SingularityReport, eps=F(1, 10), N=F(10)) -> RegionParams:
    if report.family == "D" and report.n is not None:
        a = F(report.n - 1, 2)
    elif report.family == "A":
        a = F(report.n, 2)
    else:
        raise TypeHasNoRootJet(f"type {report.type_label} has no root-jet regions")
    if report.m_status != "exact":
        raise TypeHasNoRootJet("root jet has no finite order m")
    return RegionParams(eps, N, report.m, a)


def region_membership(x, psi, params: RegionParams) -> str:
    """Dext, Dpr, E-transition or boundary-tie for a rational point ``x``."""
    x1, x2 = as_fraction(x[0]), as_fraction(x[1])
    if x1 == 0:
        raise UndefinedAtAxis("region comparisons need x1 != 0")
    psi_p = _as_poly(psi)
    u = abs(x2 - psi_p.evaluate(x1, F(0)))
    ax = abs(x1)
    outer = params.eps * ax ** params.m
    if u == outer:
        return "boundary-tie"
    if u > outer:
        return "Dext"
    p, q = params.a.numerator, params.a.denominator
    lhs, rhs = u ** q, params.N ** q * ax ** p
    if lhs == rhs:
        return "boundary-tie"
    return "Dpr" if lhs < rhs else "E-transition"


# ---------------------------------------------------------------------------
# A2 normal form at a fixed parameter value

A2_WEIGHT = Weight(F(1, 3), F(1, 2))
_DENOM_CAP = 10**30


def _round(x: Fraction) -> Fraction:
    if x.denominator > _DENOM_CAP:
        return x.limit_denominator(_DENOM_CAP)
    return x


@dataclass
class A2NormalForm:
    b: Jet
    psi: Jet
    beta: Jet
    beta1: Fraction
    beta0: Fraction
    m: int
    omega: Jet
    shift: Fraction
    transformed: Polynomial  # input in the new affine coordinates
    affine_map: tuple  # (M, offset): x_old = M x_new + offset
    residual: float
    conditions: dict = field(default_factory=dict)

    def reconstruct(self) -> Polynomial:
        x1, x2 = Polynomial.x1(), Polynomial.x2()
        w = x2 - self.omega.poly * x1 ** self.m
        order = self.b.order
        out = self.b.poly.mul_truncated(w * w, order)
        out = out + self.beta.poly.shift_exponents(3, 0) + x1 * self.beta1 + self.beta0
        return out.truncate(order)


def _scalar_root(coeffs: Sequence[Fraction], lo=F(-1), hi=F(1), start=F(0)) -> Fraction:
    """Root of a univariate polynomial nearest ``start`` in [lo, hi]: Newton, then Sturm bisection."""
    cs = list(coeffs)
    if not any(cs):
        return start
    d = [k * cs[k] for k in range(1, len(cs))]
    x = start
    for _ in range(60):
        fx = upoly_eval(cs, x)
        if fx == 0:
            return x
        dfx = upoly_eval(d, x) if d else 0
        if dfx == 0:
            break
        step = fx / dfx
        x = _round(x - step)
        if not lo <= x <= hi:
            break
        if abs(step) < F(1, 10**28):
            return x
    # bisection fallback on the roots isolated in the working interval
    best = None
    for g, _ in square_free_decomposition(cs):
        for a, b in isolate_real_roots(g):
            if b < lo or a > hi:
                continue
            while b - a > F(1, 10**28):
                a, b = refine_interval(g, a, b)
            r = _round((a + b) / 2)
            if lo <= r <= hi and (best is None or abs(r - start) < abs(best - start)):
                best = r
    if best is None:
        raise ShiftNotFound("no root of the second derivative in the working interval")
    return best


def _critical_curve(p: Polynomial, order: int) -> Jet:
    """x2 = psi(x1) solving d2 p = 0 near x2 = 0, allowing psi(0) != 0."""
    g = [p.diff(2).coeff(0, k) for k in range(p.degree_in(2))]
    psi0 = _scalar_root(g) if any(g) else F(0)
    shifted = substitute_linear(p, ((1, 0), (0, 1)), (0, psi0))
    tail = root_jet(shifted.diff(2), order, 0)
    poly = Polynomial({e: _round(c) for e, c in tail.poly.items()}) + psi0
    return Jet(poly.truncate(order), order, tail.truncated)


def _check_a2_base(p0: Polynomial):
    if p0.coeff(0, 2) == 0 or p0.coeff(3, 0) == 0:
        raise NotA2Germ("need nonzero x2^2 and x1^3 coefficients")


def a2_normal_form(family, sigma=0, order: int = 10, refinements: int = 6) -> A2NormalForm:
    """Normal form b (x2 - x1^m w)^2 + x1^3 beta + beta1 x1 + beta0 at one parameter value.

    ``family`` is either a polynomial (the slice at the chosen parameter) or a
    callable returning the slice for a given sigma.  For a callable the
    parameter-zero slice must have principal part a2 x2^2 + a3 x1^3.
    """
    conditions = {}
    if callable(family) and not isinstance(family, (Polynomial, Jet)):
        p0 = _as_poly(family(0))
        _check_a2_base(p0)
        low = [e for e in p0.support if A2_WEIGHT.degree(e) < 1]
        if low:
            raise NotA2Germ(f"terms {sorted(low)} lie below the principal line at sigma = 0")
        p = _as_poly(family(sigma))
    else:
        p = _as_poly(family)
        p0 = None
    p = Polynomial({e: as_fraction(c) for e, c in p.items()})
    _check_a2_base(p)

    psi = _critical_curve(p, order)
    # Re-centre repeatedly: jets expanded at the current origin lose accuracy
    # away from it, so each pass refines the shift found by the previous one.
    M = ((F(1), F(0)), (F(0), F(1)))
    offset = (F(0), F(0))
    q, cur = p, psi
    for _ in range(refinements):
        _, b0 = taylor_divide(q, cur, order)
        b0c = b0.poly.univariate_coeffs(1) if not b0.poly.is_zero() else [F(0)]
        dd = [k * (k - 1) * b0c[k] for k in range(2, len(b0c))]
        t = _scalar_root(dd) if any(dd) else F(0)
        pcur = cur.poly.univariate_coeffs(1) if not cur.poly.is_zero() else [F(0)]
        psi_t = _round(upoly_eval(pcur, t))
        dpsi_t = _round(upoly_eval([k * pcur[k] for k in range(1, len(pcur))], t)) if len(pcur) > 1 else F(0)
        if t == 0 and psi_t == 0 and dpsi_t == 0:
            break
        # x_old = M (B x + (t, psi_t)) + offset with B = [[1, 0], [dpsi_t, 1]]
        offset = (offset[0] + t, _round(offset[1] + M[1][0] * t + psi_t))
        M = ((F(1), F(0)), (_round(M[1][0] + dpsi_t), F(1)))
        q = substitute_linear(p, M, offset)
        cur = _critical_curve(q, order)
    s = offset[0]

    psi_q = cur
    bq, b0q = taylor_divide(q, psi_q, order)
    pc = psi_q.poly.univariate_coeffs(1) if not psi_q.poly.is_zero() else [F(0)]
    pc = pc + [F(0)] * max(0, order + 1 - len(pc))
    dropped = [pc[0], pc[1]]
    rest = pc[2:]
    nz = next((k for k, c in enumerate(rest) if c != 0), None)
    if nz is None:
        m, omega = 2, Polynomial()
    else:
        m = nz + 2
        omega = Polynomial({(k, 0): c for k, c in enumerate(rest[nz:])})
    bc = b0q.poly.univariate_coeffs(1) if not b0q.poly.is_zero() else [F(0)]
    bc = bc + [F(0)] * max(0, 4 - len(bc))
    beta0, beta1, c2 = bc[0], bc[1], bc[2]
    beta = Polynomial({(k - 3, 0): c for k, c in enumerate(bc) if k >= 3})
    nf = A2NormalForm(
        b=bq, psi=psi, beta=Jet(beta.truncate(order - 3), order - 3, b0q.truncated),
        beta1=beta1, beta0=beta0, m=m, omega=Jet(omega.truncate(order - m), order - m, psi_q.truncated),
        shift=s, transformed=q, affine_map=(M, offset), residual=0.0)
    diff = (nf.reconstruct() - q.truncate(order)).truncate(order)
    scale = max((abs(c) for _, c in q.items()), default=F(1))
    err = max((abs(c) for _, c in diff.items()), default=F(0))
    nf.residual = float(err / scale) if scale else float(err)
    conditions["leftover x1^2 coefficient"] = float(c2)
    conditions["dropped root-jet terms"] = tuple(float(v) for v in dropped)
    if p0 is not None and sigma == 0:
        conditions["beta0 == 0"] = beta0 == 0
        conditions["beta1 == 0"] = beta1 == 0
        conditions["omega == 0"] = omega.is_zero()
    nf.conditions = conditions
    return nf
