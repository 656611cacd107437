"""Decay exponents of oscillatory integrals from log-log fits over dyadic frequencies."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import BudgetExceeded, DegenerateFit
from ..poly import _as_poly
from .amplitude import AmplitudeSpec, LocalizedAmplitude, plateau
from .phase import FloatPolynomial, PhaseDerivatives
from .quadrature import QuadConfig, integrate_1d, osc_integral

DEFAULT_LAMBDAS = tuple(2.0 ** k for k in range(6, 13))
SCREEN_LAMBDAS = tuple(2.0 ** k for k in range(6, 9))
ZERO_LEVEL = 1e-14


@dataclass
class DecayFit:
    direction: tuple
    lambdas: tuple
    values: tuple
    gamma_hat: float
    r2: float
    gamma_predicted: Optional[Fraction] = None
    tolerance: float = 0.06
    critical_point: Optional[tuple] = None
    note: str = ""

    @property
    def verdict(self) -> Optional[str]:
        if self.gamma_predicted is None:
            return None
        ok = abs(self.gamma_hat - float(self.gamma_predicted)) <= self.tolerance and self.r2 >= 0.98
        return "pass" if ok else "fail"


def loglog_fit(lambdas: Sequence[float], values: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope of log|J| against log(lambda) and its r^2."""
    x = np.log(np.asarray(lambdas, float))
    y = np.log(np.asarray(values, float))
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(coef[0]), max(0.0, min(1.0, r2))


def _check_grid(lambdas, min_points: int = 2):
    lam = [float(v) for v in lambdas]
    if len(lam) < min_points:
        raise ValueError(f"lambda grid needs at least {min_points} points")
    if any(b <= a for a, b in zip(lam, lam[1:])):
        raise ValueError("lambda grid must be strictly increasing")
    return lam


def amplitude_mass(amp: AmplitudeSpec, cfg: Optional[QuadConfig] = None) -> float:
    return abs(osc_integral(FloatPolynomial([]), amp, (0.0, 0.0, 0.0), cfg))


def _direct_fit(phi, amp, s, lam, cfg, method) -> DecayFit:
    vals = [abs(osc_integral(phi, amp, (L * s[0], L * s[1], L), cfg, method)) for L in lam]
    mass = amplitude_mass(amp, cfg)
    zero = ZERO_LEVEL * max(mass, 1e-300)
    if all(v <= zero for v in vals) or vals[-1] <= zero:
        raise DegenerateFit("oscillatory integral is numerically zero: super-polynomial decay", values=vals)
    slope, r2 = loglog_fit(lam, vals)
    return DecayFit(tuple(float(v) for v in s), tuple(lam), tuple(vals), -slope, r2)


def decay_fit(phi, amp: AmplitudeSpec, s=(0.0, 0.0), lambdas: Iterable[float] = DEFAULT_LAMBDAS,
              cfg: Optional[QuadConfig] = None, gamma_predicted=None, tolerance: float = 0.06,
              method: str = "auto", min_points: int = 6) -> DecayFit:
    """Fit |J(lambda s1, lambda s2, lambda)| ~ C lambda^(-gamma).

    With ``method='auto'`` and a compactly supported (non-analytic) amplitude
    that does not factor, the integral is split at the critical points of
    phi + s.x in the support: each one gets a localized analytic amplitude
    weighted by ``amp`` there and is fitted separately, and the slowest decay
    is returned.  Without critical points the decay is super-polynomial and
    DegenerateFit is raised.
    """
    lam = _check_grid(lambdas, min_points)
    cfg = cfg or QuadConfig()
    phi = FloatPolynomial.from_poly(phi)
    s = (float(s[0]), float(s[1]))
    localized = method == "localized" or (
        method == "auto" and not amp.analytic and not (amp.separable and phi.is_separable))
    if not localized:
        fit = _direct_fit(phi, amp, s, lam, cfg, method)
    else:
        entries = _local_fits(phi, amp, s, lam, cfg)
        capped = [e.point for e in entries if e.status == "budget"]
        if capped:
            # the missing cluster could be the slowest one
            raise BudgetExceeded(f"panel cap hit at critical points {capped}")
        fits = [e.fit for e in entries if e.fit is not None]
        if not fits:
            raise DegenerateFit("no critical point in the support: super-polynomial decay", values=[])
        fit = min(fits, key=lambda f: f.gamma_hat)
    fit.gamma_predicted = None if gamma_predicted is None else Fraction(gamma_predicted)
    fit.tolerance = tolerance
    return fit


# ---------------------------------------------------------------------------
# critical points and localization


def critical_points(phi, s, box, amp: Optional[AmplitudeSpec] = None, grid: int = 61,
                    tol: float = 1e-10) -> list[np.ndarray]:
    """Critical points of phi(x) + s.x inside ``box`` (and where ``amp`` > 0)."""
    fp = FloatPolynomial.from_poly(phi).add_linear(float(s[0]), float(s[1]))
    d = PhaseDerivatives(fp)
    lo1, hi1, lo2, hi2 = box
    g1, g2 = np.meshgrid(np.linspace(lo1, hi1, grid), np.linspace(lo2, hi2, grid), indexing="ij")
    a, b = d.grad(g1, g2)
    n2 = a * a + b * b
    # local minima of |grad|^2 on the grid as starting points
    starts = []
    for i in range(grid):
        for j in range(grid):
            v = n2[i, j]
            nb = n2[max(i - 1, 0):i + 2, max(j - 1, 0):j + 2]
            if v <= nb.min():
                starts.append((g1[i, j], g2[i, j]))
    found: list[np.ndarray] = []
    span = max(hi1 - lo1, hi2 - lo2)
    for x in starts:
        x = np.array(x, float)
        for _ in range(200):
            gx = np.array(d.grad(x[0], x[1]), float)
            H = np.array(d.hess(x[0], x[1]), float)
            step = np.linalg.lstsq(H, gx, rcond=1e-12)[0]
            if not np.all(np.isfinite(step)) or np.linalg.norm(step) > span:
                break
            x = x - step
            if np.linalg.norm(step) < 1e-15 * max(1.0, np.linalg.norm(x)):
                break
        gx = np.array(d.grad(x[0], x[1]), float)
        scale = 1.0 + float(np.max(np.sqrt(n2)))
        if np.linalg.norm(gx) > tol * scale * 1e3:
            continue
        if not (lo1 <= x[0] <= hi1 and lo2 <= x[1] <= hi2):
            continue
        if amp is not None and not amp(x[0], x[1]) > 0:
            continue
        if all(np.linalg.norm(x - y) > 1e-6 for y in found):
            found.append(x)
    found.sort(key=lambda v: (round(v[0], 9), round(v[1], 9)))
    return found


def localize(phi, s, point, weight: float = 1.0, rho_min: float = 0.25, rho_max: float = 1.0,
             others=(), extent: float = 0.0) -> LocalizedAmplitude:
    """Analytic amplitude centred at ``point`` with axes along the Hessian eigenvectors.

    ``extent`` is the radius of the cluster of critical points being covered;
    ``others`` are the centres of the remaining clusters, at which the
    amplitude is made negligible (below exp(-cutoff)).
    """
    fp = FloatPolynomial.from_poly(phi).add_linear(float(s[0]), float(s[1]))
    H = np.array(PhaseDerivatives(fp).hess(point[0], point[1]), float)
    mu, vecs = np.linalg.eigh(H)
    rho = [min(rho_max, max(rho_min, 1.0 / math.sqrt(abs(m)) if m != 0 else rho_max)) for m in mu]
    if extent > 0:
        rho = [max(r, extent + rho_min) for r in rho]
    dists = [float(np.linalg.norm(np.asarray(o, float) - np.asarray(point, float))) for o in others]
    dists = [d for d in dists if d > 1e-9]
    if dists:
        cap = 0.9 * min(dists) / LocalizedAmplitude.cutoff ** 0.25
        rho = [min(r, cap) for r in rho]
    R = vecs.T
    if np.allclose(np.abs(R), np.eye(2)) or np.allclose(np.abs(R), np.eye(2)[::-1]):
        # axis-aligned: keep identity orientation so separable phases stay separable
        if abs(R[0, 1]) > 0.5:
            rho = rho[::-1]
        R = np.eye(2)
    return LocalizedAmplitude(point, rho, R, weight)


def degenerate_curve_points(phi, inner: float, outer: float, n_circles: int = 5,
                            n_angles: int = 720) -> list[np.ndarray]:
    """Points with det D^2 phi = 0 on a few circles inside the annulus."""
    fp = FloatPolynomial.from_poly(phi)
    d = PhaseDerivatives(fp)

    def det(x1, x2):
        (a, b), (_, c) = d.hess(x1, x2)
        return a * c - b * b

    pts = []
    for r in np.linspace(inner + 0.1 * (outer - inner), outer - 0.1 * (outer - inner), n_circles):
        t = np.linspace(0, 2 * np.pi, n_angles, endpoint=False)
        v = np.abs(det(r * np.cos(t), r * np.sin(t)))
        scale = float(v.max()) or 1.0
        for i in range(n_angles):
            if v[i] <= v[i - 1] and v[i] <= v[(i + 1) % n_angles]:
                lo, hi = t[i] - 2 * np.pi / n_angles, t[i] + 2 * np.pi / n_angles
                res = minimize_scalar(lambda a: abs(det(r * math.cos(a), r * math.sin(a))),
                                      bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
                if res.fun <= 1e-7 * scale:
                    p = np.array([r * math.cos(res.x), r * math.sin(res.x)])
                    if all(np.linalg.norm(p - q) > 1e-6 for q in pts):
                        pts.append(p)
    return pts


def degenerate_seeds(phi, inner: float, outer: float, **kw) -> list[tuple[float, float]]:
    """Directions s = -grad phi(x*) for x* on the degenerate curve."""
    fp = FloatPolynomial.from_poly(phi)
    d = PhaseDerivatives(fp)
    seeds = []
    for p in degenerate_curve_points(phi, inner, outer, **kw):
        g = d.grad(p[0], p[1])
        seeds.append((-float(g[0]), -float(g[1])))
    return seeds


@dataclass
class ScanEntry:
    s: tuple
    point: Optional[tuple]
    fit: Optional[DecayFit]
    status: str  # fitted | super-polynomial | low-r2 | budget
    neighbours: tuple = ()  # centres of all clusters for this direction
    members: tuple = ()  # critical points in this cluster


@dataclass
class WorstCase:
    s_star: Optional[tuple]
    fit: Optional[DecayFit]
    entries: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.s_star, self.fit))


def cluster_points(pts, radius: float = 0.35) -> list[tuple[np.ndarray, tuple]]:
    """Single-linkage clusters of points closer than ``radius``: (centroid, members)."""
    pts = [np.asarray(p, float) for p in pts]
    label = list(range(len(pts)))

    def root(i):
        while label[i] != i:
            i = label[i]
        return i

    for i in range(len(pts)):
        for j in range(i):
            if np.linalg.norm(pts[i] - pts[j]) < radius:
                label[root(i)] = root(j)
    groups: dict[int, list] = {}
    for i in range(len(pts)):
        groups.setdefault(root(i), []).append(pts[i])
    out = []
    for members in groups.values():
        c = np.mean(members, axis=0)
        out.append((c, tuple(tuple(map(float, m)) for m in members)))
    out.sort(key=lambda t: (round(t[0][0], 9), round(t[0][1], 9)))
    return out


def critical_clusters(phi, s, amp: AmplitudeSpec, radius: float = 0.35):
    return cluster_points(critical_points(phi, s, amp.support_box(), amp), radius)


def cluster_amplitude(phi, s, amp: AmplitudeSpec, center, members, centers) -> LocalizedAmplitude:
    """Localized amplitude covering one cluster, weighted by ``amp`` at its centre."""
    extent = max((float(np.linalg.norm(np.asarray(m) - center)) for m in members), default=0.0)
    others = [c for c in centers if np.linalg.norm(np.asarray(c) - center) > 1e-9]
    w = max(float(amp(center[0], center[1])), max(float(amp(*m)) for m in members), 1e-300)
    return localize(phi, s, center, weight=w, others=others, extent=extent)


def _local_fits(phi, amp, s, lambdas, cfg) -> list[ScanEntry]:
    out = []
    clusters = critical_clusters(phi, s, amp)
    if not clusters:
        return [ScanEntry(tuple(s), None, None, "super-polynomial")]
    centers = tuple(tuple(map(float, c)) for c, _ in clusters)
    for c, members in clusters:
        loc = cluster_amplitude(phi, s, amp, c, members, centers)
        point = tuple(map(float, c))
        try:
            fit = _direct_fit(phi, loc, s, lambdas, cfg, "auto")
        except DegenerateFit:
            out.append(ScanEntry(tuple(s), point, None, "super-polynomial", centers, members))
            continue
        except BudgetExceeded:
            out.append(ScanEntry(tuple(s), point, None, "budget", centers, members))
            continue
        fit.critical_point = point
        out.append(ScanEntry(tuple(s), point, fit, "fitted", centers, members))
    return out


def s_grid(resolution: int = 41, half_width: float = 4.0) -> list[tuple[float, float]]:
    t = np.linspace(-half_width, half_width, resolution)
    return [(float(a), float(b)) for a in t for b in t]


def hessian_degeneracy(phi, point) -> float:
    """|det H| / |H|_F^2 at ``point``: 0 on the degenerate curve, 1/2 for a multiple of the identity."""
    fp = FloatPolynomial.from_poly(phi)
    (a, b), (_, c) = PhaseDerivatives(fp).hess(point[0], point[1])
    fro = a * a + 2 * b * b + c * c
    return abs(a * c - b * b) / fro if fro > 0 else 0.0


def worst_case_decay(phi, amp: AmplitudeSpec, s_candidates: Iterable = (), lambdas=DEFAULT_LAMBDAS,
                     cfg: Optional[QuadConfig] = None, seeds: Iterable = (), auto_seeds: bool = True,
                     screen_lambdas=SCREEN_LAMBDAS, screen_top: int = 24, top: int = 3,
                     r2_min: float = 0.98, workers: int = 1, degenerate_below: float = 0.02) -> WorstCase:
    """Smallest fitted exponent over candidate directions.

    Each direction is reduced to its critical points inside the support of
    ``amp``.  The critical points are ranked by :func:`hessian_degeneracy`;
    clusters of seeded directions with degeneracy below ``degenerate_below``
    are fitted on ``lambdas`` directly.  The rest of the seeded clusters and
    the ``screen_top`` most degenerate grid clusters get a quick fit on
    ``screen_lambdas``, and the ``top`` slowest of those are fitted on
    ``lambdas`` as well.  Fits with r^2 below
    ``r2_min`` are redone on a half-dyadic grid and dropped if still poor.
    """
    cfg = cfg or QuadConfig()
    phi = _as_poly(phi)
    seeded = [tuple(map(float, s)) for s in seeds]
    if auto_seeds and hasattr(amp, "inner") and hasattr(amp, "outer"):
        seeded += degenerate_seeds(phi, amp.inner, amp.outer)
    grid = [tuple(map(float, s)) for s in s_candidates]

    def dedup(items):
        out = []
        for s in items:
            if all(abs(s[0] - t[0]) > 1e-12 or abs(s[1] - t[1]) > 1e-12 for t in out):
                out.append(s)
        return out

    seeded = dedup(seeded)
    grid = [s for s in dedup(grid) if s not in seeded]
    entries: list[ScanEntry] = []
    pool = []  # (degeneracy, seeded first, s, point, neighbours)
    for rank, s in enumerate(seeded + grid):
        clusters = critical_clusters(phi, s, amp)
        if not clusters:
            entries.append(ScanEntry(s, None, None, "super-polynomial"))
            continue
        nb = tuple(tuple(map(float, c)) for c, _ in clusters)
        for c, members in clusters:
            degeneracy = min(hessian_degeneracy(phi, m) for m in members)
            if len(members) > 1:
                degeneracy = 0.0  # coalescing critical points sit next to the degenerate curve
            pool.append((0 if rank < len(seeded) else 1, degeneracy, s, tuple(map(float, c)), nb, members))
    pool.sort(key=lambda t: (t[1], t[2], t[3]))
    # seeded clusters on the degenerate curve skip screening: short grids misjudge folds
    direct = [t for t in pool if t[0] == 0 and t[1] < degenerate_below]
    rest = [t for t in pool if t not in direct]
    chosen = [t for t in rest if t[0] == 0] + [t for t in rest if t[0] == 1][:screen_top]

    def quick(item):
        _, _, s, p, nb, members = item
        loc = cluster_amplitude(phi, s, amp, np.asarray(p), members, nb)
        try:
            fit = _direct_fit(FloatPolynomial.from_poly(phi), loc, s, list(screen_lambdas), cfg, "auto")
        except DegenerateFit:
            return ScanEntry(s, p, None, "super-polynomial", nb, members)
        except BudgetExceeded:
            return ScanEntry(s, p, None, "budget", nb, members)
        fit.critical_point = p
        return ScanEntry(s, p, fit, "screened", nb, members)

    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            screened = list(ex.map(quick, chosen))
    else:
        screened = [quick(t) for t in chosen]
    entries += screened
    ranked = sorted((e for e in screened if e.fit is not None), key=lambda e: (e.fit.gamma_hat, e.s))
    todo = [ScanEntry(t[2], t[3], None, "seeded", t[4], t[5]) for t in direct] + ranked[:top]
    finals = []
    for e in todo:
        loc = cluster_amplitude(phi, e.s, amp, np.asarray(e.point), e.members, e.neighbours)
        try:
            fit = decay_fit(phi, loc, e.s, lambdas, cfg, min_points=2)
            if fit.r2 < r2_min:
                lam = np.asarray(list(lambdas), float)
                dense = tuple(np.exp(np.linspace(np.log(lam[0]), np.log(lam[-1]), 2 * len(lam) - 1)))
                fit = decay_fit(phi, loc, e.s, dense, cfg, min_points=2)
        except (DegenerateFit, BudgetExceeded) as exc:
            finals.append(ScanEntry(e.s, e.point, None, type(exc).__name__, e.neighbours, e.members))
            continue
        fit.critical_point = e.point
        status = "fitted"
        if fit.r2 < r2_min:
            fit.note = "excluded: r2 below threshold after refinement"
            status = "low-r2"
        finals.append(ScanEntry(e.s, e.point, fit, status, e.neighbours, e.members))
    entries += finals
    good = [e for e in finals if e.status == "fitted"]
    if not good:
        return WorstCase(None, None, entries)
    best = min(good, key=lambda e: e.fit.gamma_hat)
    return WorstCase(best.s, best.fit, entries)


# ---------------------------------------------------------------------------


def gamma_condition_report(report_or_d, gamma) -> tuple[bool, Fraction]:
    """Exact test of d >= 1 + 1/(2 gamma); returns (verdict, margin)."""
    d = getattr(report_or_d, "d", report_or_d)
    d = Fraction(d)
    g = Fraction(gamma)
    margin = d - 1 - 1 / (2 * g)
    return margin >= 0, margin


def predicted_gamma(report) -> Optional[Fraction]:
    """Decay exponent attached to a classified type (None where none is claimed)."""
    lab = report.type_label
    table = {"E6": Fraction(3, 4), "E7": Fraction(5, 6), "E8": Fraction(7, 10), "D4minus": Fraction(1)}
    if lab in table:
        return table[lab]
    if report.family == "D" and report.n is not None and lab != "D4plus":
        if report.adapted_input and report.m_status == "exact" and report.n == 2 * report.m + 1:
            return Fraction(3, 4)
        return Fraction(5, 6)
    if report.family == "A" and report.n is not None:
        return Fraction(1, 2) + Fraction(1, report.n)
    return None


def vdc_check(phase, k: int, lambdas=DEFAULT_LAMBDAS, cfg: Optional[QuadConfig] = None,
              support=(-1.0, 1.0), flat: float = 0.25) -> DecayFit:
    """Decay of int exp(i lambda g(t)) chi(t) dt against 1/k for a flat-top bump chi."""
    if k not in (2, 3, 4):
        raise ValueError("derivative order must be 2, 3 or 4")
    cfg = cfg or QuadConfig()
    lam = _check_grid(lambdas)
    if callable(phase):
        g = phase
        dg = lambda t, h=1e-6: (g(t + h) - g(t - h)) / (2 * h)
    else:
        cs = [float(c) for c in phase]
        g = lambda t: np.polyval(cs[::-1], t)
        dcs = [i * c for i, c in enumerate(cs)][1:]
        dg = lambda t: np.polyval(dcs[::-1], t) if dcs else 0 * t
    a, b = support
    chi = lambda t: plateau(t, a, b, flat * (b - a) / 2)
    tt = np.linspace(a, b, 4001)
    gmax = float(np.max(np.abs(dg(tt)))) * 1.05 + 1e-12
    vals = [abs(integrate_1d(lambda t, L=L: np.exp(1j * L * g(t)) * chi(t), a, b, L * gmax, cfg)) for L in lam]
    slope, r2 = loglog_fit(lam, vals)
    return DecayFit((0.0, 0.0), tuple(lam), tuple(vals), -slope, r2, Fraction(1, k), 0.03)
