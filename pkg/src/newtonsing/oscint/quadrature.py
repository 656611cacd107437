"""Quadrature for J(xi) = int exp(i(xi1 x1 + xi2 x2 + xi3 phi(x))) eta(x) dx.

Three routes, chosen by :func:`osc_integral`:

* separable phase with a product amplitude: product of two 1-D integrals;
* analytic (localized) amplitude: the real plane is pushed into C^2 along
  x -> x + i h(x) with h a damped multiple of the phase gradient, which
  leaves the integral unchanged (Cauchy) and turns the oscillation into decay;
* anything else: tensor Gauss panels on which the phase moves by less than
  pi/4, refined by doubling until two successive values agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from ..errors import BudgetExceeded
from .amplitude import AmplitudeSpec, LocalizedAmplitude
from .phase import FloatPolynomial, PhaseDerivatives


@dataclass
class QuadConfig:
    rel_tol: float = 1e-6
    panel_budget: int = 1_000_000
    gauss_order: int = 4  # nodes per panel side for the phase-variation route
    adaptive_order: int = 6  # nodes per side for the adaptive routes
    line_order: int = 12  # nodes per panel for 1-D factors of separable integrals
    max_phase_step: float = math.pi / 4
    min_panels: int = 16  # per side, phase-variation route


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _fsum_complex(values) -> complex:
    v = np.asarray(values).ravel()
    return complex(math.fsum(v.real), math.fsum(v.imag))


# ---------------------------------------------------------------------------
# 1-D integrals


def _equidistributed_edges(a: float, b: float, local_freq: Callable, step: float, min_panels: int) -> np.ndarray:
    """Panel edges with roughly ``step`` of phase variation per panel."""
    t = np.linspace(a, b, 20001)
    dens = np.abs(local_freq(t)) * 1.05 / step + min_panels / (b - a)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(t))])
    n = max(min_panels, int(math.ceil(cum[-1])))
    return np.interp(np.linspace(0.0, cum[-1], n + 1), cum, t)


def integrate_1d(f: Callable, a: float, b: float, max_freq, cfg: QuadConfig,
                 order: Optional[int] = None) -> complex:
    """Composite Gauss rule with panels short enough for the local frequency, refined by doubling.

    ``max_freq`` is either a bound on |phase'| over [a, b] or a callable giving
    the local |phase'|; the latter grades the panels.
    """
    x, w = gauss_legendre(order or cfg.gauss_order)
    if callable(max_freq):
        edges = _equidistributed_edges(a, b, max_freq, cfg.max_phase_step, cfg.min_panels)
    else:
        n = max(cfg.min_panels, int(math.ceil((b - a) * max_freq / cfg.max_phase_step)))
        edges = np.linspace(a, b, n + 1)

    def rule(edges):
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        nodes = mid[:, None] + half[:, None] * x[None, :]
        return _fsum_complex(f(nodes) * (half[:, None] * w[None, :])), mid

    prev = None
    while True:
        n = len(edges) - 1
        if n > cfg.panel_budget:
            panels = n // 2
            if prev is None:
                panels = cfg.panel_budget
                prev, _ = rule(np.linspace(a, b, panels + 1))
            raise BudgetExceeded(f"1-D panel count {n} exceeds budget", partial=prev, panels=panels)
        val, mid = rule(edges)
        if prev is not None and abs(val - prev) <= cfg.rel_tol * max(abs(val), 1e-300):
            return val
        if prev is not None and abs(val) < 1e-300 and abs(prev) < 1e-300:
            return val
        prev = val
        edges = np.sort(np.concatenate([edges, mid]))


def separable_integral(phi: FloatPolynomial, amp, xi, cfg: QuadConfig) -> complex:
    f1, f2 = phi.univariate_parts()
    d1, d2 = f1.diff(1), f2.diff(2)
    out = 1.0 + 0j
    lo1, hi1, lo2, hi2 = amp.support_box()
    for i, (f, d, lo, hi) in enumerate(((f1, d1, lo1, hi1), (f2, d2, lo2, hi2))):
        fac = amp.factor(i)
        xi_lin = xi[i]
        if i == 0:
            ph = lambda t, f=f, xl=xi_lin: xl * t + xi[2] * f(t, 0 * t)
            dph = lambda t, d=d, xl=xi_lin: xl + xi[2] * d(t, 0 * t)
        else:
            ph = lambda t, f=f, xl=xi_lin: xl * t + xi[2] * f(0 * t, t)
            dph = lambda t, d=d, xl=xi_lin: xl + xi[2] * d(0 * t, t)
        out *= integrate_1d(lambda t, ph=ph, fac=fac: np.exp(1j * ph(t)) * fac(t), lo, hi, dph, cfg, cfg.line_order)
    return out


# ---------------------------------------------------------------------------
# 2-D adaptive cubature on rectangles


def _panel_estimates(f, panels: np.ndarray, order: int, chunk: int = 20_000) -> np.ndarray:
    if len(panels) > chunk:
        # bounded memory: the integrands allocate a few dozen temporaries per node
        return np.concatenate([_panel_estimates(f, panels[i:i + chunk], order, chunk)
                               for i in range(0, len(panels), chunk)])
    x, w = gauss_legendre(order)
    a, b, c, d = panels.T
    m1, h1 = 0.5 * (a + b), 0.5 * (b - a)
    m2, h2 = 0.5 * (c + d), 0.5 * (d - c)
    X1 = m1[:, None, None] + h1[:, None, None] * x[None, :, None]
    X2 = m2[:, None, None] + h2[:, None, None] * x[None, None, :]
    X1, X2 = np.broadcast_arrays(X1, X2)
    vals = f(X1, X2)
    W = w[:, None] * w[None, :]
    return np.einsum("pij,ij->p", vals, W) * h1 * h2


def _children(panels: np.ndarray) -> np.ndarray:
    a, b, c, d = panels.T
    mx, my = 0.5 * (a + b), 0.5 * (c + d)
    kids = np.stack([
        np.stack([a, mx, c, my], 1), np.stack([mx, b, c, my], 1),
        np.stack([a, mx, my, d], 1), np.stack([mx, b, my, d], 1)], 1)
    return kids.reshape(-1, 4)


def adaptive_cubature(f, xbreaks, ybreaks, cfg: QuadConfig, tol_abs: float, noise_rel: float = 0.0):
    """Adaptive quadtree Gauss cubature over the tensor grid of the breakpoints.

    A panel is accepted when its estimate agrees with the sum over its four
    children to within its area share of ``tol_abs``, or to within
    ``noise_rel`` times the summed magnitudes of the children (the rounding
    level of the integrand there).  Returns (value, panels used).
    """
    xb = np.asarray(xbreaks, float)
    yb = np.asarray(ybreaks, float)
    A, C = np.meshgrid(xb[:-1], yb[:-1], indexing="ij")
    B, D = np.meshgrid(xb[1:], yb[1:], indexing="ij")
    panels = np.stack([A.ravel(), B.ravel(), C.ravel(), D.ravel()], 1)
    total_area = (xb[-1] - xb[0]) * (yb[-1] - yb[0])
    order = cfg.adaptive_order
    est = _panel_estimates(f, panels, order)
    used = len(panels)
    accepted = []
    while len(panels):
        if used + 4 * len(panels) > cfg.panel_budget:
            partial = _fsum_complex(np.concatenate(accepted + [est]))
            raise BudgetExceeded(f"adaptive cubature exceeded {cfg.panel_budget} panels",
                                 partial=partial, panels=used)
        kids = _children(panels)
        kid_est = _panel_estimates(f, kids, order).reshape(-1, 4)
        used += len(kids)
        fine = kid_est.sum(1)
        area = (panels[:, 1] - panels[:, 0]) * (panels[:, 3] - panels[:, 2])
        ok = np.abs(fine - est) <= tol_abs * area / total_area
        ok |= np.abs(fine - est) <= noise_rel * np.abs(kid_est).sum(1)
        ok |= (panels[:, 1] - panels[:, 0]) < 1e-12
        accepted.append(fine[ok])
        panels = kids.reshape(-1, 4, 4)[~ok].reshape(-1, 4)
        est = kid_est[~ok].ravel()
    return _fsum_complex(np.concatenate(accepted) if accepted else np.zeros(0)), used


# ---------------------------------------------------------------------------
# contour deformation for analytic amplitudes


@dataclass
class Deformation:
    eps: float
    h_max: float


def _graded_breaks(L: float, fine: float) -> np.ndarray:
    k = max(1, int(math.ceil(math.log2(max(L / fine, 2.0)))))
    pos = L * 2.0 ** -np.arange(k + 1)
    return np.concatenate([-pos, [0.0], pos[::-1]])


def _deformed_integrand(theta: PhaseDerivatives, lam: float, amp: LocalizedAmplitude, dfm: Deformation):
    R = amp.R
    c = amp.center
    hm2 = dfm.h_max ** 2

    def f(u1, u2):
        x1 = c[0] + R[0, 0] * u1 + R[1, 0] * u2
        x2 = c[1] + R[0, 1] * u1 + R[1, 1] * u2
        g1, g2 = theta.grad(x1, x2)
        (h11, h12), (_, h22) = theta.hess(x1, x2)
        g2n = g1 * g1 + g2 * g2
        tau = dfm.eps / np.sqrt(1.0 + dfm.eps ** 2 * g2n / hm2)
        k = -(tau ** 3) / hm2
        # grad tau = k * H g
        t1 = k * (h11 * g1 + h12 * g2)
        t2 = k * (h12 * g1 + h22 * g2)
        # Dh = tau H + g (grad tau)^T
        a11 = tau * h11 + g1 * t1
        a12 = tau * h12 + g1 * t2
        a21 = tau * h12 + g2 * t1
        a22 = tau * h22 + g2 * t2
        jac = (1 + 1j * a11) * (1 + 1j * a22) + a12 * a21
        z1 = x1 + 1j * tau * g1
        z2 = x2 + 1j * tau * g2
        return amp(z1, z2) * np.exp(1j * lam * theta.p(z1, z2)) * jac

    return f


def deformed_integral(phi: FloatPolynomial, amp: LocalizedAmplitude, xi, cfg: QuadConfig,
                      dfm: Optional[Deformation] = None):
    """Integral with an analytic amplitude via the deformation x -> x + i h(x)."""
    lam = float(max(abs(xi[2]), math.hypot(xi[0], xi[1]), 1.0))
    theta_poly = phi.scaled(xi[2] / lam).add_linear(xi[0] / lam, xi[1] / lam)
    theta = PhaseDerivatives(theta_poly)
    L = amp.half_widths()
    if dfm is None:
        h_max = 0.25 * float(min(amp.rho))
        # third derivatives where the amplitude is not yet negligible (|u_i| <= 1.5 rho_i);
        # the amplification guard below catches the far tails
        u1, u2 = np.meshgrid(np.linspace(-1.5, 1.5, 31) * amp.rho[0], np.linspace(-1.5, 1.5, 31) * amp.rho[1])
        g1 = amp.center[0] + amp.R[0, 0] * u1 + amp.R[1, 0] * u2
        g2 = amp.center[1] + amp.R[0, 1] * u1 + amp.R[1, 1] * u2
        T = float(np.max(theta.third_norm(g1, g2))) + 1e-12
        eps = min(1.0, 3.0 / (h_max * T))
        dfm = Deformation(eps, h_max)
    fine = 0.3 / math.sqrt(lam)
    xb = _graded_breaks(L[0], fine)
    yb = _graded_breaks(L[1], fine)
    for _ in range(5):
        f = _deformed_integrand(theta, lam, amp, dfm)
        # amplification guard on the initial grid
        gx, gy = np.meshgrid(np.linspace(-L[0], L[0], 61), np.linspace(-L[1], L[1], 61))
        peak = float(np.max(np.abs(f(gx, gy))))
        if peak <= math.e * amp.weight * 4:
            break
        dfm = Deformation(dfm.eps / 2, dfm.h_max / 2)
    rough = abs(complex(np.sum(_panel_estimates(f, _grid_panels(xb, yb), cfg.adaptive_order))))
    # rounding in lam * theta(z) limits what any refinement can resolve
    absf = lambda u1, u2: np.abs(f(u1, u2))
    abs_mass = float(np.real(np.sum(_panel_estimates(absf, _grid_panels(xb, yb), cfg.adaptive_order))))
    # sum of |terms| of theta where the amplitude is above exp(-16)
    term_sizes = FloatPolynomial((a, b, abs(c)) for a, b, c in theta_poly.terms)
    w1, w2 = np.meshgrid(np.linspace(-2, 2, 41) * amp.rho[0], np.linspace(-2, 2, 41) * amp.rho[1])
    y1 = amp.center[0] + amp.R[0, 0] * w1 + amp.R[1, 0] * w2
    y2 = amp.center[1] + amp.R[0, 1] * w1 + amp.R[1, 1] * w2
    theta_mag = float(np.max(term_sizes(np.abs(y1), np.abs(y2))))
    noise = 64 * np.finfo(float).eps * (1.0 + lam * theta_mag)
    floor = noise * abs_mass
    tol = max(cfg.rel_tol * max(rough, 1e-300) * 0.1, floor)
    val, used = adaptive_cubature(f, xb, yb, cfg, tol, noise)
    if abs(val) < 0.1 * rough:
        val, used2 = adaptive_cubature(f, xb, yb, cfg, max(cfg.rel_tol * abs(val) * 0.1 + 1e-300, floor), noise)
        used += used2
    return val, used, dfm


def _grid_panels(xb, yb):
    A, C = np.meshgrid(xb[:-1], yb[:-1], indexing="ij")
    B, D = np.meshgrid(xb[1:], yb[1:], indexing="ij")
    return np.stack([A.ravel(), B.ravel(), C.ravel(), D.ravel()], 1)


# ---------------------------------------------------------------------------
# brute force


def brute_force_integral(phi: FloatPolynomial, amp: AmplitudeSpec, xi, cfg: QuadConfig):
    """Tensor Gauss panels with phase variation below max_phase_step, doubled until stable."""
    lo1, hi1, lo2, hi2 = amp.support_box()
    dph = PhaseDerivatives(phi)
    g1, g2 = np.meshgrid(np.linspace(lo1, hi1, 201), np.linspace(lo2, hi2, 201))
    d1, d2 = dph.grad(g1, g2)
    f1 = float(np.max(np.abs(xi[0] + xi[2] * d1))) * 1.05 + 1e-12
    f2 = float(np.max(np.abs(xi[1] + xi[2] * d2))) * 1.05 + 1e-12
    n1 = max(cfg.min_panels, int(math.ceil((hi1 - lo1) * f1 / cfg.max_phase_step)))
    n2 = max(cfg.min_panels, int(math.ceil((hi2 - lo2) * f2 / cfg.max_phase_step)))
    x, w = gauss_legendre(cfg.gauss_order)

    def integrand(X1, X2):
        return np.exp(1j * (xi[0] * X1 + xi[1] * X2 + xi[2] * phi(X1, X2))) * amp(X1, X2)

    def tensor_sum(n1, n2):
        e1 = np.linspace(lo1, hi1, n1 + 1)
        m1, h1 = 0.5 * (e1[1:] + e1[:-1]), 0.5 * np.diff(e1)
        nodes1 = (m1[:, None] + h1[:, None] * x[None, :]).ravel()
        wts1 = (h1[:, None] * w[None, :]).ravel()
        e2 = np.linspace(lo2, hi2, n2 + 1)
        m2, h2 = 0.5 * (e2[1:] + e2[:-1]), 0.5 * np.diff(e2)
        nodes2 = (m2[:, None] + h2[:, None] * x[None, :]).ravel()
        wts2 = (h2[:, None] * w[None, :]).ravel()
        # row blocks keep memory bounded
        step = max(1, 2_000_000 // len(nodes2))
        parts = []
        for i in range(0, len(nodes1), step):
            X1, X2 = np.meshgrid(nodes1[i:i + step], nodes2, indexing="ij")
            vals = integrand(X1, X2) * wts1[i:i + step, None] * wts2[None, :]
            parts.append(_fsum_complex(vals))
        return _fsum_complex(np.array(parts))

    prev = None
    while True:
        if n1 * n2 > cfg.panel_budget:
            if prev is None:
                # not even one resolved pass fits: report an under-resolved value
                r = math.sqrt(cfg.panel_budget / (n1 * n2))
                c1, c2 = max(1, int(n1 * r)), max(1, int(n2 * r))
                prev, n1, n2 = tensor_sum(c1, c2), 2 * c1, 2 * c2
            raise BudgetExceeded(f"{n1}x{n2} panels exceed budget {cfg.panel_budget}", partial=prev,
                                 panels=(n1 // 2) * (n2 // 2))
        total = tensor_sum(n1, n2)
        if prev is not None and abs(total - prev) <= cfg.rel_tol * max(abs(total), 1e-300):
            return total, n1 * n2
        if prev is not None and abs(total) < 1e-300:
            return total, n1 * n2
        prev = total
        n1 *= 2
        n2 *= 2


def osc_integral(phi, amp: AmplitudeSpec, xi, cfg: Optional[QuadConfig] = None, method: str = "auto") -> complex:
    """J(xi) for a polynomial phase and amplitude; ``method`` is auto|separable|deformed|brute."""
    cfg = cfg or QuadConfig()
    phi = FloatPolynomial.from_poly(phi)
    xi = tuple(float(v) for v in xi)
    if method == "auto":
        if amp.analytic and any(xi):
            method = "deformed"
        elif amp.separable and phi.is_separable:
            method = "separable"
        else:
            method = "brute"
    if method == "separable":
        return separable_integral(phi, amp, xi, cfg)
    if method == "deformed":
        return deformed_integral(phi, amp, xi, cfg)[0]
    if method == "brute":
        return brute_force_integral(phi, amp, xi, cfg)[0]
    raise ValueError(f"unknown method {method!r}")
