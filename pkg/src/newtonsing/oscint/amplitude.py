"""Amplitude functions for oscillatory integrals.

Compactly supported amplitudes use the smooth step built from exp(-1/t),
which is C-infinity.  ``LocalizedAmplitude`` is an entire function
(a rotated super-Gaussian) and can be evaluated at complex points, which the
contour-deformation quadrature needs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..poly import Polynomial, _as_poly


def smoothstep(t):
    """0 for t <= 0, 1 for t >= 1, C-infinity in between."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        f0 = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        s = 1.0 - t
        f1 = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
    return f0 / (f0 + f1)


def plateau(x, lo, hi, width):
    """1 on [lo+width, hi-width], 0 outside [lo, hi], smooth ramps of the given width."""
    return smoothstep((x - lo) / width) * smoothstep((hi - x) / width)


class AmplitudeSpec:
    kind = "abstract"
    analytic = False
    separable = False

    def __call__(self, x1, x2):
        raise NotImplementedError

    def support_box(self) -> tuple[float, float, float, float]:
        raise NotImplementedError

    def contains(self, x1, x2) -> bool:
        """True where the amplitude is (strictly) positive."""
        return bool(self(np.asarray(x1, float), np.asarray(x2, float)) > 0)


@dataclass
class AnnulusAmplitude(AmplitudeSpec):
    inner: float = 0.5
    outer: float = 2.0
    width: Optional[float] = None
    kind = "annulus"

    def __post_init__(self):
        if not 0 <= self.inner < self.outer:
            raise ValueError("need 0 <= inner < outer")
        if self.width is None:
            self.width = (self.outer - self.inner) / 5
        if not 0 < self.width < (self.outer - self.inner) / 4:
            raise ValueError("transition width must be below a quarter of the annulus width")

    def __call__(self, x1, x2):
        r = np.hypot(x1, x2)
        return plateau(r, self.inner, self.outer, self.width)

    def support_box(self):
        R = self.outer
        return (-R, R, -R, R)


@dataclass
class BoxAmplitude(AmplitudeSpec):
    """Product of 1-D plateaus: 1 on the inner box, zero outside the box of half-size ``radius``."""

    center: tuple = (0.0, 0.0)
    radius: float = 1.0
    width: Optional[float] = None
    kind = "box"
    separable = True

    def __post_init__(self):
        if self.width is None:
            self.width = self.radius / 4
        if not 0 < self.width < self.radius / 2:
            raise ValueError("transition width must be below half the radius")

    def factor(self, i: int):
        c = float(self.center[i])
        return lambda t: plateau(t, c - self.radius, c + self.radius, self.width)

    def __call__(self, x1, x2):
        return self.factor(0)(x1) * self.factor(1)(x2)

    def support_box(self):
        c1, c2 = map(float, self.center)
        r = self.radius
        return (c1 - r, c1 + r, c2 - r, c2 + r)


@dataclass
class CollarAmplitude(AmplitudeSpec):
    """Annulus amplitude cut to one side of the curve |x2 - psi(x1)| = eps |x1|^m.

    ``side='exterior'`` keeps |x2 - psi(x1)| >= eps |x1|^m, ``'interior'`` the
    complement; the cut is smoothed in the ratio |x2 - psi|/(eps |x1|^m).
    """

    psi: object = None
    eps: float = 0.1
    m: int = 2
    inner: float = 0.5
    outer: float = 2.0
    side: str = "exterior"
    width: Optional[float] = None
    kind = "collar"

    def __post_init__(self):
        if self.side not in ("exterior", "interior"):
            raise ValueError("side must be 'exterior' or 'interior'")
        self._annulus = AnnulusAmplitude(self.inner, self.outer, self.width)
        psi = Polynomial() if self.psi is None else _as_poly(self.psi)
        self._psi = [(a, float(c)) for (a, _), c in psi.items()]

    def psi_value(self, x1):
        return sum(c * np.asarray(x1, float) ** a for a, c in self._psi) if self._psi else np.zeros_like(np.asarray(x1, float))

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, float)
        x2 = np.asarray(x2, float)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.abs(x2 - self.psi_value(x1)) / (self.eps * np.abs(x1) ** self.m)
        ratio = np.where(np.isfinite(ratio), ratio, 1e300)
        # smooth cut between ratio 1/2 and 1
        ext = smoothstep(2 * ratio - 1)
        cut = ext if self.side == "exterior" else 1 - ext
        return self._annulus(x1, x2) * cut

    def support_box(self):
        return self._annulus.support_box()


class LocalizedAmplitude(AmplitudeSpec):
    """exp(-sum_i (u_i/rho_i)^4) with u = R (x - center); entire in x.

    ``R`` is an orthogonal 2x2 matrix whose rows are the local axes.
    """

    kind = "localized"
    analytic = True
    cutoff = 45.0  # exp(-45) is negligible against any value we fit

    def __init__(self, center, rho=(1.0, 1.0), R=None, weight: float = 1.0):
        self.center = np.asarray(center, dtype=float)
        self.rho = np.asarray(rho, dtype=float)
        self.R = np.eye(2) if R is None else np.asarray(R, dtype=float)
        self.weight = float(weight)
        if np.any(self.rho <= 0):
            raise ValueError("rho must be positive")

    def local(self, z1, z2):
        d1 = z1 - self.center[0]
        d2 = z2 - self.center[1]
        u1 = self.R[0, 0] * d1 + self.R[0, 1] * d2
        u2 = self.R[1, 0] * d1 + self.R[1, 1] * d2
        return u1, u2

    def __call__(self, z1, z2):
        u1, u2 = self.local(z1, z2)
        return self.weight * np.exp(-((u1 / self.rho[0]) ** 4) - (u2 / self.rho[1]) ** 4)

    @property
    def separable(self) -> bool:
        return bool(np.allclose(self.R, np.eye(2)))

    def factor(self, i: int):
        c, r = self.center[i], self.rho[i]
        w = self.weight if i == 0 else 1.0
        return lambda t: w * np.exp(-(((t - c) / r) ** 4))

    def half_widths(self):
        return self.rho * self.cutoff ** 0.25

    def support_box(self):
        L = self.half_widths()
        corners = np.array([[sx * L[0], sy * L[1]] for sx in (-1, 1) for sy in (-1, 1)])
        pts = corners @ self.R + self.center
        return (pts[:, 0].min(), pts[:, 0].max(), pts[:, 1].min(), pts[:, 1].max())

    def __repr__(self):
        return f"LocalizedAmplitude(center={self.center.tolist()}, rho={self.rho.tolist()})"


def amplitude_from_dict(d: dict) -> AmplitudeSpec:
    kind = d.get("kind", "annulus")
    if kind == "annulus":
        return AnnulusAmplitude(float(d.get("inner", 0.5)), float(d.get("outer", 2.0)),
                                None if d.get("width") is None else float(d["width"]))
    if kind == "box":
        return BoxAmplitude(tuple(float(v) for v in d.get("center", (0, 0))), float(d.get("radius", 1.0)),
                            None if d.get("width") is None else float(d["width"]))
    if kind == "localized":
        return LocalizedAmplitude(d["center"], d.get("rho", (1.0, 1.0)))
    raise ValueError(f"unknown amplitude kind {kind!r}")
