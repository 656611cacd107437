"""Deterministic SVG 1.1 drawing of a Newton diagram.

The drawing works directly in exponent coordinates (t1 to the right, t2 up),
so the viewBox is the exponent bounding box enlarged by one unit.  Element
classes: ``grid``, ``polyhedron``, ``edge`` (one per compact edge),
``principal-edge`` (the principal face when it is a compact edge),
``support``, ``bisectrix``, ``distance-marker``.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from xml.sax.saxutils import escape

from ..newton import NewtonData


def _num(x) -> str:
    v = round(float(x), 6)
    if v == int(v):
        return str(int(v))
    return f"{v:.6f}".rstrip("0")


def _pt(t1, t2) -> str:
    return f"{_num(t1)},{_num(-t2)}"


def _rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def newton_svg(nd: NewtonData, title: str = "") -> str:
    pts = list(nd.support) or list(nd.vertices)
    X = max([p[0] for p in pts] + [p[0] for p in nd.vertices] + [nd.distance]) + 1
    Y = max([p[1] for p in pts] + [p[1] for p in nd.vertices] + [nd.distance]) + 1
    X, Y = int(-(-X // 1)), int(-(-Y // 1))
    pad = Fraction(1, 2)
    vb = f"{_num(-pad)} {_num(-Y - pad)} {_num(X + 2 * pad)} {_num(Y + 2 * pad)}"
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{vb}" width="{40 * (X + 1)}" height="{40 * (Y + 1)}">',
    ]
    if title:
        out.append(f"  <title>{escape(title)}</title>")
    out.append('  <g class="grid" stroke="#dddddd" stroke-width="0.02">')
    for i in range(X + 1):
        out.append(f'    <line x1="{i}" y1="0" x2="{i}" y2="{-Y}"/>')
    for j in range(Y + 1):
        out.append(f'    <line x1="0" y1="{-j}" x2="{X}" y2="{-j}"/>')
    out.append("  </g>")
    v = nd.vertices
    poly = [(v[0][0], Y)] + list(v) + [(X, v[-1][1]), (X, Y)]
    out.append('  <polygon class="polyhedron" fill="#cfe3f7" fill-opacity="0.7" stroke="none" points="'
               + " ".join(_pt(*p) for p in poly) + '"/>')
    out.append(f'  <line class="ray" stroke="#1f5fa0" stroke-width="0.04" '
               f'x1="{_num(v[0][0])}" y1="{_num(-v[0][1])}" x2="{_num(v[0][0])}" y2="{-Y}"/>')
    out.append(f'  <line class="ray" stroke="#1f5fa0" stroke-width="0.04" '
               f'x1="{_num(v[-1][0])}" y1="{_num(-v[-1][1])}" x2="{X}" y2="{_num(-v[-1][1])}"/>')
    for a, b in nd.compact_edges:
        out.append(f'  <line class="edge" stroke="#1f5fa0" stroke-width="0.04" '
                   f'x1="{_num(a[0])}" y1="{_num(-a[1])}" x2="{_num(b[0])}" y2="{_num(-b[1])}"/>')
    face = nd.principal_face
    if face.kind == "edge":
        a, b = face.points
        out.append(f'  <line class="principal-edge" stroke="#d62728" stroke-width="0.09" '
                   f'x1="{_num(a[0])}" y1="{_num(-a[1])}" x2="{_num(b[0])}" y2="{_num(-b[1])}"/>')
    for p in sorted(pts):
        out.append(f'  <circle class="support" cx="{_num(p[0])}" cy="{_num(-p[1])}" r="0.08" fill="#333333"/>')
    m = min(X, Y)
    out.append(f'  <line class="bisectrix" stroke="#777777" stroke-width="0.03" stroke-dasharray="0.15,0.1" '
               f'x1="0" y1="0" x2="{m}" y2="{-m}"/>')
    d = nd.distance
    out.append(f'  <circle class="distance-marker" data-d="{_rat(d)}" data-face="{face.kind}" '
               f'cx="{_num(d)}" cy="{_num(-d)}" r="0.12" fill="#d62728"/>')
    out.append(f'  <text class="distance-label" x="{_num(d + Fraction(1, 5))}" y="{_num(-d - Fraction(1, 5))}" '
               f'font-size="0.35" font-family="sans-serif">({_rat(d)}, {_rat(d)})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_newton_svg(nd: NewtonData, path, title: str = "") -> Path:
    path = Path(path)
    path.write_text(newton_svg(nd, title), encoding="utf-8")
    return path
