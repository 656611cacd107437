"""Newton polyhedra of bivariate polynomials, with exact rational geometry."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .errors import EmptyPolynomial, NotSupportingLine, PrincipalFaceNotEdge
from .poly import Polynomial, _as_poly, as_fraction

Point = tuple[int, int]


@dataclass(frozen=True)
class Weight:
    """A weight (k1, k2) with k1 <= k2.

    ``permuted`` records that the axes were swapped to reach k1 <= k2, so the
    weight as seen in the caller's coordinates is :meth:`oriented`.
    """

    k1: Fraction
    k2: Fraction
    permuted: bool = False

    def __post_init__(self):
        object.__setattr__(self, "k1", as_fraction(self.k1))
        object.__setattr__(self, "k2", as_fraction(self.k2))
        if self.k1 <= 0 or self.k2 <= 0:
            raise ValueError("weights must be positive")

    @classmethod
    def normalized(cls, w1, w2) -> "Weight":
        w1, w2 = as_fraction(w1), as_fraction(w2)
        if w1 > w2:
            return cls(w2, w1, True)
        return cls(w1, w2, False)

    def oriented(self) -> tuple[Fraction, Fraction]:
        """Weights in the orientation of the input coordinates."""
        return (self.k2, self.k1) if self.permuted else (self.k1, self.k2)

    @property
    def norm(self) -> Fraction:
        return self.k1 + self.k2

    def degree(self, alpha: Point) -> Fraction:
        w1, w2 = self.oriented()
        return w1 * alpha[0] + w2 * alpha[1]

    def as_tuple(self) -> tuple[Fraction, Fraction]:
        return (self.k1, self.k2)

    def __str__(self):
        return f"({self.k1}, {self.k2})" + (" [axes swapped]" if self.permuted else "")


@dataclass(frozen=True)
class PrincipalFace:
    """``kind`` is 'vertex', 'edge', 'horizontal-ray' or 'vertical-ray'.

    ``points`` holds the vertex, the edge endpoints, or the ray's base vertex.
    """

    kind: str
    points: tuple[Point, ...]

    @property
    def is_compact_edge(self) -> bool:
        return self.kind == "edge"

    @property
    def is_unbounded(self) -> bool:
        return self.kind in ("horizontal-ray", "vertical-ray")


@dataclass(frozen=True)
class NewtonData:
    vertices: tuple[Point, ...]
    compact_edges: tuple[tuple[Point, Point], ...]
    has_horizontal_ray: bool
    has_vertical_ray: bool
    distance: Fraction
    principal_face: PrincipalFace
    principal_weight: Optional[Weight] = None
    support: frozenset = field(default_factory=frozenset, compare=False)

    def contains(self, t) -> bool:
        """Membership of a (rational) point in the polyhedron."""
        t1, t2 = as_fraction(t[0]), as_fraction(t[1])
        v = self.vertices
        if t1 < v[0][0] or t2 < v[-1][1]:
            return False
        for (a1, b1), (a2, b2) in self.compact_edges:
            # the polyhedron lies on the side of the edge away from the origin
            if (a2 - a1) * (t2 - b1) - (b2 - b1) * (t1 - a1) < 0:
                return False
        return True

    def on_boundary(self, t) -> bool:
        if not self.contains(t):
            return False
        e = Fraction(1, 10**9)
        return not self.contains((t[0] - e, t[1] - e))


def minimal_points(points: Iterable[Point]) -> list[Point]:
    """Pareto-minimal points sorted by increasing t1 (hence decreasing t2)."""
    pts = sorted(set(points))
    out: list[Point] = []
    best_t2 = None
    for a, b in pts:
        if best_t2 is None or b < best_t2:
            out.append((a, b))
            best_t2 = b
    return out


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_vertices(points: Iterable[Point]) -> list[Point]:
    """Vertices of the Newton polyhedron: monotone chain over the Pareto front."""
    chain: list[Point] = []
    for p in minimal_points(points):
        # keep only strict left turns (convex from below); collinear points are dropped
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= 0:
            chain.pop()
        chain.append(p)
    return chain


def edge_distance(v: Point, w: Point) -> Fraction:
    """t-coordinate where the bisectrix meets the line through v and w."""
    (a1, b1), (a2, b2) = v, w
    return Fraction(a1 * (b2 - b1) - b1 * (a2 - a1), (b2 - b1) - (a2 - a1))


def edge_weight(v: Point, w: Point) -> tuple[Fraction, Fraction]:
    """(w1, w2) with w1*t1 + w2*t2 = 1 on the line through v and w (input orientation)."""
    (a1, b1), (a2, b2) = v, w
    det = a2 * b1 - a1 * b2
    if det == 0:
        raise ValueError("edge line passes through the origin")
    return Fraction(b1 - b2, det), Fraction(a2 - a1, det)


def newton_polyhedron(p) -> NewtonData:
    p = _as_poly(p)
    if p.is_zero():
        raise EmptyPolynomial("the zero polynomial has no Newton polyhedron")
    verts = newton_vertices(p.support)
    edges = tuple(zip(verts, verts[1:]))
    first, last = verts[0], verts[-1]
    horiz = last[1] > 0
    vert = first[0] > 0

    face = None
    d = None
    for v in verts:
        if v[0] == v[1]:
            face = PrincipalFace("vertex", (v,))
            d = Fraction(v[0])
            break
    if face is None:
        for v, w in edges:
            if v[1] - v[0] > 0 and w[1] - w[0] < 0:
                face = PrincipalFace("edge", (v, w))
                d = edge_distance(v, w)
                break
    if face is None:
        if all(b > a for a, b in verts):
            face = PrincipalFace("horizontal-ray", (last,))
            d = Fraction(last[1])
        else:
            face = PrincipalFace("vertical-ray", (first,))
            d = Fraction(first[0])
    weight = None
    if face.kind == "edge":
        weight = Weight.normalized(*edge_weight(*face.points))
    return NewtonData(tuple(verts), edges, horiz, vert, d, face, weight, p.support)


def principal_weight(nd: NewtonData) -> Weight:
    if nd.principal_face.kind != "edge" or nd.principal_weight is None:
        raise PrincipalFaceNotEdge(f"principal face is a {nd.principal_face.kind}")
    return nd.principal_weight


def kappa_degree_split(p, kappa: Weight) -> tuple[Polynomial, Polynomial]:
    """Split ``p`` into its terms of kappa-degree 1 and the rest.

    Terms below the line kappa.t = 1 would make the split meaningless, so they
    raise NotSupportingLine.
    """
    p = _as_poly(p)
    low = [e for e in p.support if kappa.degree(e) < 1]
    if low:
        raise NotSupportingLine(f"terms {sorted(low)} lie below the line of weight {kappa}")
    principal = p.filter(lambda e: kappa.degree(e) == 1)
    return principal, p - principal


def kappa_principal_part(p, kappa: Weight) -> Polynomial:
    principal, _ = kappa_degree_split(p, kappa)
    if principal.is_zero():
        raise NotSupportingLine(f"no term lies on the line of weight {kappa}")
    return principal


def principal_part(p, nd: NewtonData | None = None) -> Polynomial:
    """Sum of the terms of ``p`` lying on its principal face."""
    p = _as_poly(p)
    nd = nd or newton_polyhedron(p)
    f = nd.principal_face
    if f.kind == "vertex":
        (v,) = f.points
        return p.filter(lambda e: e == v)
    if f.kind == "edge":
        return kappa_principal_part(p, nd.principal_weight)
    (v,) = f.points
    if f.kind == "horizontal-ray":
        return p.filter(lambda e: e[1] == v[1] and e[0] >= v[0])
    return p.filter(lambda e: e[0] == v[0] and e[1] >= v[1])


def is_kappa_homogeneous(P, kappa: Weight, degree=1) -> bool:
    P = _as_poly(P)
    return not P.is_zero() and all(kappa.degree(e) == degree for e in P.support)
