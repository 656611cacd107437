from fractions import Fraction as F

import pytest

from newtonsing.errors import EmptyPolynomial, NotSupportingLine, PrincipalFaceNotEdge
from newtonsing.newton import (Weight, is_kappa_homogeneous, kappa_degree_split, kappa_principal_part,
                               newton_polyhedron, principal_part, principal_weight)
from newtonsing.poly import Polynomial

from oracles import hull_vertices, newton_distance

x1, x2 = Polynomial.x1(), Polynomial.x2()


def from_support(points):
    return Polynomial({p: 1 for p in points})


def test_polyhedron_a2():
    nd = newton_polyhedron(x2**2 + x1**3)
    assert nd.vertices == ((0, 2), (3, 0))
    assert nd.compact_edges == (((0, 2), (3, 0)),)
    assert nd.distance == F(6, 5)
    assert nd.principal_face.kind == "edge"
    assert not nd.has_horizontal_ray and not nd.has_vertical_ray


def test_polyhedron_vertex_face():
    nd = newton_polyhedron(x1**2 * x2**2)
    assert nd.vertices == ((2, 2),)
    assert nd.principal_face.kind == "vertex" and nd.distance == 2
    assert nd.principal_weight is None
    with pytest.raises(PrincipalFaceNotEdge):
        principal_weight(nd)


def test_polyhedron_collinear_and_dominated():
    nd = newton_polyhedron(from_support([(0, 2), (2, 1), (4, 0), (5, 0)]))
    assert nd.vertices == ((0, 2), (4, 0))
    assert nd.distance == F(4, 3)
    assert nd.on_boundary((2, 1)) and nd.contains((5, 0))


def test_empty_polynomial():
    with pytest.raises(EmptyPolynomial):
        newton_polyhedron(Polynomial())


def test_unbounded_principal_face():
    nd = newton_polyhedron(x1 * x2**3 + x1**2 * x2**4)
    assert nd.principal_face.kind == "horizontal-ray"
    assert nd.distance == 3 and nd.has_horizontal_ray


@pytest.mark.parametrize("p, kappa", [
    (x2**3 + x1**4, (F(1, 4), F(1, 3))),
    (x2**3 + x1**3 * x2, (F(2, 9), F(1, 3))),
    (x1 * x2**2 + x1**3, (F(1, 3), F(1, 3))),
])
def test_principal_weight_examples(p, kappa):
    w = principal_weight(newton_polyhedron(p))
    assert w.as_tuple() == kappa
    assert newton_polyhedron(p).distance == 1 / w.norm


def test_principal_weight_permuted():
    w = principal_weight(newton_polyhedron(x1**3 + x2**4))
    assert w.as_tuple() == (F(1, 4), F(1, 3)) and w.permuted
    assert w.oriented() == (F(1, 3), F(1, 4))


def test_kappa_principal_part_examples():
    k = Weight(F(1, 3), F(1, 3))
    assert kappa_principal_part(x1 * x2**2 + x1**3 + x1**7, k) == x1 * x2**2 + x1**3
    assert kappa_principal_part(x2**2 + x1**3, Weight(F(1, 3), F(1, 2))) == x2**2 + x1**3
    p = x2**2 - 2 * x1**2 * x2 + x1**4 + x1**5
    assert kappa_principal_part(p, Weight(F(1, 4), F(1, 2))) == (x2 - x1**2) ** 2
    with pytest.raises(NotSupportingLine):
        kappa_principal_part(x2**2 + x1**3, Weight(F(1, 4), F(1, 2)))


def test_kappa_degree_split_examples():
    k = Weight(F(1, 3), F(1, 3))
    assert kappa_degree_split(x1 * x2**2 + x1**3 + x1**7, k) == (x1 * x2**2 + x1**3, x1**7)
    assert kappa_degree_split(x1**3, k) == (x1**3, Polynomial())
    assert kappa_degree_split(x2**2 + x1**5, Weight(F(1, 4), F(1, 2))) == (x2**2, x1**5)


def test_principal_part_homogeneous():
    for p in (x2**3 + x1**3 * x2 + x1**9, (x2 - x1**2) ** 2 + x1**5, x1 * x2**2 + x1**6):
        nd = newton_polyhedron(p)
        P = principal_part(p, nd)
        assert is_kappa_homogeneous(P, nd.principal_weight)
        # delta_r dilation with r = 2^N for N clearing the weight denominators
        k1, k2 = nd.principal_weight.oriented()
        N = k1.denominator * k2.denominator
        r = F(2) ** N
        scaled = Polynomial({e: c * r ** (k1 * e[0] + k2 * e[1]) for e, c in P.items()})
        assert scaled == P * r


def test_vertices_in_support_and_support_inside():
    p = x2**5 + x1 * x2**3 + x1**3 * x2 + x1**7 + x1**4 * x2**4
    nd = newton_polyhedron(p)
    assert set(nd.vertices) <= set(p.support)
    assert all(nd.contains(t) for t in p.support)
    assert nd.distance == newton_distance(p.support)
    assert list(nd.vertices) == hull_vertices(p.support)
