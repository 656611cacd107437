from fractions import Fraction as F

import pytest

from newtonsing.errors import NotHomogeneous, PreconditionViolated
from newtonsing.homog import (factor_homogeneous, height_of_homogeneous, is_adapted,
                              max_root_multiplicity)
from newtonsing.newton import Weight
from newtonsing.poly import Polynomial

from oracles import chart_orders

x1, x2 = Polynomial.x1(), Polynomial.x2()
CUBIC = Weight(F(1, 3), F(1, 3))


def test_factor_double_parabola():
    P = x2**2 - 2 * x1**2 * x2 + x1**4
    ff = factor_homogeneous(P, Weight(F(1, 4), F(1, 2)))
    assert (ff.constant, ff.nu1, ff.nu2, ff.p, ff.q) == (1, 0, 0, 2, 1)
    assert [(f.coeffs, f.multiplicity, f.real_roots) for f in ff.factors] == [((-1, 1), 2, 1)]
    assert ff.expand() == P


def test_factor_no_real_roots():
    ff = factor_homogeneous(x1 * x2**2 + x1**3, CUBIC)
    assert (ff.nu1, ff.nu2) == (1, 0)
    assert [(f.coeffs, f.multiplicity, f.real_roots) for f in ff.factors] == [((1, 0, 1), 1, 0)]
    assert ff.real_root_multiplicities == []


def test_factor_difference_of_squares():
    ff = factor_homogeneous(x1 * x2**2 - x1**3, CUBIC)
    assert ff.nu1 == 1
    assert sorted(f.coeffs for f in ff.factors) == [(-1, 1), (1, 1)]
    assert all(f.multiplicity == 1 and f.real_roots == 1 for f in ff.factors)
    assert ff.expand() == x1 * x2**2 - x1**3


def test_factor_rejects_inhomogeneous():
    with pytest.raises(NotHomogeneous):
        factor_homogeneous(x2**2 + x1**4, CUBIC)


@pytest.mark.parametrize("P, kappa, n", [
    (x1 * x2**2 + x1**3, CUBIC, 1),
    ((x2 - x1**2) ** 2, Weight(F(1, 4), F(1, 2)), 2),
    (x2**3 + x1**3 * x2, Weight(F(2, 9), F(1, 3)), 1),
    (x1**2 * (x2 - x1) ** 3, Weight(F(1, 5), F(1, 5)), 3),
])
def test_max_root_multiplicity(P, kappa, n):
    assert max_root_multiplicity(P, kappa) == n
    assert chart_orders(P) == n


def test_height_examples():
    hd = height_of_homogeneous(x2**2 + x1**3, Weight(F(1, 3), F(1, 2)))
    assert (hd.d_h, hd.n_P, hd.h) == (F(6, 5), 1, F(6, 5))
    hd = height_of_homogeneous((x2 - x1**2) ** 2, Weight(F(1, 4), F(1, 2)))
    assert (hd.d_h, hd.n_P, hd.h) == (F(4, 3), 2, 2)
    hd = height_of_homogeneous(x1 * x2**2 + x1**3, CUBIC)
    assert (hd.d_h, hd.n_P, hd.h) == (F(3, 2), 1, F(3, 2))


def test_is_adapted_examples():
    hd = is_adapted(x2**2 + x1**3)
    assert hd.adapted and hd.reason == "edge-and-small-multiplicity"
    assert hd.non_integer_ratio  # ratio 3/2 is not an integer
    hd = is_adapted((x2 - x1**2) ** 2 + x1**5)
    assert not hd.adapted and hd.reason == "not-adapted" and hd.n_P == 2 and hd.distance == F(4, 3)
    hd = is_adapted(x1**2 * x2**2)
    assert hd.adapted and hd.reason == "vertex"


def test_is_adapted_edge_case_height_is_distance():
    for p in (x2**2 + x1**3, x2**3 + x1**4, x1 * x2**2 + x1**4):
        hd = is_adapted(p)
        assert hd.adapted and hd.h == hd.distance == hd.d_h


@pytest.mark.parametrize("c", [F(3), F(-1, 2), F(7, 5)])
def test_is_adapted_scale_invariant(c):
    for p in (x2**2 + x1**3, (x2 - x1**2) ** 2 + x1**5, x1 * (x2 - x1**2) ** 2 + x1**8):
        a, b = is_adapted(p), is_adapted(p * c)
        assert (a.adapted, a.reason, a.h) == (b.adapted, b.reason, b.h)


def test_is_adapted_precondition():
    with pytest.raises(PreconditionViolated):
        is_adapted(x1 + x2**2)
    with pytest.raises(PreconditionViolated):
        is_adapted(x2**2 + 1)
