from fractions import Fraction as F

import pytest

from newtonsing.errors import (DegenerateSecondDerivative, SingularMatrix, TruncationInsufficient,
                               ZeroPolynomial)
from newtonsing.poly import (Jet, Polynomial, real_root_multiplicities, root_jet, shear,
                             solve_critical_series, substitute_linear, substitute_series,
                             taylor_divide)

x1, x2 = Polynomial.x1(), Polynomial.x2()


def test_arithmetic_and_printing():
    p = (x2 - x1**2) ** 2 + x1**5
    assert p == x2**2 - 2 * x1**2 * x2 + x1**4 + x1**5
    assert p.degree == 5 and p.order == 2
    assert (p - p).is_zero()
    assert p.diff(2) == 2 * x2 - 2 * x1**2
    assert str(x1 * x2**2 - x1**3) in ("x1*x2^2 - x1^3", "-x1^3 + x1*x2^2")
    assert Polynomial({(1, 0): F(1, 2)}) * 2 == x1


def test_substitute_linear_examples():
    p = x2**2
    assert substitute_linear(p, ((1, 0), (0, 1))) == p
    assert substitute_linear(p, ((0, 1), (1, 0))) == x1**2
    assert substitute_linear(p, ((1, 0), (-1, 1))) == x2**2 - 2 * x1 * x2 + x1**2
    with pytest.raises(SingularMatrix):
        substitute_linear(p, ((1, 2), (2, 4)))


def test_substitute_linear_shift():
    p = x1**3 + x2
    assert substitute_linear(p, ((1, 0), (0, 1)), (1, 0)) == x1**3 + 3 * x1**2 + 3 * x1 + 1 + x2


def test_substitute_series_examples():
    assert substitute_series(x2, x1**2, 4).poly == x1**2
    q = substitute_series((x2 - x1**2) ** 2 + x1**5, x2 + x1**2, 10)
    assert q.poly == x2**2 + x1**5 and not q.truncated
    j = substitute_series(x2**2, x1**2 + x1**3, 4)
    assert j.poly == x1**4 and j.truncated


def test_shear_matches_substitution():
    p = x1 * (x2 - x1**2) ** 2 + x1**8
    assert shear(p, x1**2, 12).poly == x1 * x2**2 + x1**8


def test_real_root_multiplicities_examples():
    assert len(real_root_multiplicities([1, 0, 1])) == 0
    ml = real_root_multiplicities([1, -2, 1])
    assert [e.multiplicity for e in ml.entries] == [2] and ml.entries[0].contains(1)
    ml = real_root_multiplicities([0, 1, 0, 1])
    assert [(e.lo, e.hi, e.multiplicity) for e in ml.entries] == [(0, 0, 1)]
    with pytest.raises(ZeroPolynomial):
        real_root_multiplicities([0, 0])


def test_real_root_multiplicities_mixed():
    # (t - 1/2)^3 (t + 2) t^2 (t^2 + 3)
    from oracles import expand_factors
    cs = expand_factors([([F(-1, 2), 1], 3), ([2, 1], 1), ([0, 1], 2), ([3, 0, 1], 1)])
    ml = real_root_multiplicities(cs)
    assert [e.multiplicity for e in ml.entries] == [1, 2, 3]
    for e, r in zip(ml.entries, (-2, 0, F(1, 2))):
        assert e.contains(r)
    assert ml.zero_multiplicity == 2 and ml.max_multiplicity == 3


def test_solve_critical_series_examples():
    assert solve_critical_series(x2**2, 6).poly.is_zero()
    assert solve_critical_series((x2 - x1**2) ** 2 + x1**5, 8).poly == x1**2
    assert solve_critical_series(x2**2 + x1**3 * x2 + x1**3, 8).poly == -x1**3 / 2
    with pytest.raises(DegenerateSecondDerivative):
        solve_critical_series(x2**3 + x1**4, 6)


def test_solve_critical_series_truncated_root():
    # d2 p = 2 x2 - 2 x1^2 + 3 x2^2 has an infinite root series
    p = x2**2 - 2 * x1**2 * x2 + x2**3
    psi = solve_critical_series(p, 6)
    assert psi.truncated
    resid = substitute_series(p.diff(2), psi.poly, 6).poly
    assert resid.is_zero()


def test_taylor_divide_examples():
    b, b0 = taylor_divide(x2**2 + x1**3, Polynomial(), 6)
    assert b.poly == Polynomial.constant(1) and b0.poly == x1**3
    b, b0 = taylor_divide((x2 - x1**2) ** 2 + x1**5, x1**2, 8)
    assert b.poly == Polynomial.constant(1) and b0.poly == x1**5
    b, b0 = taylor_divide(x1 * x2**2 + x1**3, Polynomial(), 6)
    assert b.poly == x1 and b0.poly == x1**3
    with pytest.raises(TruncationInsufficient):
        taylor_divide(Jet(x2**2 + x1**3, 4), Polynomial(), 8)


def test_taylor_divide_reconstructs():
    p = x2**2 * (1 + x1 + x2) + x1**3 * x2 + x1**5
    psi = solve_critical_series(p, 10)
    b, b0 = taylor_divide(p, psi, 10)
    w = x2 - psi.poly
    assert ((b.poly * w * w + b0.poly) - p).truncate(10).is_zero()


def test_root_jet_with_valuation():
    # type D situation: F = d2 of x1 (x2 - x1^2)^2 + x1^8 has dF/dx2 = 2 x1 along the root
    p = x1 * (x2 - x1**2) ** 2 + x1**8
    j = root_jet(p.diff(2), 8, valuation=1)
    assert j.poly == x1**2 and not j.truncated
