from fractions import Fraction as F
import random

import pytest

from newtonsing.cli import parse_polynomial
from newtonsing.errors import (NotA2Germ, PreconditionViolated, TypeHasNoRootJet, UndefinedAtAxis)
from newtonsing.homog import is_adapted
from newtonsing.newton import newton_polyhedron
from newtonsing.normalform import (RegionParams, a2_normal_form, adapted_shear, classify,
                                   hessian_rank, region_membership, region_params)
from newtonsing.poly import Polynomial, substitute_linear

x1, x2 = Polynomial.x1(), Polynomial.x2()


@pytest.mark.parametrize("text, rank", [
    ("x2^2 + x1^3", 1), ("x1*x2^2 + x1^3", 0), ("x1^2 + x2^3", 1), ("x1*x2", 2)])
def test_hessian_rank(text, rank):
    assert hessian_rank(parse_polynomial(text)) == rank


def test_hessian_rank_precondition():
    with pytest.raises(PreconditionViolated):
        hessian_rank(x1 + x2**2)


def test_classify_a2():
    r = classify(x2**2 + x1**3)
    assert (r.type_label, r.n, r.d, r.h) == ("A2", 3, F(6, 5), F(6, 5))
    assert r.adapted_input and r.p_c_applicability == "deferred"


def test_classify_a4_nonadapted():
    r = classify((x2 - x1**2) ** 2 + x1**5)
    assert (r.type_label, r.m, r.n) == ("A4", 2, 5)
    assert not r.adapted_input
    assert (r.d, r.h) == (F(4, 3), F(10, 7))


def test_classify_d4plus():
    r = classify(x1 * x2**2 + x1**3 + x1**7)
    assert r.type_label == "D4plus" and r.h == F(3, 2)
    assert (r.p_c, r.p_c_applicability) == (F(3, 2), "rank0-height-below-2")


def test_classify_d9_nonadapted():
    r = classify(x1 * (x2 - x1**2) ** 2 + x1**8)
    assert (r.type_label, r.m, r.n) == ("D9", 2, 8)
    assert not r.adapted_input
    assert (r.d, r.h, r.p_c) == (F(5, 3), F(16, 9), F(16, 9))
    assert r.kappa_adapted.as_tuple() == (F(1, 8), F(7, 16))


def test_classify_e7():
    r = classify(x2**3 + x1**3 * x2 + x1**9)
    assert r.type_label == "E7" and r.h == F(9, 5) and r.p_c == F(9, 5)


def test_classify_nondegenerate_and_out_of_scope():
    r = classify(x1 * x2)
    assert r.type_label == "Nondegenerate" and r.p_c == F(3, 2) and r.p_c_applicability == "classical-3/2"
    r = classify(x2**3)
    assert r.family == "out-of-scope" and r.p_c is None
    r = classify(x2**4 + x1**5)
    assert r.family == "out-of-scope"


def test_classify_flat_restriction_is_a_precondition_error():
    with pytest.raises(PreconditionViolated):
        classify(x1**2)


@pytest.mark.parametrize("text", ["x2^3 + x1^4", "x2^3 - x1^4", "x2^3 + x1^3*x2", "x2^3 + x1^5"])
def test_e_templates_are_exclusive(text):
    from newtonsing.newton import kappa_degree_split
    from newtonsing.normalform import E_TYPES

    p = parse_polynomial(text)
    matches = []
    for label, _, kappa, _ in E_TYPES:
        try:
            P, _ = kappa_degree_split(p, kappa)
        except Exception:
            continue
        if P.degree_in(2) == 3 and P.degree_in(1) > 0:
            matches.append(label)
    assert len(matches) == 1 and classify(p).type_label == matches[0]


def test_adapted_shear_a4():
    r = classify((x2 - x1**2) ** 2 + x1**5)
    phi_a, nd = adapted_shear(r)
    assert phi_a.poly == x2**2 + x1**5
    assert nd.distance == F(10, 7) == r.h


def test_adapted_shear_d9():
    r = classify(x1 * (x2 - x1**2) ** 2 + x1**8)
    phi_a, nd = adapted_shear(r)
    assert phi_a.poly == x1 * x2**2 + x1**8
    assert nd.distance == F(16, 9)


def test_adapted_shear_identity_and_errors():
    r = classify(x2**2 + x1**4)
    phi_a, _ = adapted_shear(r)
    assert phi_a.poly == r.normalized
    with pytest.raises(TypeHasNoRootJet):
        adapted_shear(classify(x2**3 + x1**4))


@pytest.mark.parametrize("q", [F(0), F(1), F(-2, 3), F(5, 2)])
@pytest.mark.parametrize("c", [F(1), F(-3, 2)])
def test_scale_and_shear_invariance(q, c):
    for text in ("(x2 - x1^2)^2 + x1^5", "x1*(x2 - x1^2)^2 + x1^8", "x2^3 + x1^3*x2", "x1*x2^2 - x1^3"):
        p = parse_polynomial(text)
        base = classify(p)
        moved = classify(substitute_linear(p * c, ((1, 0), (q, 1))))
        assert (moved.type_label, moved.n, moved.h) == (base.type_label, base.n, base.h)


def test_d_type_bounds():
    for text in ("x1*(x2 - x1^2)^2 + x1^8", "x1*(x2 - x1^3)^2 + x1^9", "x1*(x2 - x1)^2 + x1^5"):
        r = classify(parse_polynomial(text))
        assert r.family == "D"
        if not r.adapted_input:
            assert r.n >= 2 * r.m + 2 and r.h >= F(12, 7)


def test_formula_matches_adapted_distance_on_random_d_and_a():
    rng = random.Random(7)
    for _ in range(20):
        m = rng.randint(1, 3)
        a = F(rng.randint(-3, 3) or 1, rng.randint(1, 3))
        if rng.random() < 0.5:
            n = rng.randint(3, 2 * m + 3)
            p = (x2 - a * x1**m) ** 2 + x1**n
        else:
            n = rng.randint(3, 2 * m + 4)
            p = x1 * (x2 - a * x1**m) ** 2 + x1**n
        r = classify(p)
        if r.family not in ("A", "D"):
            continue
        _, nd = adapted_shear(r)
        assert nd.distance == r.h


def test_adaptedness_matches_is_adapted_on_corpus(classification_corpus):
    for e in classification_corpus:
        r = classify(parse_polynomial(e["phase"]))
        assert r.adapted_input == e["adapted"]
        assert is_adapted(r.normalized).adapted == r.adapted_input


# regions

PARAMS = RegionParams(F(1, 10), F(1), 2, F(7, 2))


def test_region_dpr():
    # |x2 - psi| = 1/10^4 with N x1^(7/2) = 10^(-7/2) ~ 3.16e-4
    assert region_membership((F(1, 10), F(1, 100) + F(1, 10**4)), x1**2, PARAMS) == "Dpr"


def test_region_dext():
    assert region_membership((F(1, 10), F(1, 100) + F(1, 500)), x1**2, PARAMS) == "Dext"


def test_region_transition_and_ties():
    assert region_membership((F(1, 10), F(1, 100)), x1**2, PARAMS) == "Dpr"
    # between N x1^(7/2) ~ 3.2e-4 and eps x1^2 = 1e-3
    assert region_membership((F(1, 10), F(1, 100) + F(5, 10**4)), x1**2, PARAMS) == "E-transition"
    assert region_membership((F(1, 10), F(1, 100) + F(1, 1000)), x1**2, PARAMS) == "boundary-tie"
    tie = RegionParams(F(1, 10), F(1), 2, F(4))
    assert region_membership((F(1, 10), F(1, 100) + F(1, 10**4)), x1**2, tie) == "boundary-tie"
    with pytest.raises(UndefinedAtAxis):
        region_membership((0, F(1, 2)), x1**2, PARAMS)


def test_region_params_from_report():
    rp = region_params(classify(x1 * (x2 - x1**2) ** 2 + x1**8))
    assert (rp.m, rp.a, rp.eps, rp.N) == (2, F(7, 2), F(1, 10), F(10))
    assert rp.a > rp.m
    with pytest.raises(TypeHasNoRootJet):
        region_params(classify(x2**3 + x1**4))


# A2 normal form

def test_a2_already_normal():
    nf = a2_normal_form(x2**2 + x1**3)
    assert nf.b.poly == Polynomial.constant(1) and nf.psi.poly.is_zero()
    assert nf.beta.poly == Polynomial.constant(1)
    assert (nf.beta1, nf.beta0, nf.shift) == (0, 0, 0)
    assert nf.residual == 0


def test_a2_family_at_zero():
    nf = a2_normal_form(lambda s: x2**2 + x1**3 + s * x1**2, 0)
    assert nf.shift == 0 and nf.residual == 0
    assert nf.conditions["beta0 == 0"] and nf.conditions["beta1 == 0"] and nf.conditions["omega == 0"]
    assert nf.reconstruct() == (x2**2 + x1**3)


@pytest.mark.parametrize("c", [F(1, 3), F(-2, 5), F(1, 7)])
def test_a2_translated_germ(c):
    nf = a2_normal_form(x2**2 + (x1 - c) ** 3)
    assert abs(float(nf.shift - c)) <= 1e-10
    assert nf.residual <= 1e-12


def test_a2_parameter_slice():
    family = lambda s: x2**2 + x1**3 + s * x1**2 + s * x1 * x2
    nf = a2_normal_form(family, F(1, 10))
    assert nf.residual <= 1e-12
    assert abs(nf.conditions["leftover x1^2 coefficient"]) <= 1e-12


def test_a2_rejects_non_a2():
    with pytest.raises(NotA2Germ):
        a2_normal_form(x2**2 + x1**4)
    with pytest.raises(NotA2Germ):
        a2_normal_form(lambda s: x2**2 + x1**3 + x1**2, 0)
