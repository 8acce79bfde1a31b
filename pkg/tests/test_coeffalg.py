from fractions import Fraction

import pytest

from toroidalkit.coeffalg import (
    CoeffAlgebra, EvaluationPoint, b_mul, ideal_of_point, parse_poly, point_at,
    points_of, univariate_quotient,
)
from toroidalkit.exactlin import span_contains
from toroidalkit.rng import SplitMix64
from toroidalkit.toroidal import ValidationError

F = Fraction


@pytest.fixture(scope="module")
def B2():
    # Q[s]/(s^2 - 3s + 2), the split quadratic used throughout the suites
    return univariate_quotient("s^2 - 3*s + 2")


def test_parse_poly_variants():
    assert parse_poly("s^2 - 3*s + 2") == [F(2), F(-3), F(1)]
    assert parse_poly("s^2-3s+2") == [F(2), F(-3), F(1)]
    assert parse_poly("s - 1") == [F(-1), F(1)]
    assert parse_poly("s^2") == [F(0), F(0), F(1)]
    assert parse_poly("1/2 + s") == [F(1, 2), F(1)]
    with pytest.raises(ValidationError):
        parse_poly("x^2")


def test_unit_law(B2):
    b = B2.element({"1": F(5), "s": F(-2)})
    assert b_mul(B2.unit(), b) == b


def test_quadratic_reduction(B2):
    s = B2.gen()
    assert b_mul(s, s) == B2.element({"1": F(-2), "s": F(3)})


def test_product_of_linear_factors_vanishes(B2):
    s = B2.gen()
    one = B2.unit()
    assert not b_mul(s - one, s - 2 * one)


def test_point_algebra():
    B = univariate_quotient("s - 1")
    assert B.dim == 1
    assert len(points_of(B)) == 1


def test_nilpotent_square():
    B = univariate_quotient("s^2")
    s = B.gen()
    assert not b_mul(s, s)
    pts = points_of(B)
    assert len(pts) == 1 and pts[0](s) == 0


def test_points_of_split_quadratic(B2):
    pts = points_of(B2)
    vals = sorted(p(B2.gen()) for p in pts)
    assert vals == [F(1), F(2)]


def test_points_of_linear():
    B = univariate_quotient("s - 5")
    pts = points_of(B)
    assert len(pts) == 1 and pts[0](B.gen()) == 5


def test_points_reject_irrational():
    B = univariate_quotient("s^2 - 2")
    with pytest.raises(ValidationError):
        points_of(B)


def test_ideal_of_point(B2):
    psi = point_at(B2, 1)
    ideal = ideal_of_point(psi)
    assert len(ideal) == 1
    assert all(psi(m) == 0 for m in ideal)
    # the kernel contains s - 1
    sm1 = B2.gen() - B2.unit()
    assert span_contains([m.coeffs for m in ideal], sm1.coeffs)


def test_ideal_of_field_point():
    B = univariate_quotient("s - 1")
    assert ideal_of_point(points_of(B)[0]) == []


def test_ideal_of_nilpotent():
    B = univariate_quotient("s^2")
    ideal = ideal_of_point(points_of(B)[0])
    assert len(ideal) == 1
    assert ideal[0] == B.gen() or ideal[0] == -1 * B.gen()


def test_ideal_is_multiplicatively_closed(B2):
    for psi in points_of(B2):
        ideal = ideal_of_point(psi)
        basis = [m.coeffs for m in ideal]
        for label in B2.labels:
            e = B2.element({label: F(1)})
            for m in ideal:
                assert span_contains(basis, b_mul(e, m).coeffs)


def test_commutative_associative_randomized(B2):
    rng = SplitMix64(13)
    for _ in range(60):
        a = B2.element({l: rng.fraction() for l in B2.labels})
        b = B2.element({l: rng.fraction() for l in B2.labels})
        c = B2.element({l: rng.fraction() for l in B2.labels})
        assert b_mul(a, b) == b_mul(b, a)
        assert b_mul(b_mul(a, b), c) == b_mul(a, b_mul(b, c))


def test_points_are_multiplicative(B2):
    rng = SplitMix64(21)
    for psi in points_of(B2):
        for _ in range(40):
            a = B2.element({l: rng.fraction() for l in B2.labels})
            b = B2.element({l: rng.fraction() for l in B2.labels})
            assert psi(b_mul(a, b)) == psi(a) * psi(b)


def test_bad_evaluation_point_rejected(B2):
    with pytest.raises(ValidationError):
        EvaluationPoint(B2, {"1": F(1), "s": F(7)})


def test_non_monic_rejected():
    with pytest.raises(ValidationError):
        univariate_quotient("2*s^2 - 1")


def test_explicit_table_algebra():
    # Q x Q with orthogonal idempotents written in the basis {1, u}
    table = {
        ("1", "1"): {"1": F(1)},
        ("1", "u"): {"u": F(1)},
        ("u", "1"): {"u": F(1)},
        ("u", "u"): {"1": F(1)},
    }
    B = CoeffAlgebra(["1", "u"], table)
    u = B.element({"u": F(1)})
    assert b_mul(u, u) == B.unit()
