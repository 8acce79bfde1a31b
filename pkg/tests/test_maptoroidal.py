from fractions import Fraction

import pytest

from toroidalkit.coeffalg import univariate_quotient
from toroidalkit.maptoroidal import MapToroidal, TriangularData
from toroidalkit.rng import SplitMix64
from toroidalkit.toroidal import FullToroidal, ValidationError, sl2

F = Fraction


@pytest.fixture(scope="module")
def mt():
    tau = FullToroidal(3, sl2(), mu1=1, mu2=0)
    B = univariate_quotient("s^2 - 3*s + 2")
    return MapToroidal(tau, B)


@pytest.fixture(scope="module")
def tri():
    return TriangularData(beta=(1, 0, 0), m_basis=((0, 1, 0), (0, 0, 1)))


def test_center_annihilates(mt):
    rng = SplitMix64(3)
    z = mt.kahler(1, (0, 0, 0), "s")
    for _ in range(100):
        other = mt.random_homogeneous(rng, -3, 3)
        assert not mt.bracket(z, other)


def test_loop_bracket_with_coefficient_product(mt):
    # [e@(1,0,0) (s), f@0 (s)]: the tau bracket picks up s*s = 3s - 2,
    # and the one-form part at degree (1,0,0) is killed by canonicalization
    x = mt.loop("e", (1, 0, 0), "s")
    y = mt.loop("f", (0, 0, 0), "s")
    got = mt.bracket(x, y)
    expected = (3 * mt.loop("h", (1, 0, 0), "s")
                + (-2) * mt.loop("h", (1, 0, 0), "1"))
    assert got == expected


def test_heisenberg_pairing(mt):
    # [h@p*e_i (1), h@-p*e_i (a)] = <h,h> p K_i(a)
    for i in (1, 2, 3):
        for p in (1, 2):
            m = tuple(p if j == i - 1 else 0 for j in range(3))
            mneg = tuple(-v for v in m)
            got = mt.bracket(mt.loop("h", m), mt.loop("h", mneg, "s"))
            assert got == (2 * p) * mt.kahler(i, (0, 0, 0), "s")


def test_jacobi_randomized(mt):
    rng = SplitMix64(77)
    for _ in range(150):
        x = mt.random_homogeneous(rng, -2, 2)
        y = mt.random_homogeneous(rng, -2, 2)
        z = mt.random_homogeneous(rng, -2, 2)
        defect = (mt.bracket(x, mt.bracket(y, z))
                  + mt.bracket(y, mt.bracket(z, x))
                  + mt.bracket(z, mt.bracket(x, y)))
        assert not defect


def test_beta_split_degree_zero(mt, tri):
    minus, zero, plus = mt.beta_split(mt.der(1), tri)
    assert not minus and not plus
    assert zero == mt.der(1)


def test_beta_split_routing(mt, tri):
    x = mt.loop("e", (2, 1, 0), "s")
    minus, zero, plus = mt.beta_split(x, tri)
    assert plus == x and not minus and not zero

    y = mt.kahler(2, (-1, 4, 0), "s")
    minus, zero, plus = mt.beta_split(y, tri)
    assert minus == y and not zero and not plus


def test_beta_split_parts_sum(mt, tri):
    rng = SplitMix64(5)
    for _ in range(50):
        x = (mt.random_homogeneous(rng, -2, 2) + mt.random_homogeneous(rng, -2, 2)
             + mt.random_homogeneous(rng, -2, 2))
        minus, zero, plus = mt.beta_split(x, tri)
        assert minus + zero + plus == x


def test_beta_split_bracket_grading(mt, tri):
    rng = SplitMix64(8)
    for _ in range(40):
        x = mt.random_homogeneous(rng, -2, 2)
        y = mt.random_homogeneous(rng, -2, 2)
        _, _, px = mt.beta_split(x, tri)
        _, _, py = mt.beta_split(y, tri)
        if px and py:
            m, z, p = mt.beta_split(mt.bracket(px, py), tri)
            assert not m and not z
        _, zx, _ = mt.beta_split(x, tri)
        _, zy, _ = mt.beta_split(y, tri)
        if zx and zy:
            m, z, p = mt.beta_split(mt.bracket(zx, zy), tri)
            assert not m and not p


def test_is_central(mt):
    assert mt.is_central(mt.kahler(1, (0, 0, 0), "s"))
    assert not mt.is_central(mt.der(1))
    assert not mt.is_central(mt.kahler(2, (1, 0, 0)))
    # nonzero-degree one-forms fail to commute with derivations
    x = mt.kahler(2, (1, 0, 0))
    assert mt.bracket(mt.der(1), x)


def test_central_elements_commute(mt):
    rng = SplitMix64(123)
    centrals = [mt.kahler(i, (0, 0, 0), lbl)
                for i in (1, 2, 3) for lbl in mt.B.labels]
    for _ in range(500):
        x = mt.random_homogeneous(rng, -3, 3)
        z = rng.choice(centrals)
        assert not mt.bracket(z, x)


def test_triangular_data_validation():
    with pytest.raises(ValidationError):
        TriangularData(beta=(2, 0, 0), m_basis=((0, 1, 0), (0, 0, 1)))
    tri = TriangularData(beta=(1, 1, 0), m_basis=((0, 1, 0), (0, 0, 1)))
    c, r = tri.coords((3, 5, 7))
    assert r == 3 and tri.from_coords(c, r) == (3, 5, 7)
