from fractions import Fraction

import pytest

from toroidalkit.reps import (
    build_gln_rep, build_irrep_g, rep_axiom_defect, wedge_power_rep,
)
from toroidalkit.toroidal import ValidationError, sl2, sl3

F = Fraction


def weyl_dim_sl2(a):
    return a + 1


def weyl_dim_sl3(a, b):
    # product over the three positive roots of <lam+rho, alpha>/<rho, alpha>
    return (a + 1) * (b + 1) * (a + b + 2) // 2


def binom(n, k):
    from math import comb
    return comb(n, k)


def test_sl2_dimensions_match_weyl_formula():
    g = sl2()
    for a in range(5):
        assert build_irrep_g(g, (a,)).dim == weyl_dim_sl2(a)


def test_sl3_dimensions_match_weyl_formula():
    g = sl3()
    for lam in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)]:
        assert build_irrep_g(g, lam).dim == weyl_dim_sl3(*lam)


def test_sl2_fundamental_action():
    r = build_irrep_g(sl2(), (1,))
    vplus, vminus = {0: F(1)}, {1: F(1)}
    assert r.act("e", vminus) == vplus
    assert r.act("f", vplus) == vminus
    assert r.act("h", vplus) == {0: F(1)}
    assert r.act("h", vminus) == {1: F(-1)}
    assert r.weights == [(1,), (F(-1),)]


def test_sl2_trivial_module():
    r = build_irrep_g(sl2(), (0,))
    assert r.dim == 1
    for x in ("e", "h", "f"):
        assert not r.act(x, {0: F(1)})


def test_non_dominant_rejected():
    with pytest.raises(ValidationError):
        build_irrep_g(sl2(), (-1,))


def test_axiom_defect_exhaustive_small():
    for rep in (build_irrep_g(sl2(), (2,)), build_irrep_g(sl3(), (1, 0))):
        for x in rep.generator_labels:
            for y in rep.generator_labels:
                for i in range(rep.dim):
                    assert not rep_axiom_defect(rep, x, y, rep.basis_vector(i))


def test_standard_gl3_action():
    w = wedge_power_rep(3, 1)
    for j in (1, 2, 3):
        for i in (1, 2, 3):
            for l in (1, 2, 3):
                got = w.act(("E", j, i), {l - 1: F(1)})
                assert got == ({j - 1: F(1)} if i == l else {})


def test_wedge_sign_convention():
    w = wedge_power_rep(3, 2)
    basis = w.meta["basis"]
    i23, i12 = basis.index((2, 3)), basis.index((1, 2))
    assert w.act(("E", 1, 3), {i23: F(1)}) == {i12: F(-1)}


def test_wedge_dims_and_weights():
    for n, k in [(3, 0), (3, 1), (3, 2), (3, 3), (4, 2)]:
        w = wedge_power_rep(n, k)
        assert w.dim == binom(n, k)
        for wt, s in zip(w.weights, w.meta["basis"]):
            assert wt == tuple(F(1) if i in s else F(0) for i in range(1, n + 1))


def test_wedge_diag_commutator():
    w = wedge_power_rep(3, 2)
    i12 = w.meta["basis"].index((1, 2))
    assert not rep_axiom_defect(w, ("E", 1, 1), ("E", 2, 2), {i12: F(1)})


def test_gl_identity_scalar():
    for c, lam in [(F(1, 2), (1, 0)), (F(0), (0, 0)), (F(3), (0, 1))]:
        r = build_gln_rep(3, c, lam)
        for j in range(r.dim):
            total = {}
            for i in (1, 2, 3):
                for k, v in r.act(("E", i, i), {j: F(1)}).items():
                    total[k] = total.get(k, F(0)) + v
            total = {k: v for k, v in total.items() if v}
            assert total == ({j: c} if c else {})


def test_gl_trivial_c_zero():
    r = build_gln_rep(3, 0, (0, 0))
    assert r.dim == 1
    for j in (1, 2, 3):
        for i in (1, 2, 3):
            assert not r.act(("E", j, i), {0: F(1)})


def test_gl_wedge_fast_path_taken():
    r = build_gln_rep(3, 2, (0, 1))
    assert r.meta.get("wedge") == 2


def test_gl_general_path_axioms():
    r = build_gln_rep(2, F(-1, 2), (1,))
    for x in r.generator_labels:
        for y in r.generator_labels:
            for i in range(r.dim):
                assert not rep_axiom_defect(r, x, y, r.basis_vector(i))
