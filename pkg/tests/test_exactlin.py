from fractions import Fraction

from toroidalkit.exactlin import (
    Echelon, ExactMatrix, add_scaled, det, mat_inverse, rref, span_contains, vec,
)
from toroidalkit.rng import SplitMix64

F = Fraction


def test_rref_identity():
    m = ExactMatrix(["a", "b"], [{"a": F(1)}, {"b": F(1)}])
    rank, rows, kernel = rref(m)
    assert rank == 2
    assert kernel == []


def test_rref_zero_matrix():
    m = ExactMatrix(["a", "b"], [{}, {}])
    rank, rows, kernel = rref(m)
    assert rank == 0
    assert len(kernel) == 2


def test_rref_rank_one():
    # rows (1,1) and (2,2): rank 1, kernel spanned by (1,-1)
    m = ExactMatrix(["x", "y"], [{"x": F(1), "y": F(1)}, {"x": F(2), "y": F(2)}])
    rank, rows, kernel = rref(m)
    assert rank == 1
    assert rows == [{"x": F(1), "y": F(1)}]
    assert len(kernel) == 1
    k = kernel[0]
    assert k["x"] * 1 + k["y"] * 1 == 0 and k["x"] * 2 + k["y"] * 2 == 0


def test_rref_idempotent_and_kernel_annihilates():
    rng = SplitMix64(11)
    for _ in range(30):
        cols = list(range(5))
        rows = [{c: rng.fraction() for c in cols if rng.randint(0, 2)} for _ in range(4)]
        rows = [vec(r) for r in rows]
        m = ExactMatrix(cols, rows)
        rank, basis, kernel = rref(m)
        rank2, basis2, _ = rref(ExactMatrix(cols, basis))
        assert rank2 == rank and basis2 == basis
        assert rank + len(kernel) == len(cols)
        for kv in kernel:
            for r in rows:
                assert sum((r.get(c, F(0)) * kv.get(c, F(0)) for c in cols), F(0)) == 0


def test_rank_invariant_under_row_permutation():
    rng = SplitMix64(23)
    cols = list(range(6))
    rows = [vec({c: rng.fraction() for c in cols if rng.randint(0, 1)}) for _ in range(5)]
    base_rank = rref(ExactMatrix(cols, rows))[0]
    for _ in range(10):
        perm = rows[:]
        for i in range(len(perm) - 1, 0, -1):
            j = rng.randint(0, i)
            perm[i], perm[j] = perm[j], perm[i]
        assert rref(ExactMatrix(cols, perm))[0] == base_rank


def test_span_contains():
    assert span_contains([{"a": F(1)}], {"a": F(3)})
    assert not span_contains([{"a": F(1)}], {"b": F(1)})
    # basis (1,1),(1,-1) contains (2,0): solve the 2x2 system
    basis = [{"a": F(1), "b": F(1)}, {"a": F(1), "b": F(-1)}]
    assert span_contains(basis, {"a": F(2)})


def test_echelon_reduce_is_normal_form():
    ech = Echelon()
    ech.add({"a": F(1), "b": F(2)})
    ech.add({"b": F(1), "c": F(1)})
    r = ech.reduce({"a": F(1), "b": F(2), "c": F(5)})
    assert "a" not in r and "b" not in r
    assert ech.reduce(r) == r


def test_det_and_inverse():
    assert det([[1, 1, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[1, 2], [2, 4]]) == 0
    inv = mat_inverse([[1, 1], [0, 1]])
    assert inv == ((F(1), F(-1)), (F(0), F(1)))


def test_add_scaled_drops_zeros():
    d = {"a": F(1)}
    add_scaled(d, {"a": F(1)}, F(-1))
    assert d == {}
