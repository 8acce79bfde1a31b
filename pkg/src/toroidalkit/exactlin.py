"""Exact sparse linear algebra over the rationals.

Vectors are dicts mapping opaque (hashable, totally ordered) basis keys to
nonzero `fractions.Fraction` coefficients.  All eliminations use exact
rational arithmetic; pivots are chosen deterministically (first nonzero entry
in the ambient column order), so computed bases are reproducible across runs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

Key = Hashable
SparseVec = dict

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(entries: Mapping | Iterable = ()) -> SparseVec:
    """Build a sparse vector, dropping zero coefficients."""
    items = entries.items() if isinstance(entries, Mapping) else entries
    out = {}
    for k, c in items:
        c = Fraction(c)
        if c:
            out[k] = out.get(k, ZERO) + c
            if not out[k]:
                del out[k]
    return out


def add_scaled(dst: SparseVec, src: SparseVec, c: Fraction) -> SparseVec:
    """In-place dst += c*src, keeping the no-zero-entries invariant."""
    if not c:
        return dst
    for k, v in src.items():
        w = dst.get(k, ZERO) + c * v
        if w:
            dst[k] = w
        else:
            dst.pop(k, None)
    return dst


def scaled(v: SparseVec, c: Fraction) -> SparseVec:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


class ExactMatrix:
    """A list of sparse rows over an explicit, finite, ordered column universe."""

    def __init__(self, columns: Sequence[Key], rows: Iterable[SparseVec]):
        self.columns = list(columns)
        self._index = {k: i for i, k in enumerate(self.columns)}
        self.rows = [dict(r) for r in rows]
        for r in self.rows:
            for k in r:
                if k not in self._index:
                    raise ValueError(f"row key {k!r} outside the column universe")

    def column_index(self, key: Key) -> int:
        return self._index[key]


class Echelon:
    """Incrementally maintained reduced row-echelon basis.

    Rows are kept fully reduced with unit pivots; the pivot of a row is its
    first nonzero coordinate in the supplied column order.  Used wherever the
    engine needs rank, membership, or quotient coordinates.
    """

    def __init__(self, column_order=None):
        # column_order: key -> sortable; defaults to the keys themselves.
        self._order = column_order if column_order is not None else (lambda k: k)
        self.pivots: list[Key] = []
        self.rows: list[SparseVec] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: SparseVec) -> SparseVec:
        """Return the normal form of v modulo the current row space."""
        w = dict(v)
        for p, row in zip(self.pivots, self.rows):
            c = w.get(p)
            if c:
                add_scaled(w, row, -c)
        return w

    def add(self, v: SparseVec) -> bool:
        """Insert v; return True iff it enlarged the row space."""
        w = self.reduce(v)
        if not w:
            return False
        pivot = min(w, key=self._order)
        inv = ONE / w[pivot]
        w = {k: c * inv for k, c in w.items()}
        # keep earlier rows reduced against the new pivot
        for i, row in enumerate(self.rows):
            c = row.get(pivot)
            if c:
                add_scaled(row, w, -c)
        self.pivots.append(pivot)
        self.rows.append(w)
        # deterministic presentation: rows sorted by pivot position
        order = sorted(range(len(self.rows)), key=lambda i: self._order(self.pivots[i]))
        self.pivots = [self.pivots[i] for i in order]
        self.rows = [self.rows[i] for i in order]
        return True

    def contains(self, v: SparseVec) -> bool:
        return not self.reduce(v)


def rref(m: ExactMatrix):
    """Reduced row-echelon data of an exact matrix.

    Returns (rank, row_basis, kernel_basis) where row_basis spans the row
    space, kernel_basis spans {x : m x = 0}, and
    rank + len(kernel_basis) == len(m.columns).
    """
    ech = Echelon(column_order=m.column_index)
    for row in m.rows:
        ech.add(row)
    rank = ech.rank
    row_basis = [dict(r) for r in ech.rows]

    pivot_set = set(ech.pivots)
    pivot_row = dict(zip(ech.pivots, ech.rows))
    kernel_basis = []
    for key in m.columns:
        if key in pivot_set:
            continue
        kv = {key: ONE}
        for p in ech.pivots:
            c = pivot_row[p].get(key)
            if c:
                kv[p] = -c
        kernel_basis.append(kv)
    return rank, row_basis, kernel_basis


def span_contains(basis: Iterable[SparseVec], v: SparseVec, column_order=None) -> bool:
    """Decide exactly whether v lies in the rational span of basis."""
    ech = Echelon(column_order=column_order)
    for b in basis:
        ech.add(b)
    return ech.contains(v)


def matrix_apply(rows_by_key: Mapping[Key, SparseVec], v: SparseVec) -> SparseVec:
    """Apply a key-indexed linear map (key -> image vector) to v."""
    out: SparseVec = {}
    for k, c in v.items():
        img = rows_by_key.get(k)
        if img:
            add_scaled(out, img, c)
    return out


def det(mat: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a small dense square matrix."""
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    result = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        result *= a[col][col]
        inv = ONE / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return result


def mat_inverse(mat: Sequence[Sequence]) -> tuple:
    """Exact inverse of a small dense square matrix (Gauss-Jordan)."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [ONE if i == j else ZERO for j in range(n)]
         for i, row in enumerate(mat)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = ONE / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)
