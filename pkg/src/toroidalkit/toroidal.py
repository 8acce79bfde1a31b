"""The full toroidal Lie algebra: multiloop part, central one-forms, derivations.

An algebra configuration fixes the number of torus variables n, a finite
dimensional Lie algebra g given by structure constants with an invariant
symmetric form, and a two-parameter cocycle twisting the derivation bracket.
Elements are finitely supported rational combinations of three families of
basis symbols, each carrying an integer degree vector:

    loop symbols   x@m     (x a basis label of g)
    one-forms      K_i@m   (central; subject to  sum_i m_i K_i@m = 0)
    derivations    d_i@m

One-form symbols are always stored canonically: for m != 0 the pivot index
(first i with m_i != 0) is eliminated through the relation above, so equality
of elements is plain dictionary equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactlin import Echelon, det, mat_inverse

ZERO = Fraction(0)
ONE = Fraction(1)

LOOP, KAHLER, DER = "loop", "kahler", "der"
_KIND_RANK = {LOOP: 0, KAHLER: 1, DER: 2}


class ConfigurationError(ValueError):
    """Operands belong to different algebra configurations."""


class ValidationError(ValueError):
    """Input data violates a documented precondition."""


def deg_add(m: Sequence[int], k: Sequence[int]) -> tuple:
    return tuple(a + b for a, b in zip(m, k))


@dataclass(frozen=True)
class BasisSymbol:
    kind: str
    index: object  # g basis label for loop symbols, coordinate index 1..n otherwise
    degree: tuple

    def sort_key(self):
        idx = self.index if isinstance(self.index, int) else 0
        return (_KIND_RANK[self.kind], idx, str(self.index), self.degree)

    def __str__(self):
        d = ",".join(str(c) for c in self.degree)
        if self.kind == LOOP:
            return f"{self.index}*t^({d})"
        if self.kind == KAHLER:
            return f"t^({d})*K{self.index}"
        return f"t^({d})*d{self.index}"


class AlgElement:
    """A finitely supported rational combination of basis symbols."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        self.terms = {}
        for sym, c in items:
            c = Fraction(c)
            if c:
                self.terms[sym] = self.terms.get(sym, ZERO) + c
                if not self.terms[sym]:
                    del self.terms[sym]

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, AlgElement) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for sym, c in other.terms.items():
            v = out.get(sym, ZERO) + c
            if v:
                out[sym] = v
            else:
                del out[sym]
        res = AlgElement()
        res.terms = out
        return res

    def __neg__(self):
        res = AlgElement()
        res.terms = {s: -c for s, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        c = Fraction(c)
        res = AlgElement()
        if c:
            res.terms = {s: c * v for s, v in self.terms.items()}
        return res

    def degree(self):
        """The common degree of all terms, or None for 0 / inhomogeneous."""
        degs = {s.degree for s in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for sym in sorted(self.terms, key=BasisSymbol.sort_key):
            c = self.terms[sym]
            bits.append(f"{c}*{sym}" if c != 1 else str(sym))
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# finite dimensional coefficient Lie algebras
# ---------------------------------------------------------------------------

class GAlgebra:
    """A finite dimensional Lie algebra with structure constants and an
    invariant symmetric bilinear form.

    `table[(a, b)]` maps basis label pairs to {label: coefficient}; the table
    is validated for antisymmetry and the Jacobi identity at load, the form
    for symmetry and invariance <[x,y],z> = <x,[y,z]>.
    """

    def __init__(self, name, labels, table, form, cartan=(),
                 simple_raising=(), simple_lowering=()):
        self.name = name
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.table = {}
        for (a, b), entry in table.items():
            cleaned = {l: Fraction(c) for l, c in entry.items() if Fraction(c)}
            if cleaned:
                self.table[(a, b)] = cleaned
        self.form = {}
        for (a, b), c in form.items():
            c = Fraction(c)
            if c:
                self.form[(a, b)] = c
        self.cartan = list(cartan)
        self.simple_raising = list(simple_raising)
        self.simple_lowering = list(simple_lowering)
        self._validate()

    def bracket_labels(self, a, b):
        return self.table.get((a, b), {})

    def form_value(self, a, b) -> Fraction:
        return self.form.get((a, b), ZERO)

    def bracket_vectors(self, x: Mapping, y: Mapping) -> dict:
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for l, c in self.bracket_labels(a, b).items():
                    v = out.get(l, ZERO) + ca * cb * c
                    if v:
                        out[l] = v
                    else:
                        del out[l]
        return out

    def _validate(self):
        labels = self.labels
        for a in labels:
            for b in labels:
                ab = self.bracket_labels(a, b)
                ba = self.bracket_labels(b, a)
                keys = set(ab) | set(ba)
                if any(ab.get(k, ZERO) + ba.get(k, ZERO) for k in keys):
                    raise ValidationError(f"{self.name}: bracket table not antisymmetric at ({a},{b})")
                if self.form_value(a, b) != self.form_value(b, a):
                    raise ValidationError(f"{self.name}: form not symmetric at ({a},{b})")
        for a in labels:
            for b in labels:
                for c in labels:
                    acc = {}
                    for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                        inner = self.bracket_labels(y, z)
                        for l, w in self.bracket_vectors({x: ONE}, inner).items():
                            v = acc.get(l, ZERO) + w
                            if v:
                                acc[l] = v
                            else:
                                del acc[l]
                    if acc:
                        raise ValidationError(f"{self.name}: Jacobi fails on ({a},{b},{c})")
                    lhs = sum((self.form_value(l, c) * w
                               for l, w in self.bracket_labels(a, b).items()), ZERO)
                    rhs = sum((self.form_value(a, l) * w
                               for l, w in self.bracket_labels(b, c).items()), ZERO)
                    if lhs != rhs:
                        raise ValidationError(
                            f"{self.name}: form not invariant on ({a},{b},{c})")


def _mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(m)), ZERO)
                       for j in range(p)) for i in range(n))


def _mat_comm(a, b):
    ab, ba = _mat_mul(a, b), _mat_mul(b, a)
    return tuple(tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(ab, ba))


def _mat_trace(a):
    return sum((a[i][i] for i in range(len(a))), ZERO)


def algebra_from_matrices(name, basis, cartan=(), simple_raising=(),
                          simple_lowering=()) -> GAlgebra:
    """Build a GAlgebra from a faithful matrix realization.

    `basis` is a list of (label, square matrix); structure constants come from
    matrix commutators, the form is the trace form of the realization.
    """
    labels = [l for l, _ in basis]
    mats = {l: tuple(tuple(Fraction(x) for x in row) for row in m) for l, m in basis}
    size = len(next(iter(mats.values())))

    # decomposition in the basis, with tracking markers appended after the
    # matrix-entry coordinates
    ech = Echelon(column_order=lambda k: (0, k) if isinstance(k, tuple) and k[0] != "#" else (1, k))
    for l in labels:
        row = {(i, j): mats[l][i][j] for i in range(size) for j in range(size)
               if mats[l][i][j]}
        row[("#", l)] = ONE
        ech.add(row)

    def decompose(mat):
        row = {(i, j): mat[i][j] for i in range(size) for j in range(size) if mat[i][j]}
        rem = ech.reduce(row)
        if any(not (isinstance(k, tuple) and k[0] == "#") for k in rem):
            raise ValidationError(f"{name}: commutator leaves the span of the basis")
        return {k[1]: -c for k, c in rem.items()}

    table = {}
    form = {}
    for a in labels:
        for b in labels:
            table[(a, b)] = decompose(_mat_comm(mats[a], mats[b]))
            form[(a, b)] = _mat_trace(_mat_mul(mats[a], mats[b]))
    return GAlgebra(name, labels, table, form, cartan=cartan,
                    simple_raising=simple_raising, simple_lowering=simple_lowering)


def _elementary(n, i, j):
    return tuple(tuple(ONE if (r, c) == (i - 1, j - 1) else ZERO for c in range(n))
                 for r in range(n))


def _mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(a, b))


def sl2() -> GAlgebra:
    e, f = _elementary(2, 1, 2), _elementary(2, 2, 1)
    h = _mat_sub(_elementary(2, 1, 1), _elementary(2, 2, 2))
    return algebra_from_matrices("sl2", [("e", e), ("h", h), ("f", f)],
                                 cartan=["h"], simple_raising=["e"],
                                 simple_lowering=["f"])


def sl3() -> GAlgebra:
    basis = [
        ("e1", _elementary(3, 1, 2)),
        ("e2", _elementary(3, 2, 3)),
        ("e12", _elementary(3, 1, 3)),
        ("h1", _mat_sub(_elementary(3, 1, 1), _elementary(3, 2, 2))),
        ("h2", _mat_sub(_elementary(3, 2, 2), _elementary(3, 3, 3))),
        ("f1", _elementary(3, 2, 1)),
        ("f2", _elementary(3, 3, 2)),
        ("f12", _elementary(3, 3, 1)),
    ]
    return algebra_from_matrices("sl3", basis, cartan=["h1", "h2"],
                                 simple_raising=["e1", "e2"],
                                 simple_lowering=["f1", "f2"])


def sl_generic(n: int) -> GAlgebra:
    """sl_n with labels E{i}_{j} (i != j) and H{i}: used for the gl_n side."""
    basis = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                basis.append((f"E{i}_{j}", _elementary(n, i, j)))
    for i in range(1, n):
        basis.append((f"H{i}", _mat_sub(_elementary(n, i, i), _elementary(n, i + 1, i + 1))))
    return algebra_from_matrices(
        f"sl{n}", basis,
        cartan=[f"H{i}" for i in range(1, n)],
        simple_raising=[f"E{i}_{i+1}" for i in range(1, n)],
        simple_lowering=[f"E{i+1}_{i}" for i in range(1, n)])


BUILTIN_ALGEBRAS = {"sl2": sl2, "sl3": sl3}


# ---------------------------------------------------------------------------
# the full toroidal algebra
# ---------------------------------------------------------------------------

class FullToroidal:
    """A full toroidal Lie algebra configuration.

    Parameters: rank n >= 2 of the torus, the coefficient Lie algebra g, the
    cocycle mix (mu1, mu2), and a switch for the form factor on the central
    term of the loop-loop bracket.  The switch exists as a negative control:
    with it off the Jacobi identity fails, which the test suite demonstrates.
    """

    def __init__(self, n: int, g: GAlgebra, mu1=0, mu2=0, loop_central_factor=True):
        if n < 2:
            raise ValidationError("rank n must be at least 2")
        self.n = n
        self.g = g
        self.mu1 = Fraction(mu1)
        self.mu2 = Fraction(mu2)
        self.loop_central_factor = bool(loop_central_factor)

    # -- element builders ---------------------------------------------------

    def zero(self) -> AlgElement:
        return AlgElement()

    def loop(self, label, m) -> AlgElement:
        m = self._deg(m)
        if label not in self.g.labels:
            raise ConfigurationError(f"unknown g basis label {label!r}")
        return AlgElement({BasisSymbol(LOOP, label, m): ONE})

    def der(self, i: int, m=None) -> AlgElement:
        m = self._deg(m if m is not None else (0,) * self.n)
        self._check_index(i)
        return AlgElement({BasisSymbol(DER, i, m): ONE})

    def kahler(self, i: int, m=None) -> AlgElement:
        """The class of the one-form symbol K_i@m, in canonical form."""
        m = self._deg(m if m is not None else (0,) * self.n)
        self._check_index(i)
        return self.canon_kahler({BasisSymbol(KAHLER, i, m): ONE})

    def make_der(self, p: Sequence, m) -> AlgElement:
        """The p-weighted derivation sum_i p_i d_i@m."""
        m = self._deg(m)
        return AlgElement({BasisSymbol(DER, i + 1, m): Fraction(c)
                           for i, c in enumerate(p)})

    def make_kahler(self, p: Sequence, m) -> AlgElement:
        """The class of the p-weighted one-form sum_i p_i K_i@m."""
        m = self._deg(m)
        return self.canon_kahler({BasisSymbol(KAHLER, i + 1, m): Fraction(c)
                                  for i, c in enumerate(p)})

    # -- canonical one-forms -------------------------------------------------

    def canon_kahler(self, raw) -> AlgElement:
        """Canonical representative modulo  sum_i m_i K_i@m = 0.

        For each degree m != 0 the pivot index (first i with m_i != 0) is
        eliminated; degree-zero symbols carry no relation and pass through,
        as do loop and derivation terms.
        """
        if isinstance(raw, AlgElement):
            raw = raw.terms
        items = raw.items() if isinstance(raw, Mapping) else raw
        out = AlgElement()
        for sym, c in items:
            c = Fraction(c)
            if not c:
                continue
            if sym.kind != KAHLER:
                out += AlgElement({sym: c})
                continue
            m = sym.degree
            pivot = next((j for j, mj in enumerate(m) if mj), None)
            if pivot is None or sym.index != pivot + 1:
                out += AlgElement({sym: c})
                continue
            scale = -c * Fraction(1, m[pivot])
            repl = {BasisSymbol(KAHLER, j + 1, m): scale * m[j]
                    for j in range(self.n) if j != pivot and m[j]}
            out += AlgElement(repl)
        return out

    # -- the bracket ---------------------------------------------------------

    def bracket(self, x: AlgElement, y: AlgElement) -> AlgElement:
        """Bilinear extension of the bracket case table; output canonical."""
        self._validate_element(x)
        self._validate_element(y)
        out = AlgElement()
        for s1, c1 in x.terms.items():
            for s2, c2 in y.terms.items():
                out += (c1 * c2) * self._bracket_syms(s1, s2)
        return out

    def _bracket_syms(self, s1: BasisSymbol, s2: BasisSymbol) -> AlgElement:
        k1, k2 = s1.kind, s2.kind
        if KAHLER in (k1, k2) and DER not in (k1, k2):
            return AlgElement()  # one-forms are central among loops and one-forms
        if k1 == LOOP and k2 == LOOP:
            m, k = s1.degree, s2.degree
            mk = deg_add(m, k)
            out = AlgElement({BasisSymbol(LOOP, l, mk): c
                              for l, c in self.g.bracket_labels(s1.index, s2.index).items()})
            factor = (self.g.form_value(s1.index, s2.index)
                      if self.loop_central_factor else ONE)
            if factor:
                out += factor * self.make_kahler(m, mk)
            return out
        if k1 == DER and k2 == LOOP:
            m, k = s1.degree, s2.degree
            return Fraction(k[s1.index - 1]) * AlgElement(
                {BasisSymbol(LOOP, s2.index, deg_add(m, k)): ONE})
        if k1 == DER and k2 == KAHLER:
            m, k = s1.degree, s2.degree
            i, j = s1.index, s2.index
            mk = deg_add(m, k)
            out = Fraction(k[i - 1]) * self.canon_kahler(
                {BasisSymbol(KAHLER, j, mk): ONE})
            if i == j:
                out += self.make_kahler(m, mk)
            return out
        if k1 == DER and k2 == DER:
            m, k = s1.degree, s2.degree
            i, j = s1.index, s2.index
            mk = deg_add(m, k)
            out = AlgElement([(BasisSymbol(DER, j, mk), Fraction(k[i - 1])),
                              (BasisSymbol(DER, i, mk), Fraction(-m[j - 1]))])
            cocycle = -self.mu1 * k[i - 1] * m[j - 1] + self.mu2 * m[i - 1] * k[j - 1]
            if cocycle:
                out += cocycle * self.make_kahler(m, mk)
            return out
        # remaining orders follow by antisymmetry
        return -ONE * self._bracket_syms(s2, s1)

    def jacobi_defect(self, x: AlgElement, y: AlgElement, z: AlgElement) -> AlgElement:
        """[x,[y,z]] + [y,[z,x]] + [z,[x,y]]; zero when the axioms hold."""
        return (self.bracket(x, self.bracket(y, z))
                + self.bracket(y, self.bracket(z, x))
                + self.bracket(z, self.bracket(x, y)))

    # -- automorphisms -------------------------------------------------------

    def coordinate_change(self, C, x: AlgElement) -> AlgElement:
        """The change-of-coordinates automorphism attached to a unimodular C."""
        C = tuple(tuple(int(v) for v in row) for row in C)
        if len(C) != self.n or any(len(r) != self.n for r in C):
            raise ValidationError("coordinate matrix has wrong shape")
        if det(C) not in (1, -1):
            raise ValidationError("coordinate matrix must be unimodular")
        Cinv = mat_inverse(C)
        self._validate_element(x)
        out = AlgElement()
        for sym, c in x.terms.items():
            m = sym.degree
            md = tuple(sum(C[r][i] * m[i] for i in range(self.n)) for r in range(self.n))
            if sym.kind == LOOP:
                out += AlgElement({BasisSymbol(LOOP, sym.index, md): c})
            elif sym.kind == KAHLER:
                col = sym.index - 1
                out += c * self.make_kahler([C[r][col] for r in range(self.n)], md)
            else:
                row = sym.index - 1
                out += c * self.make_der(Cinv[row], md)
        return out

    def lattice_embed(self, alpha_basis, x: AlgElement) -> AlgElement:
        """Embed the rank-(n-1) subalgebra (degrees with first coordinate 0)
        along a Z-basis (alpha_1..alpha_n) of the degree lattice.

        Loop symbols go to degree sum_i m_i alpha_i; one-form and derivation
        symbols are re-weighted by alpha_i and by the dual basis vector.
        """
        A = tuple(tuple(int(v) for v in row) for row in alpha_basis)
        if len(A) != self.n or any(len(r) != self.n for r in A):
            raise ValidationError("alpha basis has wrong shape")
        if det(A) not in (1, -1):
            raise ValidationError("alpha basis is not a lattice basis")
        Ainv = mat_inverse(A)
        self._validate_element(x)
        out = AlgElement()
        for sym, c in x.terms.items():
            m = sym.degree
            if m[0] != 0:
                raise ValidationError(
                    "element lies outside the first-coordinate-zero subalgebra")
            md = tuple(sum(Fraction(m[i]) * A[i][j] for i in range(self.n))
                       for j in range(self.n))
            md = tuple(int(v) for v in md)
            if sym.kind == LOOP:
                out += AlgElement({BasisSymbol(LOOP, sym.index, md): c})
            elif sym.kind == KAHLER:
                out += c * self.make_kahler(A[sym.index - 1], md)
            else:
                dual = tuple(Ainv[r][sym.index - 1] for r in range(self.n))
                out += c * self.make_der(dual, md)
        return out

    # -- sampling for the randomized suites ----------------------------------

    def random_symbol(self, rng, lo: int, hi: int) -> BasisSymbol:
        kind = rng.choice((LOOP, KAHLER, DER))
        m = rng.degree(self.n, lo, hi)
        if kind == LOOP:
            return BasisSymbol(LOOP, rng.choice(self.g.labels), m)
        return BasisSymbol(kind, rng.randint(1, self.n), m)

    def random_homogeneous(self, rng, lo: int, hi: int) -> AlgElement:
        """A random nonzero homogeneous element with a small rational weight."""
        while True:
            sym = self.random_symbol(rng, lo, hi)
            el = self.canon_kahler({sym: rng.nonzero_fraction()})
            if el:
                return el

    # -- helpers --------------------------------------------------------------

    def _deg(self, m) -> tuple:
        m = tuple(int(v) for v in m)
        if len(m) != self.n:
            raise ConfigurationError(f"degree {m} has length {len(m)}, expected {self.n}")
        return m

    def _check_index(self, i: int):
        if not 1 <= i <= self.n:
            raise ConfigurationError(f"coordinate index {i} outside 1..{self.n}")

    def _validate_element(self, x: AlgElement):
        for sym in x.terms:
            if len(sym.degree) != self.n:
                raise ConfigurationError("element degree length does not match the algebra")
            if sym.kind == LOOP:
                if sym.index not in self.g.labels:
                    raise ConfigurationError(f"loop label {sym.index!r} not in g")
            elif not 1 <= sym.index <= self.n:
                raise ConfigurationError("coordinate index outside 1..n")
