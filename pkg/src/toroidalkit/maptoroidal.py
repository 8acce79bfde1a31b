"""The map full toroidal algebra: the toroidal algebra tensored with a
commutative coefficient algebra B.

Elements are rational combinations of pairs (toroidal basis symbol, B basis
label), with the one-form symbols kept canonical exactly as in the untensored
algebra.  Brackets pair the toroidal bracket with multiplication in B.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .coeffalg import BElement, CoeffAlgebra
from .exactlin import det, mat_inverse
from .toroidal import (
    DER, KAHLER, LOOP, AlgElement, BasisSymbol, ConfigurationError, FullToroidal,
    ValidationError,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class MapElement:
    """Rational combination of (basis symbol, coefficient label) pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        self.terms = {}
        for key, c in items:
            c = Fraction(c)
            if c:
                self.terms[key] = self.terms.get(key, ZERO) + c
                if not self.terms[key]:
                    del self.terms[key]

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, MapElement) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = out.get(key, ZERO) + c
            if v:
                out[key] = v
            else:
                del out[key]
        res = MapElement()
        res.terms = out
        return res

    def __neg__(self):
        res = MapElement()
        res.terms = {k: -c for k, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        c = Fraction(c)
        res = MapElement()
        if c:
            res.terms = {k: c * v for k, v in self.terms.items()}
        return res

    def degree(self):
        degs = {sym.degree for sym, _ in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for sym, lbl in sorted(self.terms, key=lambda k: (k[0].sort_key(), k[1])):
            c = self.terms[(sym, lbl)]
            body = f"{sym}({lbl})"
            bits.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(bits)


@dataclass(frozen=True)
class TriangularData:
    """A splitting of the degree lattice into a rank-(n-1) subgroup and a
    distinguished primitive direction beta."""

    beta: tuple
    m_basis: tuple

    def __post_init__(self):
        rows = [tuple(int(v) for v in r) for r in self.m_basis]
        beta = tuple(int(v) for v in self.beta)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "m_basis", tuple(rows))
        n = len(beta)
        if len(rows) != n - 1 or any(len(r) != n for r in rows):
            raise ValidationError("triangular data needs n-1 subgroup generators")
        full = rows + [beta]
        if det(full) not in (1, -1):
            raise ValidationError("subgroup basis plus beta is not unimodular")
        # coordinate solve: degree -> (subgroup coordinates, beta coordinate)
        object.__setattr__(self, "_basis_matrix", tuple(full))
        object.__setattr__(self, "_inverse", mat_inverse(full))

    @property
    def n(self) -> int:
        return len(self.beta)

    def coords(self, m: Sequence[int]):
        """Write m = sum_i c_i M_i + r*beta; returns (c tuple, r)."""
        m = tuple(int(v) for v in m)
        inv = self._inverse
        c = tuple(sum(Fraction(m[i]) * inv[i][j] for i in range(self.n))
                  for j in range(self.n))
        out = tuple(int(v) for v in c)
        if tuple(Fraction(v) for v in out) != c:
            raise ValidationError(f"degree {m} has non-integer coordinates")
        return out[:-1], out[-1]

    def from_coords(self, c: Sequence[int], r: int) -> tuple:
        coords = tuple(c) + (r,)
        return tuple(sum(coords[i] * self._basis_matrix[i][j] for i in range(self.n))
                     for j in range(self.n))


class MapToroidal:
    """A toroidal algebra configuration tensored with a coefficient algebra."""

    def __init__(self, tau: FullToroidal, B: CoeffAlgebra):
        self.tau = tau
        self.B = B

    # -- constructors ----------------------------------------------------------

    def embed(self, x: AlgElement, b=None) -> MapElement:
        """x tensor b, where b is a BElement, a basis label, or None (unit)."""
        coeffs = self._b_coeffs(b)
        out = MapElement()
        for sym, c in x.terms.items():
            for lbl, cb in coeffs.items():
                out += MapElement({(sym, lbl): c * cb})
        return out

    def loop(self, label, m, b=None) -> MapElement:
        return self.embed(self.tau.loop(label, m), b)

    def kahler(self, i, m=None, b=None) -> MapElement:
        return self.embed(self.tau.kahler(i, m), b)

    def der(self, i, m=None, b=None) -> MapElement:
        return self.embed(self.tau.der(i, m), b)

    def zero(self) -> MapElement:
        return MapElement()

    def _b_coeffs(self, b) -> dict:
        if b is None:
            return {self.B.unit_label: ONE}
        if isinstance(b, BElement):
            if b.algebra is not self.B:
                raise ConfigurationError("coefficient from a different algebra")
            return dict(b.coeffs)
        if b in self.B.labels:
            return {b: ONE}
        raise ConfigurationError(f"unknown coefficient {b!r}")

    # -- structure -------------------------------------------------------------

    def bracket(self, x: MapElement, y: MapElement) -> MapElement:
        """[X(a), Y(b)] = [X,Y](ab), extended bilinearly."""
        out = MapElement()
        for (s1, l1), c1 in x.terms.items():
            for (s2, l2), c2 in y.terms.items():
                tau_part = self.tau._bracket_syms(s1, s2)
                if not tau_part:
                    continue
                b_part = self.B.basis_product(l1, l2)
                coef = c1 * c2
                for sym, cs in tau_part.terms.items():
                    for lbl, cb in b_part.items():
                        out += MapElement({(sym, lbl): coef * cs * cb})
        return out

    def beta_split(self, x: MapElement, tri: TriangularData):
        """Route each homogeneous term by the sign of its beta coordinate."""
        if tri.n != self.tau.n:
            raise ConfigurationError("triangular data rank does not match the algebra")
        minus, zero, plus = MapElement(), MapElement(), MapElement()
        for key, c in x.terms.items():
            _, r = tri.coords(key[0].degree)
            if r > 0:
                plus += MapElement({key: c})
            elif r < 0:
                minus += MapElement({key: c})
            else:
                zero += MapElement({key: c})
        return minus, zero, plus

    def is_central(self, x: MapElement) -> bool:
        """True iff x lies in the span of degree-zero one-form symbols."""
        zero_deg = (0,) * self.tau.n
        return all(sym.kind == KAHLER and sym.degree == zero_deg
                   for sym, _ in x.terms)

    def homogeneous_symbols(self, m) -> list:
        """Canonical basis symbols of the degree-m component, paired with all
        coefficient labels (deterministic order)."""
        m = tuple(int(v) for v in m)
        syms = [BasisSymbol(LOOP, l, m) for l in self.tau.g.labels]
        pivot = next((j for j, mj in enumerate(m) if mj), None)
        for i in range(1, self.tau.n + 1):
            if pivot is None or i != pivot + 1:
                syms.append(BasisSymbol(KAHLER, i, m))
        syms.extend(BasisSymbol(DER, i, m) for i in range(1, self.tau.n + 1))
        return [(s, lbl) for s in syms for lbl in self.B.labels]

    def random_homogeneous(self, rng, lo, hi) -> MapElement:
        while True:
            el = self.embed(self.tau.random_homogeneous(rng, lo, hi),
                            rng.choice(self.B.labels))
            if el:
                return el
