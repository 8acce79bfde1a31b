"""Finite dimensional commutative unital coefficient algebras over Q.

An algebra is a finite basis (first label is the unit) with a multiplication
table, validated for commutativity, associativity and the unit law at load.
The main constructor is a univariate quotient Q[s]/(f) for a monic rational
polynomial f; those presentations also support enumerating the rational
evaluation points (algebra maps to Q) and the ideals they cut out.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactlin import ExactMatrix, rref
from .toroidal import ConfigurationError, ValidationError

ZERO = Fraction(0)
ONE = Fraction(1)


class BElement:
    """A rational combination of coefficient-algebra basis labels."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs: Mapping | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        self.algebra = algebra
        self.coeffs = {}
        for l, c in items:
            if l not in algebra.labels:
                raise ConfigurationError(f"unknown coefficient label {l!r}")
            c = Fraction(c)
            if c:
                self.coeffs[l] = self.coeffs.get(l, ZERO) + c
                if not self.coeffs[l]:
                    del self.coeffs[l]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, BElement) and other.algebra is self.algebra
                and other.coeffs == self.coeffs)

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for l, c in other.coeffs.items():
            v = out.get(l, ZERO) + c
            if v:
                out[l] = v
            else:
                del out[l]
        return BElement(self.algebra, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        return BElement(self.algebra, {l: Fraction(c) * v for l, v in self.coeffs.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{l}" if c != 1 else str(l)
                          for l, c in sorted(self.coeffs.items()))

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise ConfigurationError("elements belong to different coefficient algebras")


class CoeffAlgebra:
    """Commutative unital algebra from a basis and multiplication table.

    `table[(a, b)]` gives the product of basis labels as {label: coefficient};
    the table must be symmetric, associative on all basis triples, and the
    first label must act as the unit.
    """

    def __init__(self, labels: Sequence[str], table: Mapping, modulus=None, name=None):
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.unit_label = self.labels[0]
        self.table = {}
        for (a, b), entry in table.items():
            self.table[(a, b)] = {l: Fraction(c) for l, c in entry.items() if Fraction(c)}
        self.modulus = list(modulus) if modulus is not None else None
        self.name = name or (f"Q[s]/({format_poly(self.modulus)})" if self.modulus
                             else f"B(dim {self.dim})")
        self._validate()

    # -- element constructors -------------------------------------------------

    def element(self, coeffs) -> BElement:
        return BElement(self, coeffs)

    def unit(self) -> BElement:
        return BElement(self, {self.unit_label: ONE})

    def gen(self) -> BElement:
        """The generator s of a univariate presentation."""
        if self.modulus is None:
            raise ValidationError(f"{self.name} has no univariate presentation")
        if self.dim == 1:
            # degree-one modulus s - r: the generator is the scalar r
            return BElement(self, {self.unit_label: -self.modulus[0]})
        return BElement(self, {self.labels[1]: ONE})

    def basis_product(self, a: str, b: str) -> dict:
        if (a, b) in self.table:
            return self.table[(a, b)]
        return self.table.get((b, a), {})

    def _validate(self):
        if not self.labels:
            raise ValidationError("coefficient algebra needs at least the unit")
        for a in self.labels:
            u = self.basis_product(self.unit_label, a)
            if u != {a: ONE}:
                raise ValidationError(f"{self.name}: unit law fails on {a}")
            for b in self.labels:
                ab = self.basis_product(a, b)
                ba = self.basis_product(b, a)
                if ab != ba:
                    raise ValidationError(f"{self.name}: table not commutative at ({a},{b})")
        for a in self.labels:
            for b in self.labels:
                for c in self.labels:
                    left = self._mul_dicts(self.basis_product(a, b), {c: ONE})
                    right = self._mul_dicts({a: ONE}, self.basis_product(b, c))
                    if left != right:
                        raise ValidationError(
                            f"{self.name}: associativity fails on ({a},{b},{c})")

    def _mul_dicts(self, x: Mapping, y: Mapping) -> dict:
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for l, c in self.basis_product(a, b).items():
                    v = out.get(l, ZERO) + ca * cb * c
                    if v:
                        out[l] = v
                    else:
                        del out[l]
        return out


def b_mul(a: BElement, b: BElement) -> BElement:
    """Product in the coefficient algebra (bilinear extension of the table)."""
    a._check(b)
    return BElement(a.algebra, a.algebra._mul_dicts(a.coeffs, b.coeffs))


class EvaluationPoint:
    """An algebra homomorphism from a coefficient algebra to Q."""

    def __init__(self, algebra: CoeffAlgebra, values: Mapping):
        self.algebra = algebra
        self.values = {l: Fraction(values[l]) for l in algebra.labels}
        if self.values[algebra.unit_label] != 1:
            raise ValidationError("evaluation point does not send the unit to 1")
        for a in algebra.labels:
            for b in algebra.labels:
                prod = sum((c * self.values[l]
                            for l, c in algebra.basis_product(a, b).items()), ZERO)
                if prod != self.values[a] * self.values[b]:
                    raise ValidationError(
                        f"evaluation point is not multiplicative at ({a},{b})")

    def __call__(self, b) -> Fraction:
        if isinstance(b, BElement):
            if b.algebra is not self.algebra:
                raise ConfigurationError("evaluation point from a different algebra")
            return sum((c * self.values[l] for l, c in b.coeffs.items()), ZERO)
        return self.values[b]

    def __repr__(self):
        if self.algebra.modulus is not None and self.algebra.dim > 1:
            return f"psi(s)={self.values[self.algebra.labels[1]]}"
        return "psi=" + ",".join(f"{l}->{v}" for l, v in sorted(self.values.items()))


# ---------------------------------------------------------------------------
# univariate quotients
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"^(?P<sign>[+-])?(?P<coef>\d+(?:/\d+)?)?\*?(?P<var>s(?:\^(?P<exp>\d+))?)?$")


def parse_poly(text: str) -> list:
    """Parse a polynomial in s with rational coefficients into a dense
    low-to-high coefficient list."""
    s = text.replace(" ", "")
    if not s:
        raise ValidationError("empty polynomial")
    # split into signed terms
    chunks = re.findall(r"[+-]?[^+-]+", s)
    if "".join(chunks) != s:
        raise ValidationError(f"cannot parse polynomial {text!r}")
    coeffs = {}
    for chunk in chunks:
        m = _TERM_RE.match(chunk)
        if not m or (m.group("coef") is None and m.group("var") is None):
            raise ValidationError(f"cannot parse term {chunk!r} in {text!r}")
        sign = -ONE if m.group("sign") == "-" else ONE
        coef = m.group("coef")
        c = sign * (Fraction(coef) if coef is not None else ONE)
        exp = 0
        if m.group("var"):
            exp = int(m.group("exp") or 1)
        coeffs[exp] = coeffs.get(exp, ZERO) + c
    deg = max(coeffs)
    out = [coeffs.get(i, ZERO) for i in range(deg + 1)]
    while len(out) > 1 and not out[-1]:
        out.pop()
    return out


def format_poly(coeffs: Sequence) -> str:
    bits = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        var = "" if i == 0 else ("s" if i == 1 else f"s^{i}")
        if var and abs(c) == 1:
            bits.append(("-" if c < 0 else "") + var)
        else:
            bits.append(f"{c}" + ("*" + var if var else ""))
    return " + ".join(bits).replace("+ -", "- ") if bits else "0"


def univariate_quotient(f) -> CoeffAlgebra:
    """The quotient Q[s]/(f) for a monic polynomial f of degree >= 1.

    Basis 1, s, ..., s^(deg f - 1); products reduce modulo f.
    """
    coeffs = parse_poly(f) if isinstance(f, str) else [Fraction(c) for c in f]
    d = len(coeffs) - 1
    if d < 1:
        raise ValidationError("modulus must have degree at least 1")
    if coeffs[-1] != 1:
        raise ValidationError("modulus must be monic")
    labels = ["1"] + [("s" if k == 1 else f"s^{k}") for k in range(1, d)]

    # s^d = -(c_0 + c_1 s + ... + c_{d-1} s^{d-1})
    def reduce_power(k: int) -> dict:
        if k < d:
            return {labels[k]: ONE}
        # iteratively: dense coefficient list of length d
        dense = [ZERO] * d
        dense[d - 1] = ONE
        for _ in range(k - (d - 1)):
            top = dense[d - 1]
            dense = [ZERO] + dense[:-1]
            if top:
                for i in range(d):
                    dense[i] -= top * coeffs[i]
        return {labels[i]: dense[i] for i in range(d) if dense[i]}

    table = {}
    for i in range(d):
        for j in range(d):
            table[(labels[i], labels[j])] = reduce_power(i + j)
    return CoeffAlgebra(labels, table, modulus=coeffs)


def rational_roots(coeffs: Sequence) -> list:
    """All rational roots of a rational polynomial, with multiplicity.

    Returns a list of (root, multiplicity); raises if the polynomial does not
    split over Q.
    """
    work = [Fraction(c) for c in coeffs]
    roots = {}
    while len(work) > 2:
        r = _find_rational_root(work)
        if r is None:
            raise ValidationError(
                f"modulus {format_poly(coeffs)} has irrational or complex roots; "
                "only rationally split presentations are supported")
        roots[r] = roots.get(r, 0) + 1
        work = _synthetic_div(work, r)
    if len(work) == 2:
        r = -work[0] / work[1]
        roots[r] = roots.get(r, 0) + 1
    return sorted(roots.items())


def _find_rational_root(coeffs) -> Fraction | None:
    # clear denominators, then candidate roots p/q with p | constant, q | leading
    from math import gcd
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    while ints and ints[0] == 0:
        # zero is a root
        return ZERO
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(v):
        out = []
        i = 1
        while i * i <= v:
            if v % i == 0:
                out.extend((i, v // i))
            i += 1
        return sorted(set(out))

    for p in divisors(a0):
        for q in divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if not _poly_eval(coeffs, cand):
                    return cand
    return None


def _poly_eval(coeffs, x: Fraction) -> Fraction:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _synthetic_div(coeffs, root: Fraction) -> list:
    out = [ZERO] * (len(coeffs) - 1)
    carry = ZERO
    for i in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[i] + carry * root
        out[i - 1] = carry
    return out


def points_of(B: CoeffAlgebra) -> list:
    """The rational evaluation points of B, one per distinct root of the
    modulus (repeated roots give the single reduced evaluation)."""
    if B.dim == 1:
        return [EvaluationPoint(B, {B.unit_label: ONE})]
    if B.modulus is None:
        raise ValidationError(
            f"{B.name}: point enumeration needs a univariate presentation")
    points = []
    for root, _mult in rational_roots(B.modulus):
        values = {}
        power = ONE
        for k, label in enumerate(B.labels):
            values[label] = power
            power *= root
        points.append(EvaluationPoint(B, values))
    return points


def point_at(B: CoeffAlgebra, s_value) -> EvaluationPoint:
    """The evaluation point sending s to the given rational (must be a root)."""
    s_value = Fraction(s_value)
    for psi in points_of(B):
        if B.dim == 1 or psi(B.gen()) == s_value:
            return psi
    raise ValidationError(f"{B.name} has no evaluation point with s = {s_value}")


def ideal_of_point(psi: EvaluationPoint) -> list:
    """An exact basis of the kernel of the evaluation map (dim B - 1 elements)."""
    B = psi.algebra
    row = {l: psi.values[l] for l in B.labels if psi.values[l]}
    _rank, _rows, kernel = rref(ExactMatrix(B.labels, [row]))
    return [BElement(B, kv) for kv in kernel]
