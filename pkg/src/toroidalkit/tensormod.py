"""Concrete weight modules over the toroidal and map toroidal algebras.

Three families share the vector layout v1 (x) v2 (x) t^r with sparse
weight-indexed storage:

* `TensorModule`: the toroidal-algebra module attached to (c, lam1, lam2,
  alpha); loop symbols act through V(lam1), one-forms act by zero, and
  derivations act by the weight shift alpha_i + r_i plus the gl_n twist.
* `EvalTensorModule`: the same space as a module over the map algebra, with
  X(b) acting as psi(b) X for an evaluation point psi of B.
* `RingTensorModule`: the rank-(n-1) family with two extra scalars (a, b)
  giving the action of the first-direction one-forms and derivations; this is
  the inducing space of the level stacks in `verma`.

The de Rham complex lives here too: the modules with (c, lam2) = (k, omega_k),
the differential between consecutive ones, and per-fiber image bases.  Window
truncation applies only to enumeration; the actions themselves are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .coeffalg import EvaluationPoint
from .exactlin import Echelon, add_scaled
from .maptoroidal import MapElement, MapToroidal
from .reps import RepModule, build_gln_rep, build_irrep_g, wedge_power_rep
from .rng import SplitMix64
from .toroidal import (
    DER, KAHLER, LOOP, AlgElement, ConfigurationError, FullToroidal,
    ValidationError,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class ModuleVector:
    """Sparse vector with keys (v1 index, v2 index, degree tuple)."""

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
        return isinstance(other, ModuleVector) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = out.get(key, ZERO) + c
            if v:
                out[key] = v
            else:
                del out[key]
        res = ModuleVector()
        res.terms = out
        return res

    def __neg__(self):
        res = ModuleVector()
        res.terms = {k: -c for k, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        c = Fraction(c)
        res = ModuleVector()
        if c:
            res.terms = {k: c * v for k, v in self.terms.items()}
        return res

    def degrees(self):
        return sorted({key[2] for key in self.terms})

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for key in sorted(self.terms):
            i1, i2, r = key
            c = self.terms[key]
            body = f"v{i1}(x)w{i2}(x)t^{tuple(r)}"
            bits.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(bits)


class WeightWindow:
    """A componentwise box of degree vectors, used only for enumeration."""

    def __init__(self, lo: Sequence[int], hi: Sequence[int]):
        self.lo = tuple(int(v) for v in lo)
        self.hi = tuple(int(v) for v in hi)
        if len(self.lo) != len(self.hi) or any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValidationError("window bounds must satisfy lo <= hi componentwise")

    def __contains__(self, r) -> bool:
        return all(a <= v <= b for v, a, b in zip(r, self.lo, self.hi))

    def __iter__(self):
        def rec(prefix, k):
            if k == len(self.lo):
                yield tuple(prefix)
                return
            for v in range(self.lo[k], self.hi[k] + 1):
                yield from rec(prefix + [v], k)
        # generate in lexicographic order for determinism
        yield from self._lex()

    def _lex(self):
        dims = len(self.lo)
        cur = list(self.lo)
        while True:
            yield tuple(cur)
            k = dims - 1
            while k >= 0:
                cur[k] += 1
                if cur[k] <= self.hi[k]:
                    break
                cur[k] = self.lo[k]
                k -= 1
            if k < 0:
                return

    def __repr__(self):
        return f"[{self.lo}..{self.hi}]"


class _TensorBase:
    """Shared layout and enumeration helpers for the three module families."""

    def __init__(self, V1: RepModule, V2: RepModule, alpha: Sequence):
        self.V1 = V1
        self.V2 = V2
        self.alpha = tuple(Fraction(a) for a in alpha)
        self.fiber_dim = V1.dim * V2.dim

    def vector(self, i1: int, i2: int, r) -> ModuleVector:
        return ModuleVector({(i1, i2, tuple(int(v) for v in r)): ONE})

    def fiber_keys(self, r) -> list:
        r = tuple(int(v) for v in r)
        return [(i1, i2, r) for i1 in range(self.V1.dim) for i2 in range(self.V2.dim)]

    def fiber_basis(self, r) -> list:
        return [ModuleVector({k: ONE}) for k in self.fiber_keys(r)]

    def weight_of(self, r) -> tuple:
        return tuple(a + v for a, v in zip(self.alpha, r))

    def weight_table(self, window: WeightWindow) -> dict:
        """Weight-space dimensions over the window (constant for these
        families: the product of the two fiber dimensions)."""
        return {self.weight_of(r): self.fiber_dim for r in window}

    def random_fiber_vector(self, rng: SplitMix64, r) -> ModuleVector:
        while True:
            v = ModuleVector({k: rng.fraction(3, 3) for k in self.fiber_keys(r)})
            if v:
                return v

    def axiom_defect(self, x, y, v: ModuleVector) -> ModuleVector:
        """act([x,y], v) - act(x, act(y, v)) + act(y, act(x, v))."""
        return (self.act(self._bracket(x, y), v)
                - self.act(x, self.act(y, v)) + self.act(y, self.act(x, v)))


class TensorModule(_TensorBase):
    """The toroidal-algebra weight module attached to (c, lam1, lam2, alpha)."""

    def __init__(self, tau: FullToroidal, c, lam1, lam2, alpha):
        self.tau = tau
        self.c = Fraction(c)
        self.lam1 = tuple(int(v) for v in lam1)
        self.lam2 = tuple(int(v) for v in lam2)
        if len(alpha) != tau.n:
            raise ConfigurationError("alpha length must match the algebra rank")
        V1 = build_irrep_g(tau.g, self.lam1)
        V2 = build_gln_rep(tau.n, self.c, self.lam2)
        super().__init__(V1, V2, alpha)

    def _bracket(self, x, y):
        return self.tau.bracket(x, y)

    def act(self, x: AlgElement, v: ModuleVector) -> ModuleVector:
        if not isinstance(x, AlgElement):
            raise ConfigurationError("tensor modules act by toroidal elements")
        out: dict = {}
        for sym, c in x.terms.items():
            for (i1, i2, r), cv in v.terms.items():
                self._act_sym(sym, c * cv, i1, i2, r, out)
        res = ModuleVector()
        res.terms = {k: v2 for k, v2 in out.items() if v2}
        return res

    def _act_sym(self, sym, coef, i1, i2, r, out):
        m = sym.degree
        if sym.kind == KAHLER:
            return
        target = tuple(a + b for a, b in zip(m, r))
        if sym.kind == LOOP:
            for j1, cw in self.V1.act(sym.index, {i1: ONE}).items():
                key = (j1, i2, target)
                out[key] = out.get(key, ZERO) + coef * cw
            return
        i = sym.index
        scale = self.alpha[i - 1] + r[i - 1]
        if scale:
            key = (i1, i2, target)
            out[key] = out.get(key, ZERO) + coef * scale
        for j in range(1, self.tau.n + 1):
            if m[j - 1]:
                for j2, cw in self.V2.act(("E", j, i), {i2: ONE}).items():
                    key = (i1, j2, target)
                    out[key] = out.get(key, ZERO) + coef * m[j - 1] * cw


class EvalTensorModule(_TensorBase):
    """The tensor module as a single point evaluation module over the map
    algebra: X(b) acts as psi(b) X."""

    def __init__(self, mt: MapToroidal, c, lam1, lam2, alpha, psi: EvaluationPoint):
        if psi.algebra is not mt.B:
            raise ConfigurationError("evaluation point belongs to a different B")
        self.mt = mt
        self.psi = psi
        self.base = TensorModule(mt.tau, c, lam1, lam2, alpha)
        super().__init__(self.base.V1, self.base.V2, alpha)

    def _bracket(self, x, y):
        return self.mt.bracket(self._promote(x), self._promote(y))

    def _promote(self, x) -> MapElement:
        if isinstance(x, AlgElement):
            return self.mt.embed(x)
        return x

    def act(self, x, v: ModuleVector) -> ModuleVector:
        x = self._promote(x)
        out = ModuleVector()
        for (sym, lbl), c in x.terms.items():
            scale = c * self.psi(lbl)
            if scale:
                out += scale * self.base.act(AlgElement({sym: ONE}), v)
        return out


class RingTensorModule(_TensorBase):
    """The rank-(n-1) module with scalars (a, b) for the first-direction
    one-forms and derivations; degrees live in Z^(n-1)."""

    def __init__(self, tau: FullToroidal, a, b, c, lam1, lam2, alpha_ring,
                 psi: EvaluationPoint | None = None, mt: MapToroidal | None = None):
        self.tau = tau
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.c = Fraction(c)
        self.lam1 = tuple(int(v) for v in lam1)
        self.lam2 = tuple(int(v) for v in lam2)
        if len(alpha_ring) != tau.n - 1:
            raise ConfigurationError("ring module alpha must have n-1 entries")
        self.psi = psi
        self.mt = mt
        if psi is not None and (mt is None or psi.algebra is not mt.B):
            raise ConfigurationError("evaluation point does not match the map algebra")
        V1 = build_irrep_g(tau.g, self.lam1)
        V2 = build_gln_rep(tau.n - 1, self.c, self.lam2)
        super().__init__(V1, V2, alpha_ring)

    def _bracket(self, x, y):
        if isinstance(x, MapElement) or isinstance(y, MapElement):
            return self.mt.bracket(x, y)
        return self.tau.bracket(x, y)

    def act(self, x, v: ModuleVector) -> ModuleVector:
        """Action of a first-coordinate-zero toroidal element (or, with an
        evaluation point attached, of a map-algebra element)."""
        if isinstance(x, MapElement):
            if self.psi is None:
                raise ConfigurationError("ring module carries no evaluation point")
            out = ModuleVector()
            for (sym, lbl), c in x.terms.items():
                scale = c * self.psi(lbl)
                if scale:
                    out += scale * self.act(AlgElement({sym: ONE}), v)
            return out
        out: dict = {}
        for sym, c in x.terms.items():
            if sym.degree[0] != 0:
                raise ValidationError(
                    "ring modules only carry the first-coordinate-zero subalgebra")
            ring_m = sym.degree[1:]
            for (i1, i2, r), cv in v.terms.items():
                self._act_sym(sym, ring_m, c * cv, i1, i2, r, out)
        res = ModuleVector()
        res.terms = {k: v2 for k, v2 in out.items() if v2}
        return res

    def _act_sym(self, sym, ring_m, coef, i1, i2, r, out):
        target = tuple(a + b for a, b in zip(ring_m, r))
        if sym.kind == KAHLER:
            if sym.index == 1 and self.a:
                key = (i1, i2, target)
                out[key] = out.get(key, ZERO) + coef * self.a
            return
        if sym.kind == LOOP:
            for j1, cw in self.V1.act(sym.index, {i1: ONE}).items():
                key = (j1, i2, target)
                out[key] = out.get(key, ZERO) + coef * cw
            return
        i = sym.index
        if i == 1:
            if self.b:
                key = (i1, i2, target)
                out[key] = out.get(key, ZERO) + coef * self.b
            return
        scale = self.alpha[i - 2] + r[i - 2]
        if scale:
            key = (i1, i2, target)
            out[key] = out.get(key, ZERO) + coef * scale
        for j in range(2, self.tau.n + 1):
            if ring_m[j - 2]:
                for j2, cw in self.V2.act(("E", j - 1, i - 1), {i2: ONE}).items():
                    key = (i1, j2, target)
                    out[key] = out.get(key, ZERO) + coef * ring_m[j - 2] * cw

    def d_weight_of(self, r) -> tuple:
        """Eigenvalues of (d_1, ..., d_n) on the fiber at ring degree r."""
        return (self.b,) + self.weight_of(r)


def module_axiom_defect(module, x, y, v: ModuleVector) -> ModuleVector:
    return module.axiom_defect(x, y, v)


# ---------------------------------------------------------------------------
# the de Rham complex
# ---------------------------------------------------------------------------

class DeRhamComplex:
    """The chain of differential-form modules over a fixed toroidal algebra
    and twist alpha, with the degree-preserving differential between
    consecutive ones."""

    def __init__(self, tau: FullToroidal, alpha):
        self.tau = tau
        self.n = tau.n
        if len(alpha) != tau.n:
            raise ConfigurationError("alpha length must match the algebra rank")
        self.alpha = tuple(Fraction(a) for a in alpha)
        self._modules = {}

    def module(self, k: int) -> TensorModule:
        if not 0 <= k <= self.n:
            raise ValidationError(f"form degree {k} outside 0..{self.n}")
        if k not in self._modules:
            lam2 = tuple(1 if i == k else 0 for i in range(1, self.n))
            self._modules[k] = TensorModule(self.tau, k, (0,) * len(self.tau.g.cartan),
                                            lam2, self.alpha)
        return self._modules[k]

    def subsets(self, k: int) -> list:
        return self.module(k).V2.meta["basis"]

    def d(self, k: int, v: ModuleVector) -> ModuleVector:
        """The differential into the (k+1)-form module:
        w (x) t^r  ->  sum_j (alpha_j + r_j) e_j ^ w (x) t^r."""
        if not 0 <= k <= self.n - 1:
            raise ValidationError(f"differential index {k} outside 0..{self.n - 1}")
        src = self.subsets(k)
        dst = {s: i for i, s in enumerate(self.subsets(k + 1))}
        out = ModuleVector()
        for (i1, i2, r), c in v.terms.items():
            s = src[i2]
            for j in range(1, self.n + 1):
                if j in s:
                    continue
                scale = self.alpha[j - 1] + r[j - 1]
                if not scale:
                    continue
                sgn = -ONE if sum(1 for x in s if x < j) % 2 else ONE
                target = tuple(sorted(s + (j,)))
                out += ModuleVector({(i1, dst[target], r): c * scale * sgn})
        return out

    def image_basis(self, k: int, window: WeightWindow) -> dict:
        """Exact per-fiber bases of the image of the k-th differential inside
        the (k+1)-form module, over the window."""
        mod_k = self.module(k)
        out = {}
        for r in window:
            ech = Echelon()
            for i2 in range(mod_k.V2.dim):
                ech.add(dict(self.d(k, mod_k.vector(0, i2, r)).terms))
            out[r] = [ModuleVector(row) for row in ech.rows]
        return out

    def fiber_matrix_rank(self, k: int, r) -> int:
        mod_k = self.module(k)
        ech = Echelon()
        for i2 in range(mod_k.V2.dim):
            ech.add(dict(self.d(k, mod_k.vector(0, i2, r)).terms))
        return ech.rank

    def fiber_kernel_dim(self, k: int, r) -> int:
        return self.module(k).V2.dim - self.fiber_matrix_rank(k, r)


# ---------------------------------------------------------------------------
# window-truncated cyclicity evidence and evaluation checks
# ---------------------------------------------------------------------------

def cyclicity_generators(tau: FullToroidal) -> list:
    """The documented degree-bounded generator set: Chevalley loop symbols at
    degrees +-e_i, the degree +-e_i derivations, and the flat derivations."""
    gens = []
    chev = tau.g.simple_raising + tau.g.simple_lowering + tau.g.cartan
    units = []
    for i in range(tau.n):
        e = [0] * tau.n
        e[i] = 1
        units.append(tuple(e))
        units.append(tuple(-v for v in e))
    for m in units:
        for x in chev:
            gens.append(tau.loop(x, m))
        for j in range(1, tau.n + 1):
            gens.append(tau.der(j, m))
    for j in range(1, tau.n + 1):
        gens.append(tau.der(j, (0,) * tau.n))
    return gens


class FiberFamily:
    """A window-indexed family of target fiber bases inside a host module;
    either the whole module or a submodule family such as a de Rham image."""

    def __init__(self, host, bases: Mapping):
        self.host = host
        self.bases = dict(bases)

    @classmethod
    def full(cls, module, window: WeightWindow):
        return cls(module, {r: module.fiber_basis(r) for r in window})

    def dim_at(self, r) -> int:
        return len(self.bases.get(tuple(r), ()))

    def random_vector(self, rng: SplitMix64, r) -> ModuleVector:
        basis = self.bases[tuple(r)]
        while True:
            v = ModuleVector()
            for b in basis:
                v += rng.fraction(3, 3) * b
            if v:
                return v


def window_cyclicity_report(family: FiberFamily, window: WeightWindow,
                            samples: int, seed: int, probes=()) -> dict:
    """Desk-scale cyclicity evidence: from each start vector, close under the
    documented generator set while staying inside the window, and check that
    every fiber of the family is fully regenerated.

    The verdict is evidence about the window only, not a proof: a PASS means
    no proper invariant family was exhibited at this truncation.
    """
    host = family.host
    tau = getattr(host, "tau", None) or host.mt.tau
    gens = cyclicity_generators(tau)
    rng = SplitMix64(seed)
    starts = []
    nonempty = [r for r in window if family.dim_at(r) > 0]
    if not nonempty:
        raise ValidationError("family has no vectors inside the window")
    for _ in range(samples):
        r = rng.choice(nonempty)
        starts.append(("random", r, family.random_vector(rng, r)))
    starts.extend(("probe", min(v.degrees()), v) for v in probes)

    runs = []
    all_ok = True
    for tag, r0, v0 in starts:
        spans = {r: Echelon() for r in window}
        queue = [v0]
        spans[tuple(r0)].add(dict(v0.terms))
        while queue:
            v = queue.pop()
            for gx in gens:
                img = host.act(gx, v)
                if not img:
                    continue
                degs = img.degrees()
                if any(d not in window for d in degs):
                    continue
                for d in degs:
                    part = ModuleVector({k: c for k, c in img.terms.items()
                                         if k[2] == d})
                    if spans[d].add(dict(part.terms)):
                        queue.append(part)
        missing = {}
        for r in window:
            want = family.dim_at(r)
            got = spans[tuple(r)].rank
            if got < want:
                missing[tuple(r)] = (got, want)
        ok = not missing
        all_ok = all_ok and ok
        runs.append({
            "start": tag,
            "degree": tuple(r0),
            "regenerated": ok,
            "missing_fibers": sorted(missing.items()),
        })
    return {
        "verdict": "PASS" if all_ok else "FAIL",
        "evidence_only": True,
        "samples": samples,
        "probes": len(probes),
        "runs": runs,
    }


def evaluation_factorization_check(module: EvalTensorModule, window: WeightWindow,
                                   samples: int, seed: int) -> dict:
    """Certify the single-point behaviour of an evaluation module:
    X(b) v = psi(b) X v on samples, the kernel ideal of psi annihilates every
    windowed fiber exhaustively, and all one-form symbols act by zero."""
    from .coeffalg import ideal_of_point

    mt, psi = module.mt, module.psi
    tau = mt.tau
    rng = SplitMix64(seed)
    gens = cyclicity_generators(tau)
    b_elements = [mt.B.element({lbl: ONE}) for lbl in mt.B.labels]
    failures = []

    checked_scaling = 0
    for _ in range(samples):
        x = rng.choice(gens)
        b = rng.choice(b_elements)
        r = rng.choice(list(window))
        v = module.random_fiber_vector(rng, r)
        lhs = module.act(mt.embed(x, b), v)
        rhs = psi(b) * module.act(mt.embed(x), v)
        checked_scaling += 1
        if lhs != rhs:
            failures.append(("scaling", repr(x), repr(b), repr(v)))

    ideal = ideal_of_point(psi)
    checked_ideal = 0
    for mgen in ideal:
        for x in gens:
            for r in window:
                for v in module.fiber_basis(r):
                    checked_ideal += 1
                    if module.act(mt.embed(x, mgen), v):
                        failures.append(("ideal", repr(x), repr(mgen), tuple(r)))

    checked_central = 0
    one_forms = [tau.kahler(i, m) for i in range(1, tau.n + 1)
                 for m in [(0,) * tau.n] + [u for u in _unit_degrees(tau.n)]]
    one_forms = [z for z in one_forms if z]
    for z in one_forms:
        for b in b_elements:
            for r in window:
                for v in module.fiber_basis(r):
                    checked_central += 1
                    if module.act(mt.embed(z, b), v):
                        failures.append(("one-form", repr(z), repr(b), tuple(r)))

    return {
        "verdict": "PASS" if not failures else "FAIL",
        "scaling_samples": checked_scaling,
        "ideal_checks": checked_ideal,
        "one_form_checks": checked_central,
        "ideal_dim": len(ideal),
        "failures": failures[:10],
    }


def _unit_degrees(n):
    out = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        out.append(tuple(e))
        out.append(tuple(-v for v in e))
    return out
