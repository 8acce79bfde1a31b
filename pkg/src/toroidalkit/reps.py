"""Finite dimensional irreducible representations with exact action matrices.

Two constructions:

* `build_irrep_g`: the irreducible highest weight module of a structure
  constant Lie algebra with Chevalley-style triangular data (sl2 and sl3 ship
  built in).  The module is realized as the span of lowering words applied to
  a highest weight vector; the maximal submodule is accumulated weight by
  weight as the kernel of the stacked raising maps, computed exactly, and the
  quotient basis is read off the non-pivot words.

* `build_gln_rep`: an irreducible gl_n module V(c, lam) where the identity
  matrix acts by the scalar c.  For lam the k-th fundamental weight with
  c = k this takes the k-th wedge power of the standard module directly
  (sorted-subset basis, permutation-sign convention); otherwise the sl_n part
  comes from `build_irrep_g` and the diagonal matrix units are assembled from
  the Cartan action plus the scalar.

Every constructed module is validated against the bracket relations of the
acting algebra on all generator pairs, exhaustively over the basis.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .exactlin import Echelon, ExactMatrix, add_scaled, rref
from .toroidal import GAlgebra, ValidationError, sl_generic

ZERO = Fraction(0)
ONE = Fraction(1)


class RepModule:
    """A module given by exact matrices for each generator label.

    `action[x]` is a list of sparse columns ({row: coeff}) over the basis;
    `weights[i]` tags basis vector i with its Cartan eigenvalue tuple (for g
    modules the values on the Cartan basis, for gl modules the eigenvalues of
    the diagonal matrix units).
    """

    def __init__(self, kind, dim, action, weights, bracket_fn, generator_labels,
                 meta=None):
        self.kind = kind
        self.dim = dim
        self.action = action
        self.weights = list(weights)
        self._bracket = bracket_fn
        self.generator_labels = list(generator_labels)
        self.meta = dict(meta or {})

    def act(self, label, v: Mapping) -> dict:
        cols = self.action[label]
        out: dict = {}
        for j, c in v.items():
            if c:
                add_scaled(out, cols[j], c)
        return out

    def act_combination(self, combo: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for label, c in combo.items():
            add_scaled(out, self.act(label, v), c)
        return out

    def bracket_labels(self, x, y) -> dict:
        """[x, y] of two generator labels as a combination of labels."""
        return self._bracket(x, y)

    def basis_vector(self, i: int) -> dict:
        return {i: ONE}


def rep_axiom_defect(rep: RepModule, x, y, v: Mapping) -> dict:
    """rho([x,y]) v - rho(x) rho(y) v + rho(y) rho(x) v; zero iff the module
    axioms hold on this triple."""
    out = rep.act_combination(rep.bracket_labels(x, y), v)
    add_scaled(out, rep.act(x, rep.act(y, v)), -ONE)
    add_scaled(out, rep.act(y, rep.act(x, v)), ONE)
    return out


def _validate_rep(rep: RepModule):
    for x in rep.generator_labels:
        for y in rep.generator_labels:
            for i in range(rep.dim):
                if rep_axiom_defect(rep, x, y, rep.basis_vector(i)):
                    raise ValidationError(
                        f"action matrices violate the bracket relation on ({x},{y})")


# ---------------------------------------------------------------------------
# highest weight modules for structure-constant g
# ---------------------------------------------------------------------------

def _triangular_data(g: GAlgebra):
    if not (g.cartan and g.simple_raising and g.simple_lowering):
        raise ValidationError(f"{g.name} carries no triangular decomposition data")

    def ad_weight(label):
        w = []
        for h in g.cartan:
            entry = g.bracket_labels(h, label)
            if set(entry) - {label}:
                raise ValidationError(f"{g.name}: basis label {label} is not an "
                                      "ad-eigenvector of the Cartan part")
            w.append(entry.get(label, ZERO))
        return tuple(w)

    def closure(seed):
        found = list(seed)
        while True:
            new = []
            for a in found:
                for b in found:
                    for l in g.bracket_labels(a, b):
                        if l not in g.cartan and l not in found and l not in new:
                            new.append(l)
            if not new:
                return found
            found.extend(new)

    positive = closure(g.simple_raising)
    negative = closure(g.simple_lowering)
    rest = [l for l in g.labels if l not in g.cartan]
    if sorted(positive + negative) != sorted(rest):
        raise ValidationError(f"{g.name}: triangular decomposition does not "
                              "partition the basis")
    roots = {l: ad_weight(l) for l in rest}
    return positive, negative, roots


def build_irrep_g(g: GAlgebra, lam: Sequence[int]) -> RepModule:
    """The finite dimensional irreducible g-module with dominant integral
    highest weight lam (coordinates on the fundamental weights)."""
    lam = tuple(int(v) for v in lam)
    if len(lam) != len(g.cartan):
        raise ValidationError(f"weight {lam} has wrong length for {g.name}")
    if any(v < 0 for v in lam):
        raise ValidationError(f"weight {lam} is not dominant")
    positive, negative, roots = _triangular_data(g)
    negative = sorted(negative, key=g.labels.index)
    cartan = g.cartan

    def wt_add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    top = lam  # highest weight as Cartan eigenvalues

    # action of any basis label on a lowering word, by commuting through
    memo = {}

    def act_word(x, word) -> dict:
        key = (x, word)
        if key in memo:
            return memo[key]
        out: dict = {}
        if not word:
            if x in cartan:
                out = {(): Fraction(lam[cartan.index(x)])}
            elif x in negative:
                out = {(x,): ONE}
        else:
            head, rest = word[0], word[1:]
            for y, cy in g.bracket_labels(x, head).items():
                add_scaled(out, act_word(y, rest), cy)
            for w, c in act_word(x, rest).items():
                k = (head,) + w
                v = out.get(k, ZERO) + c
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        memo[key] = out
        return out

    # heights: express each root in simple-root coordinates, so that a word's
    # level (total height of its letters) is determined by its weight alone
    from .exactlin import mat_inverse
    simple_roots = [roots[e] for e in g.simple_raising]
    s_inv = mat_inverse(simple_roots)
    rank = len(simple_roots)

    def height(f) -> int:
        neg_root = roots[f]
        coords = [sum(Fraction(-neg_root[i]) * s_inv[i][j] for i in range(rank))
                  for j in range(rank)]
        h = sum(coords)
        if h != int(h) or h <= 0 or any(c < 0 for c in coords):
            raise ValidationError(f"{g.name}: {f} is not a negative root vector")
        return int(h)

    ht = {f: height(f) for f in negative}

    # level by level: enumerate every lowering word of that total height,
    # grouped by weight; the maximal-submodule part of each weight space is
    # the kernel of the stacked simple-raising maps into the already-computed
    # quotients (raising strictly decreases the level)
    quotients = {top: _WeightFiber([()], [])}
    rep_basis = [(top, ())]
    words_at_level = {0: {top: [()]}}
    max_ht = max(ht.values())
    last_nonzero = 0
    level = 0
    while level <= last_nonzero + max_ht:
        level += 1
        if level > 500:
            raise ValidationError("highest weight construction did not terminate")
        next_words = {}
        for f in negative:
            for wt, words in words_at_level.get(level - ht[f], {}).items():
                nwt = wt_add(wt, roots[f])
                bucket = next_words.setdefault(nwt, [])
                bucket.extend((f,) + w for w in words)
        if not next_words:
            break
        words_at_level[level] = {wt: sorted(set(ws)) for wt, ws in next_words.items()}
        level_dim = 0
        for wt in sorted(next_words):
            words = words_at_level[level][wt]
            rows_by_target = {}
            for wi, w in enumerate(words):
                for e in g.simple_raising:
                    img = act_word(e, w)
                    twt = wt_add(wt, roots[e])
                    fiber = quotients.get(twt)
                    if fiber is None:
                        if img:
                            raise ValidationError("raising image escaped the "
                                                  "computed weight table")
                        continue
                    for rep_word, c in fiber.reduce_to_basis(img).items():
                        rows_by_target.setdefault((e, rep_word), {})[wi] = c
            m = ExactMatrix(range(len(words)), list(rows_by_target.values()))
            _rank, _rows, kernel = rref(m)
            n_vectors = [{words[i]: c for i, c in kv.items()} for kv in kernel]
            fiber = _WeightFiber(words, n_vectors)
            quotients[wt] = fiber
            level_dim += len(fiber.rep_words)
            rep_basis.extend((wt, w) for w in fiber.rep_words)
        if level_dim:
            last_nonzero = level

    index = {bw: i for i, bw in enumerate(rep_basis)}
    action = {}
    for x in g.labels:
        cols = []
        for wt, w in rep_basis:
            img = act_word(x, w)
            target = wt_add(wt, roots[x]) if x not in cartan else wt
            fiber = quotients.get(target)
            col = {}
            if fiber is not None:
                for rep_word, c in fiber.reduce_to_basis(img).items():
                    col[index[(target, rep_word)]] = c
            elif img:
                raise ValidationError("action image escaped the weight table")
            cols.append(col)
        action[x] = cols

    weights = [wt for wt, _ in rep_basis]
    rep = RepModule("g", len(rep_basis), action, weights,
                    bracket_fn=g.bracket_labels, generator_labels=g.labels,
                    meta={"algebra": g.name, "highest_weight": lam})
    _validate_rep(rep)
    return rep


class _WeightFiber:
    """One weight space: its word basis, the submodule echelon, and the chosen
    quotient representatives (non-pivot words)."""

    def __init__(self, words, n_vectors):
        self.words = list(words)
        self.n_echelon = Echelon(column_order=self.words.index)
        for v in n_vectors:
            self.n_echelon.add(v)
        pivots = set(self.n_echelon.pivots)
        self.rep_words = [w for w in self.words if w not in pivots]

    def reduce_to_basis(self, vec: Mapping) -> dict:
        reduced = self.n_echelon.reduce(vec)
        out = {}
        for w, c in reduced.items():
            if w not in self.rep_words:
                raise ValidationError("reduction left a pivot word")
            out[w] = c
        return out


# ---------------------------------------------------------------------------
# gl_n modules
# ---------------------------------------------------------------------------

def _gl_bracket(n):
    def bracket(x, y):
        (_, a, b), (_, c, d) = x, y
        out = {}
        if b == c:
            k = ("E", a, d)
            out[k] = out.get(k, ZERO) + ONE
        if d == a:
            k = ("E", c, b)
            out[k] = out.get(k, ZERO) - ONE
        return {k: v for k, v in out.items() if v}
    return bracket


def _perm_sign_insert(subset, remove, insert) -> int:
    """Sign of e_insert wedged in place of e_remove within the sorted wedge."""
    pos_old = subset.index(remove)
    others = [v for v in subset if v != remove]
    pos_new = sum(1 for v in others if v < insert)
    return -1 if (pos_old - pos_new) % 2 else 1


def wedge_power_rep(n: int, k: int) -> RepModule:
    """The k-th wedge power of the standard gl_n module; identity acts by k."""
    if not 0 <= k <= n:
        raise ValidationError(f"wedge degree {k} outside 0..{n}")
    basis = list(combinations(range(1, n + 1), k))
    index = {s: i for i, s in enumerate(basis)}
    action = {}
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            cols = []
            for s in basis:
                col = {}
                if i in s:
                    if j == i:
                        col[index[s]] = ONE
                    elif j not in s:
                        target = tuple(sorted([v for v in s if v != i] + [j]))
                        sgn = _perm_sign_insert(s, i, j)
                        col[index[target]] = Fraction(sgn)
                cols.append(col)
            action[("E", j, i)] = cols
    weights = [tuple(ONE if i in s else ZERO for i in range(1, n + 1)) for s in basis]
    labels = [("E", j, i) for j in range(1, n + 1) for i in range(1, n + 1)]
    rep = RepModule("gl", len(basis), action, weights,
                    bracket_fn=_gl_bracket(n), generator_labels=labels,
                    meta={"n": n, "c": Fraction(k), "lam": _fundamental(n, k),
                          "wedge": k, "basis": basis})
    _validate_rep(rep)
    return rep


def _fundamental(n, k) -> tuple:
    return tuple(ONE if i == k else ZERO for i in range(1, n))


def build_gln_rep(n: int, c, lam: Sequence[int]) -> RepModule:
    """The irreducible gl_n module with sl_n highest weight lam and the
    identity matrix acting by the scalar c."""
    c = Fraction(c)
    lam = tuple(int(v) for v in lam)
    if len(lam) != n - 1:
        raise ValidationError(f"gl weight {lam} has wrong length for n={n}")
    if any(v < 0 for v in lam):
        raise ValidationError(f"gl weight {lam} is not dominant")

    wedge_k = None
    if not any(lam):
        if c == 0:
            wedge_k = 0
        elif c == n:
            wedge_k = n
    else:
        for k in range(1, n):
            if lam == tuple(1 if i == k else 0 for i in range(1, n)) and c == k:
                wedge_k = k
    if wedge_k is not None:
        return wedge_power_rep(n, wedge_k)

    sl = sl_generic(n)
    base = build_irrep_g(sl, lam)
    dim = base.dim
    action = {}
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            if i != j:
                action[("E", j, i)] = base.action[f"E{j}_{i}"]
    # diagonal units: c/n times the identity plus the traceless part in the H's
    for i in range(1, n + 1):
        coeffs = []
        for l in range(1, n):
            t = (ONE if i <= l else ZERO) - Fraction(l, n)
            coeffs.append(t)
        cols = []
        for jcol in range(dim):
            col = {jcol: Fraction(c, n)} if c else {}
            for l, t in enumerate(coeffs, start=1):
                if t:
                    add_scaled(col, base.action[f"H{l}"][jcol], t)
            cols.append(col)
        action[("E", i, i)] = cols
    weights = []
    for jcol in range(dim):
        wt = []
        for i in range(1, n + 1):
            col = action[("E", i, i)][jcol]
            wt.append(col.get(jcol, ZERO))
        weights.append(tuple(wt))
    labels = [("E", j, i) for j in range(1, n + 1) for i in range(1, n + 1)]
    rep = RepModule("gl", dim, action, weights,
                    bracket_fn=_gl_bracket(n), generator_labels=labels,
                    meta={"n": n, "c": c, "lam": lam})
    _validate_rep(rep)
    return rep
