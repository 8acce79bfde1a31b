"""Verification suites behind the command line front end.

Each suite function receives the parsed run configuration and returns a list
of check records: dicts with a name, a short anchor describing the identity
being checked, a PASS/FAIL verdict, a payload, and a counterexample when the
verdict is FAIL.  Records are deterministic given (config, seed): every
sampled object comes from a splitmix64 stream whose seed mixes the run seed
with the check name.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction

from .coeffalg import ideal_of_point
from .maptoroidal import MapElement
from .rng import SplitMix64
from .tensormod import (
    DeRhamComplex, FiberFamily, WeightWindow, cyclicity_generators,
    evaluation_factorization_check, module_axiom_defect, window_cyclicity_report,
)
from .toroidal import FullToroidal
from .verma import (
    build_verma, evaluation_property_check, hw_vector_check, quotient_dims,
)

ZERO = Fraction(0)


def derive_seed(seed: int, label: str) -> int:
    digest = hashlib.sha256(label.encode()).digest()
    return (seed ^ int.from_bytes(digest[:8], "big")) & ((1 << 64) - 1)


def _record(name, anchor, ok, payload=None, counterexample=None):
    return {
        "name": name,
        "anchor": anchor,
        "verdict": "PASS" if ok else "FAIL",
        "payload": payload or {},
        "counterexample": counterexample,
    }


# ---------------------------------------------------------------------------
# algebra suite
# ---------------------------------------------------------------------------

def algebra_suite(run) -> list:
    records = []
    lo, hi = run.window
    for mu1, mu2 in run.cocycles:
        tau = FullToroidal(run.n, run.g, mu1=mu1, mu2=mu2,
                           loop_central_factor=run.loop_central_factor)
        tag = f"mu=({mu1},{mu2})"
        rng = SplitMix64(derive_seed(run.seed, f"algebra:{tag}"))
        jac_bad = anti_bad = grade_bad = None
        for _ in range(run.samples):
            x = tau.random_homogeneous(rng, lo, hi)
            y = tau.random_homogeneous(rng, lo, hi)
            z = tau.random_homogeneous(rng, lo, hi)
            if tau.jacobi_defect(x, y, z) and jac_bad is None:
                jac_bad = (repr(x), repr(y), repr(z))
            if (tau.bracket(x, y) + tau.bracket(y, x)) and anti_bad is None:
                anti_bad = (repr(x), repr(y))
            b = tau.bracket(x, y)
            if b and b.degree() != tuple(a + c for a, c in zip(x.degree(), y.degree())):
                grade_bad = grade_bad or (repr(x), repr(y))
        records.append(_record(f"jacobi-identity[{tag}]", "triple bracket sum vanishes",
                               jac_bad is None, {"samples": run.samples},
                               jac_bad))
        records.append(_record(f"antisymmetry[{tag}]", "bracket(x,y) + bracket(y,x) = 0",
                               anti_bad is None, {"samples": run.samples}, anti_bad))
        records.append(_record(f"bracket-grading[{tag}]", "degree adds under bracket",
                               grade_bad is None, {"samples": run.samples}, grade_bad))

    tau = run.tau
    bad = None
    count = 0
    for m in WeightWindow((lo,) * run.n, (hi,) * run.n):
        count += 1
        if tau.make_kahler(m, m):
            bad = bad or {"degree": m}
    records.append(_record("one-form-relation", "weighted one-form of its own degree vanishes",
                           bad is None, {"degrees_checked": count}, bad))

    zero_deg = (0,) * run.n
    rng = SplitMix64(derive_seed(run.seed, "algebra:center"))
    central_bad = None
    for _ in range(min(run.samples, 300)):
        i = rng.randint(1, run.n)
        m = rng.degree(run.n, lo, hi)
        z = tau.kahler(i, m)
        if not z:
            continue
        other = tau.random_homogeneous(rng, lo, hi)
        if any(s.kind == "der" for s in other.terms):
            continue
        if tau.bracket(z, other):
            central_bad = central_bad or (repr(z), repr(other))
    records.append(_record("one-forms-central", "one-forms commute with loops and one-forms",
                           central_bad is None, {}, central_bad))

    # deterministic witness triple, evaluated under the configured bracket
    g = run.g
    h, e, f = g.cartan[0], g.simple_raising[0], g.simple_lowering[0]
    e1 = tuple(1 if i == 0 else 0 for i in range(run.n))
    witness = (tau.loop(h, e1), tau.loop(e, tuple(-v for v in e1)),
               tau.loop(f, zero_deg))
    wit_defect = tau.jacobi_defect(*witness)
    records.append(_record("jacobi-witness",
                           "triple bracket sum vanishes on the witness triple",
                           not wit_defect, {},
                           repr(wit_defect) if wit_defect else None))

    # negative control: dropping the form factor breaks the Jacobi identity
    tau_off = FullToroidal(run.n, run.g, mu1=run.tau.mu1, mu2=run.tau.mu2,
                           loop_central_factor=False)
    witness_off = (tau_off.loop(h, e1), tau_off.loop(e, tuple(-v for v in e1)),
                   tau_off.loop(f, zero_deg))
    defect = tau_off.jacobi_defect(*witness_off)
    records.append(_record("negative-control", "omitting the form factor breaks the triple sum",
                           bool(defect), {"defect": repr(defect)},
                           None if defect else {"defect": "0"}))
    return records


# ---------------------------------------------------------------------------
# module suites
# ---------------------------------------------------------------------------

def _sample_ring_element(tau, rng, lo, hi):
    while True:
        x = tau.random_homogeneous(rng, lo, hi)
        if all(s.degree[0] == 0 for s in x.terms):
            return x


def module_suite(run) -> list:
    records = []
    lo, hi = run.window
    for name, module in run.modules:
        rng = SplitMix64(derive_seed(run.seed, f"module:{name}"))
        kind = module.__class__.__name__
        bad = None
        dims = run.n if kind != "RingTensorModule" else run.n - 1
        for _ in range(run.samples):
            if kind == "RingTensorModule":
                x = _sample_ring_element(run.tau, rng, max(lo, -2), min(hi, 2))
                y = _sample_ring_element(run.tau, rng, max(lo, -2), min(hi, 2))
            elif kind == "EvalTensorModule":
                x = run.mt.random_homogeneous(rng, lo, hi)
                y = run.mt.random_homogeneous(rng, lo, hi)
            else:
                x = run.tau.random_homogeneous(rng, lo, hi)
                y = run.tau.random_homogeneous(rng, lo, hi)
            v = module.random_fiber_vector(rng, rng.degree(dims, lo, hi))
            if module_axiom_defect(module, x, y, v):
                bad = bad or (repr(x), repr(y), repr(v))
        records.append(_record(f"module-axiom[{name}]",
                               "act([x,y]) = act(x)act(y) - act(y)act(x)",
                               bad is None, {"samples": run.samples, "kind": kind}, bad))

        window = WeightWindow((lo,) * dims, (hi,) * dims)
        table = module.weight_table(window)
        expected = module.fiber_dim
        constant = set(table.values()) == {expected}
        records.append(_record(f"weight-table[{name}]",
                               "weight spaces have constant product dimension",
                               constant,
                               {"dimension": expected, "weights": len(table)},
                               None if constant else {"values": sorted(set(table.values()))}))
    return records


def weights_suite(run) -> list:
    records = []
    lo, hi = run.window
    for name, module in run.modules:
        dims = run.n if module.__class__.__name__ != "RingTensorModule" else run.n - 1
        window = WeightWindow((lo,) * dims, (hi,) * dims)
        table = module.weight_table(window)
        values = sorted(set(table.values()))
        records.append(_record(f"weights[{name}]", "weight multiplicity table",
                               values == [module.fiber_dim],
                               {"fiber_dim": module.fiber_dim,
                                "window": repr(window),
                                "values": values,
                                "entries": len(table)}))
    return records


# ---------------------------------------------------------------------------
# de Rham suite
# ---------------------------------------------------------------------------

def derham_suite(run) -> list:
    records = []
    lo, hi = run.window
    n = run.n
    alpha = run.derham_alpha
    tau = run.tau
    dr = DeRhamComplex(tau, alpha)
    window = WeightWindow((lo,) * n, (hi,) * n)

    compose_bad = None
    for k in range(n - 1):
        mk = dr.module(k)
        for r in window:
            for i2 in range(mk.V2.dim):
                if dr.d(k + 1, dr.d(k, mk.vector(0, i2, r))):
                    compose_bad = compose_bad or {"k": k, "degree": r}
    records.append(_record("derham-compose", "consecutive differentials compose to zero",
                           compose_bad is None, {"window": repr(window)}, compose_bad))

    gens = [g for g in cyclicity_generators(tau)
            if all(s.kind == "der" for s in g.terms)]
    hom_bad = None
    checked = 0
    for k in range(n):
        mk, mk1 = dr.module(k), dr.module(k + 1)
        for r in window:
            for i2 in range(mk.V2.dim):
                v = mk.vector(0, i2, r)
                dv = dr.d(k, v)
                for gx in gens:
                    if tuple(a + b for a, b in zip(gx.degree(), r)) not in window:
                        continue
                    checked += 1
                    if dr.d(k, mk.act(gx, v)) != mk1.act(gx, dv):
                        hom_bad = hom_bad or {"k": k, "degree": r, "generator": repr(gx)}
    records.append(_record("derham-homomorphism",
                           "differential commutes with the derivation action",
                           hom_bad is None, {"checked": checked}, hom_bad))

    expected_ranks = tuple(_binom(n - 1, k) for k in range(n))
    rank_bad = None
    exact_bad = None
    for r in window:
        ranks = tuple(dr.fiber_matrix_rank(k, r) for k in range(n))
        if ranks != expected_ranks:
            rank_bad = rank_bad or {"degree": r, "ranks": ranks}
        if dr.fiber_kernel_dim(0, r) != 0:
            exact_bad = exact_bad or {"degree": r, "k": 0}
        for k in range(1, n):
            if dr.fiber_kernel_dim(k, r) != dr.fiber_matrix_rank(k - 1, r):
                exact_bad = exact_bad or {"degree": r, "k": k}
    records.append(_record("derham-fiber-ranks", "image ranks match the binomial pattern",
                           rank_bad is None, {"expected": expected_ranks}, rank_bad))
    records.append(_record("derham-exactness", "kernel equals the previous image on fibers",
                           exact_bad is None, {}, exact_bad))

    # classification witness: the one-form module with the matching scalar is
    # reducible (the function-image fibers are invariant), while the image
    # module itself regenerates from every sample
    wit_alpha = run.classify_alpha
    drw = DeRhamComplex(tau, wit_alpha)
    img0 = drw.image_basis(0, window)
    probes = [vs[0] for _r, vs in sorted(img0.items()) if vs][:2]
    family_full = FiberFamily.full(drw.module(1), window)
    rep_full = window_cyclicity_report(
        family_full, window, samples=min(run.samples, 2),
        seed=derive_seed(run.seed, "derham:witness-full"), probes=probes)
    family_img = FiberFamily(drw.module(1), img0)
    rep_img = window_cyclicity_report(
        family_img, window, samples=min(run.samples, 3),
        seed=derive_seed(run.seed, "derham:witness-image"))
    witness_ok = rep_full["verdict"] == "FAIL" and rep_img["verdict"] == "PASS"
    probe_runs = [r for r in rep_full["runs"] if r["start"] == "probe"]
    records.append(_record("classification-witness",
                           "image fibers form a proper invariant family; "
                           "the image module is cyclic in the window",
                           witness_ok,
                           {"full_module": rep_full["verdict"],
                            "image_module": rep_img["verdict"],
                            "probe_runs": len(probe_runs)},
                           None if witness_ok else {"full": rep_full["verdict"],
                                                    "image": rep_img["verdict"]}))
    return records


def _binom(n, k):
    from math import comb
    return comb(n, k)


# ---------------------------------------------------------------------------
# evaluation suite
# ---------------------------------------------------------------------------

def eval_suite(run) -> list:
    records = []
    lo, hi = run.window
    window = WeightWindow((max(lo, -1),) * run.n, (min(hi, 1),) * run.n)
    eval_modules = [(name, m) for name, m in run.modules
                    if m.__class__.__name__ == "EvalTensorModule"]
    for name, module in eval_modules:
        report = evaluation_factorization_check(
            module, window, samples=run.samples,
            seed=derive_seed(run.seed, f"eval:{name}"))
        records.append(_record(f"evaluation-scaling[{name}]",
                               "X(b) acts as psi(b) X",
                               report["verdict"] == "PASS",
                               {k: v for k, v in report.items() if k != "failures"},
                               report["failures"] or None))
        ideal = ideal_of_point(module.psi)
        records.append(_record(f"evaluation-ideal[{name}]",
                               "the kernel ideal of psi annihilates the module",
                               report["verdict"] == "PASS",
                               {"ideal_dim": len(ideal),
                                "ideal": [repr(m) for m in ideal]}))
    if not eval_modules:
        records.append(_record("evaluation-config", "an eval module block is present",
                               False, {}, {"reason": "no eval module configured"}))
    return records


# ---------------------------------------------------------------------------
# verma suite
# ---------------------------------------------------------------------------

def verma_suite(run) -> list:
    records = []
    cfg = run.verma_config
    if cfg is None:
        return [_record("verma-config", "a verma block is present", False, {},
                        {"reason": "no verma block configured"})]
    stack = build_verma(cfg)
    qd = quotient_dims(stack)
    by_level: dict = {}
    for (level, _c), d in qd.items():
        by_level.setdefault(level, []).append(d)
    dims_payload = {str(level): {"min": min(v), "max": max(v), "fibers": len(v)}
                    for level, v in sorted(by_level.items())}

    grading = stack.check_grading()
    records.append(_record("verma-grading",
                           "recorded generators move levels by their splitting step",
                           grading["verdict"] == "PASS",
                           {"checked": grading["checked"],
                            "surfaces": cfg.describe()},
                           grading["failures"] or None))

    invariance = stack.check_submodule_invariance()
    records.append(_record("verma-submodule-invariance",
                           "the maximal submodule is stable under recorded generators",
                           invariance["verdict"] == "PASS",
                           {"checked": invariance["checked"]},
                           invariance["failures"] or None))

    hw = hw_vector_check(stack, ghw_k=1)
    records.append(_record("verma-highest-weight",
                           "the raising surface kills the inducing space; "
                           "box-degree generators kill it too",
                           hw["verdict"] == "PASS", hw))

    ev = evaluation_property_check(stack, stack.psi,
                                   samples=min(run.samples, 80),
                                   seed=derive_seed(run.seed, "verma:eval"))
    records.append(_record("verma-evaluation-property",
                           "Y(b - psi(b)) kills the irreducible quotient at every level",
                           ev["verdict"] == "PASS",
                           {k: v for k, v in ev.items() if k != "failures"},
                           ev["failures"] or None))

    records.append(_record("verma-quotient-dims",
                           "windowed quotient fiber dimensions",
                           all(d >= 0 for d in qd.values()),
                           {"levels": dims_payload}))
    return records


SUITES = {
    "verify-algebra": algebra_suite,
    "verify-module": module_suite,
    "weights": weights_suite,
    "derham": derham_suite,
    "eval-check": eval_suite,
    "verma": verma_suite,
}

ALL_SUITES = ("verify-algebra", "verify-module", "weights", "derham",
              "eval-check", "verma")
