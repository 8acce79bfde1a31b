"""Acceptance criteria, one test per criterion.

Every check is exact (zero tolerance); each test prints a single summary line
with its elapsed time against the stated budget.
"""

import json
import time
from fractions import Fraction
from pathlib import Path

import pytest

from toroidalkit.cli import run as cli_run
from toroidalkit.coeffalg import ideal_of_point, point_at, univariate_quotient
from toroidalkit.maptoroidal import MapToroidal
from toroidalkit.rng import SplitMix64
from toroidalkit.tensormod import (
    DeRhamComplex, EvalTensorModule, FiberFamily, RingTensorModule, TensorModule,
    WeightWindow, cyclicity_generators, evaluation_factorization_check,
    module_axiom_defect, window_cyclicity_report,
)
from toroidalkit.toroidal import FullToroidal, sl2

F = Fraction
CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _report(num, label, ok, elapsed, budget):
    verdict = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:2d} [{label}]: {verdict} ({elapsed:.2f}s / budget {budget}s)")
    assert ok
    assert elapsed < budget, f"criterion {num} exceeded its {budget}s budget"


def test_criterion_01_lie_axioms():
    t0 = time.time()
    g = sl2()
    ok = True
    for mu in [(0, 0), (1, 0), (0, 1), (2, -3)]:
        tau = FullToroidal(3, g, mu1=mu[0], mu2=mu[1])
        rng = SplitMix64(42)
        for _ in range(1000):
            x = tau.random_homogeneous(rng, -3, 3)
            y = tau.random_homogeneous(rng, -3, 3)
            z = tau.random_homogeneous(rng, -3, 3)
            if tau.jacobi_defect(x, y, z):
                ok = False
            if tau.bracket(x, y) + tau.bracket(y, x):
                ok = False
    _report(1, "Lie axioms, 4 cocycles x 1000 triples", ok, time.time() - t0, 30)


def test_criterion_02_negative_control():
    t0 = time.time()
    tau_off = FullToroidal(3, sl2(), mu1=1, mu2=0, loop_central_factor=False)
    x = tau_off.loop("h", (1, 0, 0))
    y = tau_off.loop("e", (-1, 0, 0))
    z = tau_off.loop("f", (0, 0, 0))
    defect = tau_off.jacobi_defect(x, y, z)
    expected = -1 * tau_off.kahler(1, (0, 0, 0))
    ok = bool(defect) and defect == expected
    _report(2, "negative control witness", ok, time.time() - t0, 1)


def test_criterion_03_one_form_relation():
    t0 = time.time()
    tau = FullToroidal(3, sl2())
    ok = True
    for m in WeightWindow((-3, -3, -3), (3, 3, 3)):
        if tau.make_kahler(m, m):
            ok = False
    _report(3, "one-form relation exhaustive", ok, time.time() - t0, 5)


def test_criterion_04_module_axiom():
    t0 = time.time()
    tau = FullToroidal(3, sl2(), mu1=1, mu2=0)
    B = univariate_quotient("s^2 - 3*s + 2")
    mt = MapToroidal(tau, B)
    psi = point_at(B, 2)
    tensor = TensorModule(tau, F(1, 2), (1,), (1, 0), (F(1, 3), 0, 0))
    evaluation = EvalTensorModule(mt, F(1, 2), (1,), (1, 0), (F(1, 3), 0, 0), psi)
    ring = RingTensorModule(tau, 1, F(-1, 2), F(1, 2), (1,), (1,), (F(1, 3), 0))
    ok = True

    rng = SplitMix64(42)
    for _ in range(500):
        x = tau.random_homogeneous(rng, -2, 2)
        y = tau.random_homogeneous(rng, -2, 2)
        v = tensor.random_fiber_vector(rng, rng.degree(3, -2, 2))
        if module_axiom_defect(tensor, x, y, v):
            ok = False
    rng = SplitMix64(43)
    for _ in range(500):
        x = mt.random_homogeneous(rng, -2, 2)
        y = mt.random_homogeneous(rng, -2, 2)
        v = evaluation.random_fiber_vector(rng, rng.degree(3, -2, 2))
        if module_axiom_defect(evaluation, x, y, v):
            ok = False
    rng = SplitMix64(44)

    def ring_elem():
        while True:
            el = tau.random_homogeneous(rng, -2, 2)
            if all(s.degree[0] == 0 for s in el.terms):
                return el

    for _ in range(500):
        v = ring.random_fiber_vector(rng, rng.degree(2, -2, 2))
        if module_axiom_defect(ring, ring_elem(), ring_elem(), v):
            ok = False
    _report(4, "module axiom, 3 families x 500 triples", ok, time.time() - t0, 60)


def test_criterion_05_cuspidality():
    t0 = time.time()
    tau = FullToroidal(3, sl2(), mu1=1, mu2=0)
    module = TensorModule(tau, F(1, 2), (1,), (1, 0), (F(1, 3), 0, 0))
    table = module.weight_table(WeightWindow((-3, -3, -3), (3, 3, 3)))
    ok = len(table) == 7 ** 3 and set(table.values()) == {6}
    _report(5, "constant weight table = 6", ok, time.time() - t0, 10)


def test_criterion_06_derham():
    t0 = time.time()
    tau = FullToroidal(3, sl2())
    dr = DeRhamComplex(tau, (F(1, 3), F(1, 5), F(1, 7)))
    window = WeightWindow((-2, -2, -2), (2, 2, 2))
    ok = True
    for k in (0, 1):
        mk = dr.module(k)
        for r in window:
            for i2 in range(mk.V2.dim):
                if dr.d(k + 1, dr.d(k, mk.vector(0, i2, r))):
                    ok = False
    gens = [g for g in cyclicity_generators(tau)
            if all(s.kind == "der" for s in g.terms)]
    for k in (0, 1, 2):
        mk, mk1 = dr.module(k), dr.module(k + 1)
        for r in window:
            for i2 in range(mk.V2.dim):
                v = mk.vector(0, i2, r)
                dv = dr.d(k, v)
                for gx in gens:
                    if tuple(a + b for a, b in zip(gx.degree(), r)) not in window:
                        continue
                    if dr.d(k, mk.act(gx, v)) != mk1.act(gx, dv):
                        ok = False
    for r in window:
        if tuple(dr.fiber_matrix_rank(k, r) for k in (0, 1, 2)) != (1, 2, 1):
            ok = False
        if dr.fiber_kernel_dim(0, r) != 0:
            ok = False
        if dr.fiber_kernel_dim(1, r) != dr.fiber_matrix_rank(0, r):
            ok = False
        if dr.fiber_kernel_dim(2, r) != dr.fiber_matrix_rank(1, r):
            ok = False
    _report(6, "de Rham compose/homomorphism/exactness", ok, time.time() - t0, 60)


def test_criterion_07_classification_witness():
    t0 = time.time()
    tau = FullToroidal(3, sl2())
    window = WeightWindow((-2, -2, -2), (2, 2, 2))
    dr = DeRhamComplex(tau, (F(1, 3), 0, 0))
    img0 = dr.image_basis(0, window)
    probes = [vs[0] for _r, vs in sorted(img0.items()) if vs][:2]
    full = window_cyclicity_report(FiberFamily.full(dr.module(1), window), window,
                                   samples=2, seed=42, probes=probes)
    image = window_cyclicity_report(FiberFamily(dr.module(1), img0), window,
                                    samples=3, seed=42)
    probe_runs = [r for r in full["runs"] if r["start"] == "probe"]
    ok = (full["verdict"] == "FAIL" and image["verdict"] == "PASS"
          and probe_runs and all(not r["regenerated"] for r in probe_runs))
    _report(7, "exceptional family witness", ok, time.time() - t0, 120)


def test_criterion_08_evaluation_factorization():
    t0 = time.time()
    tau = FullToroidal(3, sl2(), mu1=1, mu2=0)
    B = univariate_quotient("s^2 - 3*s + 2")
    mt = MapToroidal(tau, B)
    psi = point_at(B, 2)
    module = EvalTensorModule(mt, F(1, 2), (1,), (1, 0), (F(1, 3), 0, 0), psi)
    window = WeightWindow((-1, -1, -1), (1, 1, 1))
    report = evaluation_factorization_check(module, window, samples=500, seed=42)
    ok = (report["verdict"] == "PASS" and report["scaling_samples"] == 500
          and report["ideal_dim"] == 1)
    _report(8, "evaluation factorization at psi(s)=2", ok, time.time() - t0, 60)


def test_criterion_09_nilpotent_coefficients():
    t0 = time.time()
    tau = FullToroidal(3, sl2(), mu1=1, mu2=0)
    B = univariate_quotient("s^2")
    mt = MapToroidal(tau, B)
    psi = point_at(B, 0)
    s = B.gen()
    # the maximal ideal (s) squares to zero, and the whole ideal acts by zero
    from toroidalkit.coeffalg import b_mul
    ideal = ideal_of_point(psi)
    ok = not b_mul(s, s)
    ok = ok and len(ideal) == 1 and (ideal[0] == s or ideal[0] == -1 * s)
    module = EvalTensorModule(mt, F(1, 2), (1,), (1, 0), (F(1, 3), 0, 0), psi)
    window = WeightWindow((-1, -1, -1), (1, 1, 1))
    report = evaluation_factorization_check(module, window, samples=200, seed=42)
    ok = ok and report["verdict"] == "PASS"
    _report(9, "nilpotent coefficients kill the maximal ideal", ok,
            time.time() - t0, 30)


def test_criterion_10_verma_suite(tmp_path, capsys):
    t0 = time.time()
    config = CONFIGS / "full.toml"
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    code1 = cli_run(["verma", "--config", str(config), "--out", str(out1)])
    code2 = cli_run(["verma", "--config", str(config), "--out", str(out2)])
    ok = code1 == 0 and code2 == 0
    a, b = json.loads(out1.read_text()), json.loads(out2.read_text())
    names = {c["name"]: c["verdict"] for c in a["checks"]}
    for required in ("verma-grading", "verma-submodule-invariance",
                     "verma-highest-weight", "verma-evaluation-property",
                     "verma-quotient-dims"):
        ok = ok and names.get(required) == "PASS"
    hw = next(c for c in a["checks"] if c["name"] == "verma-highest-weight")
    ok = ok and hw["payload"]["ghw_k"] == 1 and hw["payload"]["ghw_killed"]
    for rep in (a, b):
        for c in rep["checks"]:
            c.pop("wall_ms")
    ok = ok and json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    with capsys.disabled():
        _report(10, "depth-2 level stack suite + byte-identical reports", ok,
                time.time() - t0, 300)
