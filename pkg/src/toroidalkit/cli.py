"""Command line front end: configuration parsing, suite orchestration, and
deterministic report emission.

A single TOML configuration file describes the algebra, the coefficient
algebra, the module specs, and the level-stack block; subcommands select
which verification suites run.  Reports are JSON documents with a stable key
order (or an aligned table rendering of the same records); two runs with the
same configuration and seed produce byte-identical reports up to the wall
time fields.  Sampling uses splitmix64 streams keyed by the run seed and the
check name, so the sampled inputs are reproducible across platforms.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .coeffalg import CoeffAlgebra, point_at, univariate_quotient
from .maptoroidal import MapToroidal, TriangularData
from .suites import ALL_SUITES, SUITES
from .tensormod import (
    EvalTensorModule, RingTensorModule, TensorModule, WeightWindow,
)
from .toroidal import (
    BUILTIN_ALGEBRAS, ConfigurationError, FullToroidal, ValidationError,
)
from .verma import VermaConfig

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


def _frac(value, where):
    try:
        if isinstance(value, bool):
            raise ValueError
        if isinstance(value, (int, str)):
            return Fraction(value)
    except (ValueError, ZeroDivisionError):
        pass
    raise ConfigError(f"{where}: expected a rational like \"3/4\", got {value!r}")


def _frac_list(values, where):
    if not isinstance(values, list):
        raise ConfigError(f"{where}: expected a list of rationals")
    return tuple(_frac(v, where) for v in values)


def _int_list(values, where):
    if not isinstance(values, list) or not all(isinstance(v, int) for v in values):
        raise ConfigError(f"{where}: expected a list of integers")
    return tuple(values)


def _check_keys(block: dict, allowed, where):
    unknown = sorted(set(block) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown keys {unknown}")


def parse_window_spec(text: str):
    try:
        lo_s, hi_s = text.split("..")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise ConfigError(f"window must look like \"-2..2\", got {text!r}") from None
    if lo > hi:
        raise ConfigError(f"window bounds out of order in {text!r}")
    return lo, hi


class RunContext:
    """All resolved objects a suite needs, built once from the config file."""

    def __init__(self, raw: dict, seed, samples, window):
        self.raw = raw
        _check_keys(raw, {"algebra", "coefficients", "module", "derham",
                          "classify", "verma", "suite"}, "top level")
        algebra = raw.get("algebra")
        if algebra is None:
            raise ConfigError("missing [algebra] block")
        _check_keys(algebra, {"n", "g", "mu1", "mu2", "cocycles",
                              "central_form_factor"}, "[algebra]")
        self.n = algebra.get("n")
        if not isinstance(self.n, int) or self.n < 2:
            raise ConfigError("[algebra].n must be an integer >= 2")
        g_name = algebra.get("g", "sl2")
        if g_name not in BUILTIN_ALGEBRAS:
            raise ConfigError(f"[algebra].g must be one of {sorted(BUILTIN_ALGEBRAS)}")
        self.g = BUILTIN_ALGEBRAS[g_name]()
        mu1 = _frac(algebra.get("mu1", "0"), "[algebra].mu1")
        mu2 = _frac(algebra.get("mu2", "0"), "[algebra].mu2")
        self.loop_central_factor = bool(algebra.get("central_form_factor", True))
        if "cocycles" in algebra:
            self.cocycles = [(
                _frac(pair[0], "[algebra].cocycles"),
                _frac(pair[1], "[algebra].cocycles"),
            ) for pair in algebra["cocycles"]]
        else:
            self.cocycles = [(mu1, mu2)]
        # the cocycle sweep list only drives the algebra suite; everything
        # else uses the declared (mu1, mu2)
        self.tau = FullToroidal(self.n, self.g, mu1=mu1, mu2=mu2,
                                loop_central_factor=self.loop_central_factor)

        self.B = None
        self.psi = None
        self.mt = None
        coeff = raw.get("coefficients")
        if coeff is not None:
            _check_keys(coeff, {"modulus", "psi", "labels", "products"},
                        "[coefficients]")
            if "modulus" in coeff:
                self.B = univariate_quotient(coeff["modulus"])
            elif "labels" in coeff:
                self.B = _table_algebra(coeff)
            else:
                raise ConfigError("[coefficients]: needs modulus or labels/products")
            self.mt = MapToroidal(self.tau, self.B)
            if "psi" in coeff:
                self.psi = point_at(self.B, _frac(coeff["psi"], "[coefficients].psi"))

        self.modules = []
        for i, block in enumerate(raw.get("module", [])):
            self.modules.append(self._module(block, i))

        derham = raw.get("derham", {})
        _check_keys(derham, {"alpha"}, "[derham]")
        self.derham_alpha = _frac_list(derham.get("alpha", ["1/3", "1/5", "1/7"][:self.n]),
                                       "[derham].alpha")
        classify = raw.get("classify", {})
        _check_keys(classify, {"alpha"}, "[classify]")
        default_wit = ["1/3"] + ["0"] * (self.n - 1)
        self.classify_alpha = _frac_list(classify.get("alpha", default_wit),
                                         "[classify].alpha")

        self.verma_config = None
        if "verma" in raw:
            self.verma_config = self._verma(raw["verma"])

        self.seed = seed
        self.samples = samples
        self.window = window

    def _module(self, block: dict, index: int):
        where = f"[[module]] #{index + 1}"
        _check_keys(block, {"name", "kind", "c", "lam1", "lam2", "alpha",
                            "a", "b", "psi"}, where)
        kind = block.get("kind", "tau")
        name = block.get("name", f"{kind}{index + 1}")
        c = _frac(block.get("c", "0"), f"{where}.c")
        lam1 = _int_list(block.get("lam1", [0] * len(self.g.cartan)), f"{where}.lam1")
        alpha = _frac_list(block["alpha"], f"{where}.alpha")
        if kind == "tau":
            lam2 = _int_list(block.get("lam2", [0] * (self.n - 1)), f"{where}.lam2")
            return (name, TensorModule(self.tau, c, lam1, lam2, alpha))
        if kind == "eval":
            lam2 = _int_list(block.get("lam2", [0] * (self.n - 1)), f"{where}.lam2")
            if self.mt is None:
                raise ConfigError(f"{where}: eval module needs a [coefficients] block")
            psi = self.psi
            if "psi" in block:
                psi = point_at(self.B, _frac(block["psi"], f"{where}.psi"))
            if psi is None:
                raise ConfigError(f"{where}: eval module needs an evaluation point")
            return (name, EvalTensorModule(self.mt, c, lam1, lam2, alpha, psi))
        if kind == "ring":
            lam2 = _int_list(block.get("lam2", [0] * (self.n - 2)), f"{where}.lam2")
            a = _frac(block.get("a", "0"), f"{where}.a")
            b = _frac(block.get("b", "0"), f"{where}.b")
            psi = self.psi
            if "psi" in block:
                psi = point_at(self.B, _frac(block["psi"], f"{where}.psi"))
            return (name, RingTensorModule(self.tau, a, b, c, lam1, lam2, alpha,
                                           psi=psi, mt=self.mt))
        raise ConfigError(f"{where}: kind must be tau, eval, or ring")

    def _verma(self, block: dict) -> VermaConfig:
        where = "[verma]"
        _check_keys(block, {"a", "b", "c", "lam1", "lam2", "alpha", "beta",
                            "m_basis", "depth", "window_lo", "window_hi",
                            "raising_lo", "raising_hi", "lowering_lo",
                            "lowering_hi", "psi"}, where)
        if self.mt is None:
            raise ConfigError(f"{where}: needs a [coefficients] block")
        psi = self.psi
        if "psi" in block:
            psi = point_at(self.B, _frac(block["psi"], f"{where}.psi"))
        if psi is None:
            raise ConfigError(f"{where}: needs an evaluation point")
        a = _frac(block.get("a", "0"), f"{where}.a")
        b = _frac(block.get("b", "0"), f"{where}.b")
        c = _frac(block.get("c", "0"), f"{where}.c")
        lam1 = _int_list(block.get("lam1", [0] * len(self.g.cartan)), f"{where}.lam1")
        lam2 = _int_list(block.get("lam2", [0] * (self.n - 2)), f"{where}.lam2")
        alpha = _frac_list(block.get("alpha", ["0"] * (self.n - 1)), f"{where}.alpha")
        ring = RingTensorModule(self.tau, a, b, c, lam1, lam2, alpha,
                                psi=psi, mt=self.mt)
        beta = _int_list(block["beta"], f"{where}.beta")
        m_basis = [tuple(row) for row in block["m_basis"]]
        tri = TriangularData(beta, tuple(m_basis))
        depth = block.get("depth", 2)
        dims = self.n - 1
        window = WeightWindow(_int_list(block.get("window_lo", [-2] * dims),
                                        f"{where}.window_lo"),
                              _int_list(block.get("window_hi", [2] * dims),
                                        f"{where}.window_hi"))
        lowering = WeightWindow(_int_list(block.get("lowering_lo", [0] * dims),
                                          f"{where}.lowering_lo"),
                                _int_list(block.get("lowering_hi", [0] * dims),
                                          f"{where}.lowering_hi"))
        raising = WeightWindow(_int_list(block.get("raising_lo", [-1] * dims),
                                         f"{where}.raising_lo"),
                               _int_list(block.get("raising_hi", [1] * dims),
                                         f"{where}.raising_hi"))
        return VermaConfig(ring, tri, depth, window,
                           lowering_window=lowering, raising_window=raising)


def _table_algebra(coeff: dict) -> CoeffAlgebra:
    labels = coeff["labels"]
    table = {}
    for entry in coeff.get("products", []):
        _check_keys(entry, {"left", "right", "value"}, "[coefficients].products")
        value = {l: _frac(c, "[coefficients].products.value")
                 for l, c in entry["value"].items()}
        table[(entry["left"], entry["right"])] = value
        table[(entry["right"], entry["left"])] = value
    return CoeffAlgebra(labels, table)


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

def _json_ready(value):
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else str(value.numerator)
    if isinstance(value, dict):
        return {str(k): _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    return value


def run_suites(ctx: RunContext, suite_names) -> list:
    max_workers = _thread_cap()

    def run_one(name):
        start = time.perf_counter()
        records = SUITES[name](ctx)
        total_ms = (time.perf_counter() - start) * 1000.0
        share = total_ms / max(len(records), 1)
        for rec in records:
            rec["suite"] = name
            rec["wall_ms"] = round(share, 3)
        return records

    results = []
    if max_workers > 1 and len(suite_names) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            for records in pool.map(run_one, suite_names):
                results.extend(records)
    else:
        for name in suite_names:
            results.extend(run_one(name))
    results.sort(key=lambda r: r["name"])
    return results


def _thread_cap() -> int:
    raw = os.environ.get("TOROIDALKIT_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError("TOROIDALKIT_THREADS must be an integer") from None
    if cap == 0:
        return os.cpu_count() or 1
    return max(cap, 1)


def build_report(ctx: RunContext, records, config_text: str) -> dict:
    digest = hashlib.sha256(config_text.encode()).hexdigest()
    checks = []
    for rec in records:
        inputs = f"{digest}:{rec['name']}:{ctx.seed}:{ctx.samples}:{ctx.window}"
        checks.append({
            "name": rec["name"],
            "suite": rec["suite"],
            "anchor": rec["anchor"],
            "inputs_digest": hashlib.sha256(inputs.encode()).hexdigest()[:16],
            "verdict": rec["verdict"],
            "payload": _json_ready(rec["payload"]),
            "counterexample": _json_ready(rec["counterexample"]),
            "wall_ms": rec["wall_ms"],
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "toroidalkit", "version": __version__},
        "config_digest": digest,
        "seed": ctx.seed,
        "samples": ctx.samples,
        "window": f"{ctx.window[0]}..{ctx.window[1]}",
        "checks": checks,
    }


def render_table(report: dict) -> str:
    rows = [("CHECK", "VERDICT", "MS")]
    for check in report["checks"]:
        rows.append((check["name"], check["verdict"], str(check["wall_ms"])))
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    passed = sum(1 for c in report["checks"] if c["verdict"] == "PASS")
    lines.append("")
    lines.append(f"{passed}/{len(report['checks'])} checks passed "
                 f"(seed {report['seed']}, config {report['config_digest'][:12]})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def run(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="toroidalkit",
        description="Exact verification suites for toroidal Lie algebra structures")
    parser.add_argument("suite", choices=list(ALL_SUITES) + ["all"])
    parser.add_argument("--config", required=True, help="TOML configuration file")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--window", default=None, help='degree box like "-2..2"')
    parser.add_argument("--format", choices=["json", "table"], default="json")
    parser.add_argument("--out", default=None)
    args = parser.parse_args(argv)

    try:
        with open(args.config, "rb") as fh:
            config_text = fh.read().decode()
        try:
            raw = tomllib.loads(config_text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{args.config}: {exc}") from None

        suite_block = raw.get("suite", {})
        _check_keys(suite_block, {"seed", "samples", "window"}, "[suite]")
        seed = args.seed if args.seed is not None else suite_block.get("seed", 42)
        samples = (args.samples if args.samples is not None
                   else suite_block.get("samples", 200))
        window_spec = (args.window if args.window is not None
                       else suite_block.get("window", "-2..2"))
        window = parse_window_spec(window_spec)

        ctx = RunContext(raw, seed=seed, samples=samples, window=window)
        names = list(ALL_SUITES) if args.suite == "all" else [args.suite]
        records = run_suites(ctx, names)
        report = build_report(ctx, records, config_text)
    except (ConfigError, ConfigurationError, ValidationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1

    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = render_table(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(c["verdict"] == "PASS" for c in report["checks"]) else 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
