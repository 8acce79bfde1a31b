import json

import pytest

from toroidalkit.cli import parse_window_spec, run

MINI_CONFIG = """
[algebra]
n = 3
g = "sl2"
mu1 = "1"
mu2 = "0"

[coefficients]
modulus = "s^2 - 3*s + 2"
psi = "2"

[[module]]
name = "tiny"
kind = "tau"
c = "1/2"
lam1 = [1]
lam2 = [0, 0]
alpha = ["1/3", "0", "0"]

[[module]]
name = "tiny-eval"
kind = "eval"
c = "1/2"
lam1 = [0]
lam2 = [0, 0]
alpha = ["1/3", "0", "0"]

[suite]
seed = 7
samples = 40
window = "-1..1"
"""

VERMA_BLOCK = """
[verma]
a = "1"
b = "0"
lam1 = [0]
lam2 = [0]
alpha = ["0", "0"]
beta = [1, 0, 0]
m_basis = [[0, 1, 0], [0, 0, 1]]
depth = 1
window_lo = [-1, -1]
window_hi = [1, 1]
raising_lo = [-1, -1]
raising_hi = [1, 1]
"""


@pytest.fixture()
def mini_config(tmp_path):
    path = tmp_path / "mini.toml"
    path.write_text(MINI_CONFIG)
    return path


def test_window_spec_parse():
    assert parse_window_spec("-2..2") == (-2, 2)
    assert parse_window_spec("0..3") == (0, 3)
    from toroidalkit.cli import ConfigError
    with pytest.raises(ConfigError):
        parse_window_spec("2..-2")
    with pytest.raises(ConfigError):
        parse_window_spec("nope")


def test_verify_algebra_exit_zero(mini_config, capsys):
    code = run(["verify-algebra", "--config", str(mini_config),
                "--samples", "60", "--seed", "42"])
    out = capsys.readouterr().out
    assert code == 0
    report = json.loads(out)
    assert report["schema_version"] == 1
    assert all(c["verdict"] == "PASS" for c in report["checks"])
    names = [c["name"] for c in report["checks"]]
    assert names == sorted(names)


def test_reports_byte_identical_excluding_wall(mini_config, tmp_path):
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert run(["verify-module", "--config", str(mini_config),
                "--out", str(out1)]) == 0
    assert run(["verify-module", "--config", str(mini_config),
                "--out", str(out2)]) == 0
    a, b = json.loads(out1.read_text()), json.loads(out2.read_text())
    for rep in (a, b):
        for c in rep["checks"]:
            c.pop("wall_ms")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_seed_changes_inputs_digest(mini_config, capsys):
    run(["verify-module", "--config", str(mini_config), "--seed", "1"])
    rep1 = json.loads(capsys.readouterr().out)
    run(["verify-module", "--config", str(mini_config), "--seed", "2"])
    rep2 = json.loads(capsys.readouterr().out)
    d1 = [c["inputs_digest"] for c in rep1["checks"]]
    d2 = [c["inputs_digest"] for c in rep2["checks"]]
    assert d1 != d2


def test_malformed_config_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("[algebra\nn = 3\n")
    assert run(["verify-algebra", "--config", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "configuration error" in err


def test_unknown_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "unknown.toml"
    cfg.write_text(MINI_CONFIG.replace("[suite]", "[algebra2]\nx = 1\n\n[suite]"))
    assert run(["verify-algebra", "--config", str(cfg)]) == 1


def test_missing_config_exit_one(capsys):
    assert run(["verify-algebra", "--config", "/nonexistent.toml"]) == 1


def test_fail_verdict_exit_two(tmp_path, capsys):
    # turning the loop central form factor off breaks the Jacobi identity,
    # so the algebra suite must fail with exit code 2
    cfg = tmp_path / "broken.toml"
    cfg.write_text(MINI_CONFIG.replace('mu2 = "0"',
                                       'mu2 = "0"\ncentral_form_factor = false'))
    code = run(["verify-algebra", "--config", str(cfg), "--samples", "80"])
    out = capsys.readouterr().out
    assert code == 2
    report = json.loads(out)
    fails = [c for c in report["checks"] if c["verdict"] == "FAIL"]
    assert fails
    assert any(c["counterexample"] for c in fails)


def test_table_format(mini_config, capsys):
    code = run(["weights", "--config", str(mini_config), "--format", "table"])
    out = capsys.readouterr().out
    assert code == 0
    assert "VERDICT" in out and "checks passed" in out


def test_verma_suite_via_cli(tmp_path, capsys):
    cfg = tmp_path / "verma.toml"
    cfg.write_text(MINI_CONFIG + VERMA_BLOCK)
    code = run(["verma", "--config", str(cfg)])
    out = capsys.readouterr().out
    assert code == 0
    report = json.loads(out)
    names = {c["name"] for c in report["checks"]}
    assert {"verma-grading", "verma-submodule-invariance", "verma-highest-weight",
            "verma-evaluation-property", "verma-quotient-dims"} <= names


def test_eval_suite_nilpotent(tmp_path, capsys):
    cfg = tmp_path / "nil.toml"
    cfg.write_text(MINI_CONFIG.replace('modulus = "s^2 - 3*s + 2"', 'modulus = "s^2"')
                   .replace('psi = "2"', 'psi = "0"'))
    code = run(["eval-check", "--config", str(cfg), "--samples", "30"])
    out = capsys.readouterr().out
    assert code == 0
    report = json.loads(out)
    assert all(c["verdict"] == "PASS" for c in report["checks"])
