import json

import pytest

from avcp.cli import CONFIG_DIR, main
from avcp.config import Experiment, load_config, parse_config
from avcp.errors import ConfigError

BUNDLED = sorted(p.stem for p in CONFIG_DIR.glob("*.toml"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", [n for n in BUNDLED if n != "violation"])
def test_bundled_configs_pass(name, tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, err = run(capsys, "run", name, "--out", str(out))
    assert code == 0, err
    report = json.loads(out.read_text())
    assert report["summary"]["passed"] and report["summary"]["failed"] == 0
    parse_config(report["config"])


def test_violation_config_exit_1(capsys):
    code, _, err = run(capsys, "run", "violation")
    assert code == 1
    assert "AVCP violation" in err


def test_sx_plus_sz_records(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(capsys, "run", "sx_plus_sz", "--out", str(out))[0] == 0
    report = json.loads(out.read_text())
    seq = [m for m in report["mc"] if m["arrangement"] == "sequential"][0]
    assert seq["support"] == [-1.0, 0.0, 1.0]
    ev = [c for c in report["checks"] if c["name"] == "eigenvalues"][0]
    assert ev["lhs"] == pytest.approx([-2 ** -0.5, 2 ** -0.5], abs=1e-12)


def test_failed_check_exit_2(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text('''
name = "wrong"
[operators]
Z = { builtin = "pauli_z" }
[[checks]]
kind = "eigenvalues"
operator = "Z"
values = [0.0, 2.0]
''')
    code, _, _ = run(capsys, "run", str(cfg))
    assert code == 2


def test_schema_errors_name_field_paths(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text('''
name = "bad"
[operators]
A = { builtin = "spin_j", N = 2 }
[[checks]]
kind = "nonsense"
''')
    code, _, err = run(capsys, "run", str(cfg))
    assert code == 1
    assert "operators.A" in err and "checks.0.kind" in err


def test_unknown_label_and_bad_toml(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text('''
name = "bad"
[operators]
A = { builtin = "pauli_z" }
[[arrangements]]
name = "x"
measurements = [{ label = "a", operator = "A" }]
combining = "a*q"
[[checks]]
kind = "mc"
arrangement = "x"
''')
    assert run(capsys, "run", str(cfg))[0] == 1
    cfg.write_text("name = ")
    assert run(capsys, "run", str(cfg))[0] == 1
    assert run(capsys, "run", str(tmp_path / "missing.toml"))[0] == 1


def test_inline_matrix_operator():
    cfg = parse_config({
        "name": "inline",
        "operators": {"Y": {"matrix": [[[0, 0], [0, -1]], [[0, 1], [0, 0]]]}},
        "checks": [{"kind": "eigenvalues", "operator": "Y", "values": [-1, 1]}],
    })
    recs, _ = Experiment(cfg).run_checks()
    assert all(r.passed for r in recs)
    with pytest.raises(ConfigError):
        Experiment(parse_config({
            "name": "nonherm",
            "operators": {"N": {"matrix": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}},
            "checks": [{"kind": "eigenvalues", "operator": "N", "values": [0, 0]}],
        }))


def test_overrides_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(capsys, "run", "a_plus_b", "--seed", "3", "--runs", "5000", "--out", str(out))[0] == 0
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    for r in (ra, rb):
        r["environment"].pop("timestamp")
    assert ra == rb
    assert ra["environment"]["seed"] == 3
    assert all(m["runs"] == 5000 for m in ra["mc"])


def test_csv_format(capsys):
    code, out, _ = run(capsys, "run", "hermitization", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "group,name,passed,abs_err,tol,lhs,rhs,notes"


def test_builtins(capsys):
    code, out, _ = run(capsys, "builtins")
    assert code == 0 and "spin_j" in out and "schema version 1.0" in out


def test_verify_filter_and_determinism(capsys):
    code, out1, _ = run(capsys, "verify", "--filter", "spin")
    assert code == 0
    lines = [l for l in out1.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert lines and all("[spin]" in l for l in lines)
    _, out2, _ = run(capsys, "verify", "--filter", "spin")
    assert out1 == out2
    assert run(capsys, "verify", "--filter", "nope")[0] == 1


def test_load_config_reports_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "none.toml")
