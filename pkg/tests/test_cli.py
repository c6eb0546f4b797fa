import json
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest

from workbench.cli import main, run
from workbench.fixtures import fixture, fixture_names, write_fixture
from workbench.errors import UnknownFixture

SCHEMA = json.loads(resources.files("workbench").joinpath("schemas", "report.schema.json").read_text())


def _no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(_no_floats(v) for v in obj.values())
    if isinstance(obj, list):
        return all(_no_floats(v) for v in obj)
    return True


@pytest.fixture
def files(tmp_path):
    def make(name):
        return str(write_fixture(name, tmp_path))

    return make


def _check(report):
    jsonschema.validate(report, SCHEMA)
    assert _no_floats(report)
    return report


def test_classify_rose(files):
    code, rep = run(["lpa", "classify", "--graph", files("rose2"), "--witnesses"])
    assert code == 0
    _check(rep)
    assert rep["verdict"] == "A1" and rep["evidence"] == "proof"
    assert rep["certificate"]["witnesses"]["divergence"]


def test_free_group_folner_is_inconclusive(files):
    code, rep = run(["space", "folner", "--space", files("free_group"), "--epsilon", "1/2", "--window-radius", "3"])
    assert code == 2
    assert _check(rep)["verdict"] == "inconclusive"


def test_line_folner_found(files):
    code, rep = run(["space", "folner", "--space", files("z_line"), "--epsilon", "1/2", "--window-radius", "20"])
    assert code == 0
    _check(rep)
    assert rep["certificate"]["reverified"]
    ratio = Fraction(4, rep["certificate"]["size"])
    assert rep["certificate"]["ratio"] == f"{ratio.numerator}/{ratio.denominator}"


def test_exhaustive_none_found_is_a_verdict(files):
    code, rep = run(["space", "folner", "--space", files("free_group"), "--epsilon", "1/10",
                     "--window-radius", "2", "--strategy", "exhaustive"])
    assert code == 0
    assert _check(rep)["verdict"] == "no-folner-set-in-window"
    code, rep = run(["space", "folner", "--space", files("free_group"), "--epsilon", "1/10",
                     "--window-radius", "2", "--strategy", "exhaustive", "--limit", "13"])
    assert code == 1 and rep["error"].startswith("LimitExceeded")


def test_paradox_reports(files):
    code, rep = run(["space", "paradox", "--space", files("z2"), "--window-radius", "3"])
    assert code == 0 and _check(rep)["verdict"] == "hall-violation"
    k, n = rep["certificate"]["K_size"], rep["certificate"]["neighborhood_size"]
    assert n < k
    code, rep = run(["space", "paradox", "--space", files("free_group"), "--window-radius", "2"])
    assert code == 0 and _check(rep)["certificate"]["valid"]


def test_reports_are_deterministic(files):
    argv = ["space", "paradox", "--space", files("free_group"), "--window-radius", "2"]
    assert run(argv) == run(argv)


def test_bad_json_reports_location(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [1,\n  }')
    code, rep = run(["lpa", "classify", "--graph", str(bad)])
    assert code == 1
    assert f"{bad}:2:" in rep["error"]
    assert main(["lpa", "classify", "--graph", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err


def test_schema_error_reports_path(tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text(json.dumps({"vertices": ["v"], "edges": [{"id": "e", "src": "v"}]}))
    code, rep = run(["lpa", "classify", "--graph", str(bad)])
    assert code == 1
    assert "edges/0" in rep["error"]


def test_witness_and_mul(files):
    code, rep = run(["lpa", "folner-witness", "--graph", files("loop"), "--elements", "e", "e*",
                     "--epsilon", "1/5", "--N", "10"])
    assert code == 0 and _check(rep)["verdict"] == "folner-subspace"
    code, rep = run(["--field", "gf7", "lpa", "mul", "--graph", files("loop"), "--lhs", "e", "--rhs", "e*"])
    assert code == 0
    assert _check(rep)["certificate"]["text"] == "v"


def test_bridge(files):
    code, rep = run(["transalg", "bridge", "--paradox", files("bridge_f2")])
    assert code == 0 and _check(rep)["verdict"] == "relations-hold"


def test_transalg_verify(tmp_path, files):
    (tmp_path / "F.json").write_text(json.dumps([[k] for k in range(5)]))
    (tmp_path / "T.json").write_text(json.dumps([
        {"kind": "translation", "map": [[[k], [k + 1]] for k in range(-3, 8)]},
        {"kind": "projector", "set": [[0], [1]]},
    ]))
    code, rep = run(["transalg", "verify", "--space", files("z_line"), "--set", str(tmp_path / "F.json"),
                     "--testers", str(tmp_path / "T.json")])
    assert code == 0
    _check(rep)
    assert rep["verdict"] == "bound-holds"
    assert rep["certificate"]["ratios"] == ["6/5", "1/1"]


def test_oracle_commands(files):
    code, rep = run(["oracle", "ball-sizes", "--kind", "free", "--radius", "3"])
    assert code == 0 and _check(rep)["certificate"]["sizes"] == [1, 5, 17, 53]
    code, rep = run(["oracle", "matching", "--kind", "grid", "--radius", "2"])
    assert _check(rep)["verdict"] == "infeasible"
    code, rep = run(["oracle", "folner-scan", "--space", files("ten_point"), "--epsilon", "1"])
    assert code == 0 and _check(rep)["certificate"]["ratio"] == "0/1"
    code, rep = run(["oracle", "lpa-mul", "--graph", files("rose2"), "--trials", "50", "--degree", "3"])
    assert _check(rep)["verdict"] == "agree"


def test_fixtures_listing_and_output(tmp_path):
    code, rep = run(["fixtures", "--list"])
    assert code == 0 and rep["certificate"]["names"] == fixture_names()
    code, rep = run(["fixtures", "example58", "--out-dir", str(tmp_path)])
    assert code == 0
    assert json.loads((tmp_path / "example58.json").read_text()) == fixture("example58")
    code, rep = run(["fixtures", "nope"])
    assert code == 1 and "UnknownFixture" in rep["error"]
    with pytest.raises(UnknownFixture):
        fixture("nope")


def test_out_flag(tmp_path, files):
    out = tmp_path / "r.json"
    assert main(["--out", str(out), "lpa", "classify", "--graph", files("loop")]) == 0
    rep = json.loads(out.read_text())
    assert _check(rep)["verdict"] == "A3"
    assert out.read_text() == json.dumps(rep, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def test_usage_error():
    assert main(["lpa"]) == 1
