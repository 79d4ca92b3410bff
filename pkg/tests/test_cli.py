import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from valgroups.cli import main

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_wordmetric(capsys):
    code, out, _ = run(capsys, "wordmetric", "--N", 3)
    assert code == 0 and "||sum e_j||_F = 2" in out


def test_group_commands(tmp_path, capsys):
    code, out, _ = run(capsys, "group", "quotient", "--config", FIX / "quotient.json", "--out", tmp_path / "q.json")
    assert code == 0
    assert json.loads((tmp_path / "q.json").read_text())["quotient"] == {"factors": [4]}
    code, out, _ = run(capsys, "group", "homs", "--config", FIX / "homs.json")
    assert code == 0 and out.startswith("8 homomorphisms")


def test_value_validate_failure_exit_1(tmp_path, capsys):
    code, out, _ = run(capsys, "value", "validate", "--config", FIX / "bad_value.json", "--out", tmp_path / "w.json")
    assert code == 1 and "V3" in out
    assert json.loads((tmp_path / "w.json").read_text())["axiom"] == "V3"
    assert run(capsys, "value", "validate", "--config", FIX / "z4.json")[0] == 0


def test_value_complete(tmp_path, capsys):
    code, _, _ = run(capsys, "value", "complete", "--config", FIX / "costs.json", "--out", tmp_path / "c.json")
    assert code == 0
    assert json.loads((tmp_path / "c.json").read_text())["values"] == ["0/1", "1/1", "2/1", "5/2", "2/1", "1/1"]


def test_katetov_commands(capsys):
    assert run(capsys, "katetov", "check", "--config", FIX / "katetov_z4.json")[0] == 0
    code, out, _ = run(capsys, "katetov", "check", "--config", FIX / "order3.json")
    assert code == 1 and "(1,), (2,)" in out
    assert run(capsys, "katetov", "realize", "--config", FIX / "katetov_z4.json")[0] == 0
    assert run(capsys, "katetov", "extend", "--config", FIX / "order3.json")[0] == 2
    assert run(capsys, "katetov", "midpoint", "--config", FIX / "midpoint.json")[0] == 0


def test_amalgamate_trivial_base_is_direct_sum(tmp_path, capsys):
    out_file = tmp_path / "a.json"
    code, _, _ = run(capsys, "amalgamate", "--config", FIX / "a1_trivial.json", "--out", out_file)
    assert code == 0
    res = json.loads(out_file.read_text())
    vals = sorted(F(v) for v in res["result"]["values"])
    assert vals == [0, F(1, 2), 1, F(3, 2)]


def test_free_commands(capsys):
    code, out, _ = run(capsys, "free", "pd", "--config", FIX / "space4.json")
    assert code == 0 and "p_d = 2/1" in out
    assert run(capsys, "free", "matching", "--config", FIX / "space4.json")[0] == 0


def test_chain_build_verify_export(tmp_path, capsys):
    built = tmp_path / "chain.json"
    code, out, _ = run(capsys, "chain", "build", "--config", FIX / "chain.json", "--out", built)
    assert code == 0 and "final order 4" in out
    code, out, _ = run(capsys, "chain", "verify", built, "--out", tmp_path / "report.json")
    assert code == 0 and "ledger 3/3 (100%)" in out
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["ledger"]["ratio"] == "1/1" and rep["monotone"]
    again = tmp_path / "again.json"
    assert run(capsys, "chain", "export", built, "--out", again)[0] == 0
    assert again.read_bytes() == built.read_bytes()
    dot = tmp_path / "chain.dot"
    assert run(capsys, "chain", "export", built, "--format", "dot", "--out", dot)[0] == 0
    assert dot.read_text().startswith("digraph")


def test_chain_build_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "chain", "build", "--config", FIX / "chain.json", "--out", a)
    run(capsys, "chain", "build", "--config", FIX / "chain.json", "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_chain_verify_detects_tampering(tmp_path, capsys):
    built = tmp_path / "chain.json"
    run(capsys, "chain", "build", "--config", FIX / "chain.json", "--out", built)
    obj = json.loads(built.read_text())
    last = obj["stages"][-1]
    last["values"] = ["0/1"] + ["1/1"] * (len(last["values"]) - 1)
    built.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "chain", "verify", built)
    assert code == 1 and "links BROKEN" in out


def test_pv_commands(capsys):
    code, out, _ = run(capsys, "pv", "check", "--config", FIX / "kappa_nabla.json")
    assert code == 0 and "L = 1/1" in out
    code, out, _ = run(capsys, "pv", "norm", "--config", FIX / "step.json")
    assert code == 0 and "5/2" in out


def test_pv_check_failure(tmp_path, capsys):
    cfg = tmp_path / "k.json"
    cfg.write_text(json.dumps({"kappa": {"points": [["0/1", "1/2"], ["1/1", "1/1"]], "tail": "1/1"}}))
    code, out, _ = run(capsys, "pv", "check", "--config", cfg)
    assert code == 1 and "NF2" in out


def test_suite_single_with_seed(capsys):
    code, out, _ = run(capsys, "suite", "odd-inclusion", "--seed", 5)
    assert code == 0 and out.startswith("PASS odd_example")


def test_suite_without_seed_prints_one(capsys):
    code, out, _ = run(capsys, "suite", "odd-inclusion")
    assert code == 0 and out.startswith("seed: ")


@pytest.mark.parametrize(
    "argv",
    [
        ["nope"],
        [],
        ["group", "frobnicate"],
        ["suite", "nosuch", "--seed", "1"],
        ["wordmetric", "--N", "1"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_schema_error_reports_path(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"group": {"factors": [2]}, "values": ["0/1", 7]}))
    code, _, err = run(capsys, "value", "validate", "--config", cfg)
    assert code == 2 and "$.values[1]" in err
    cfg.write_text("{broken")
    assert run(capsys, "value", "validate", "--config", cfg)[0] == 2
    assert run(capsys, "value", "validate", "--config", tmp_path / "missing.json")[0] == 2
