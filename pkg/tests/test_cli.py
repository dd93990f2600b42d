import json

import pytest

from diffalg.cli import main

T = '{"n":1,"terms":[{"i":1,"j":1,"m":1,"r":0,"c":"1"}]}'
TINV = '{"n":1,"terms":[{"i":1,"j":1,"m":-1,"r":0,"c":"1"}]}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bracket_example(capsys):
    code, out, _ = run(capsys, "bracket", T, TINV)
    assert code == 0
    assert out.strip() == '{"kappa":"1","terms":[]}'
    code, out, _ = run(capsys, "bracket", T, T)
    assert json.loads(out) == {"kappa": "0", "terms": []}


def test_bracket_from_files(tmp_path, capsys):
    fx, fy = tmp_path / "x.json", tmp_path / "y.json"
    fx.write_text(T)
    fy.write_text(TINV)
    assert run(capsys, "bracket", str(fx), str(fy))[0] == 0


def test_infinite_bracket(capsys):
    x = '{"terms":[{"l2":1,"k2":1}]}'
    y = '{"terms":[{"l2":-1,"k2":-1}]}'
    code, out, _ = run(capsys, "bracket", x, y, "--algebra", "inf")
    assert code == 0
    assert json.loads(out)["kappa0"] == "1"
    code, out, _ = run(capsys, "bracket", x, y, "--algebra", "inf", "--cocycle", "alpha", "--iota", "1", "--shifts", "1,1")
    assert code == 0
    assert run(capsys, "bracket", x, y, "--algebra", "inf", "--cocycle", "beta", "--iota", "1/2")[0] == 2


def test_malformed_input_exits_2(capsys):
    code, _, err = run(capsys, "bracket", "{not json", T)
    assert code == 2 and "error" in err
    assert run(capsys, "bracket", '{"n":1,"terms":[{"i":3,"j":1,"m":0,"r":0}]}', T)[0] == 2
    assert run(capsys, "bracket", str("/nonexistent/file.json"), T)[0] == 2


def test_character_table(capsys):
    code, out, _ = run(capsys, "character", "--n", "1", "--ell", "0", "--order", "5", "--format", "table")
    assert code == 0 and out.strip() == "1 1 3 6 13 24 | match"
    code, out, _ = run(capsys, "character", "--order", "0", "--format", "table")
    assert out.strip() == "1 | match"


def test_character_json_and_skew(capsys):
    code, out, _ = run(capsys, "character", "--variant", "o", "--n", "1", "--ell", "1", "--eps", "1", "--order", "6")
    rep = json.loads(out)
    assert code == 0 and rep["match"]
    assert rep["enumerated"] == ["1", "1", "2", "4", "7", "12", "21"]


def test_character_limits(capsys):
    assert run(capsys, "character", "--order", "17")[0] == 2
    assert run(capsys, "character", "--order", "17", "--max-order", "20")[0] == 0
    assert run(capsys, "character", "--variant", "o", "--n", "2", "--ell", "1,0")[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "jacobi", "--seed", "7", "--count", "30")
    rep = json.loads(out)
    assert code == 0 and rep["result"] == "pass" and rep["seed"] == 7
    code, out, _ = run(capsys, "verify", "singular", "--variant", "gl", "--n", "2", "--chi", "1")
    assert code == 0


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "singular", "--variant", "o", "--n", "4", "--chi", "1")
    rep = json.loads(out)
    assert code == 1 and rep["result"] == "fail" and "counterexample" in rep


def test_verify_unknown_suite_and_list(capsys):
    assert run(capsys, "verify", "nonsense")[0] == 2
    assert run(capsys, "verify")[0] == 2
    code, out, _ = run(capsys, "verify", "--list")
    assert code == 0 and {d["suite"] for d in json.loads(out)} >= {"jacobi", "hom", "virasoro"}


def test_deterministic_reports(capsys):
    a = run(capsys, "verify", "hom", "--n", "2", "--seed", "3", "--pairs", "4", "--probes", "2")
    b = run(capsys, "verify", "hom", "--n", "2", "--seed", "3", "--pairs", "4", "--probes", "2")
    assert a == b and a[0] == 0


def test_act(capsys):
    elem = '{"n":1,"terms":[{"i":1,"j":1,"m":0,"r":0}]}'
    code, out, _ = run(capsys, "act", "--element", elem, "--iota", "1/3")
    assert code == 0
    assert json.loads(out) == {"space": "fermionic", "terms": [{"bars": [], "thetas": [], "c": "-1/3"}]}
    raw = '{"kappa0":"0","terms":[{"l2":-1,"k2":-3}]}'
    code, out, _ = run(capsys, "act", "--element", raw, "--module", "bosonic")
    assert json.loads(out)["terms"] == [{"xbars": [[-1, 1]], "xs": [[-3, 1]], "c": "1"}]
    vec = '{"space":"bosonic","terms":[]}'
    assert run(capsys, "act", "--element", raw, "--vector", vec)[0] == 2


def test_act_vacuum(capsys):
    f = '{"n":2,"terms":[{"i":2,"j":1,"m":-1,"r":0}]}'
    code, out, _ = run(capsys, "act", "--module", "vacuum", "--element", f, "--n", "2")
    assert code == 0 and json.loads(out)["terms"][0]["c"] == "1"
    bad = '{"n":2,"terms":[{"i":1,"j":2,"m":-1,"r":0}]}'
    assert run(capsys, "act", "--module", "vacuum", "--element", bad, "--variant", "o", "--n", "2", "--ell", "1,1", "--eps", "1")[0] == 2


def test_list_basis(capsys):
    code, out, _ = run(capsys, "list-basis", "--n", "1", "--order", "3")
    rows = json.loads(out)
    assert code == 0 and [r["degree"] for r in rows] == [1, 2, 2, 3, 3, 3]


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"n": 1, "order": 5, "format": "table"}))
    code, out, _ = run(capsys, "character", "--config", str(cfg))
    assert out.strip() == "1 1 3 6 13 24 | match"
    code, out, _ = run(capsys, "--order", "3", "character", "--config", str(cfg))
    assert out.strip() == "1 1 3 6 | match"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "character", "--config", str(cfg))[0] == 2


def test_help_exits_cleanly(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys)[0] == 2
