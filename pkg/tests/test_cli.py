import json
import subprocess
import sys

import pytest

from tqlab.checks import golden
from tqlab.cli import DEFAULTS, ParseError, main, parse_scenario
from tqlab.grring import normalize_relation_latex
from tqlab.ymono import parse_qchar_latex


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cartan_json(capsys):
    code, out, _ = run(capsys, "cartan", "show", "B2")
    obj = json.loads(out)
    assert code == 0
    assert obj["C"] == [[2, -1], [-2, 2]] and obj["d"] == [2, 1]


def test_qchar_latex_matches_golden(capsys):
    code, out, _ = run(capsys, "qchar", "--type", "B2", "--node", "2", "--anchor", "1", "--latex")
    assert code == 0
    assert parse_qchar_latex(out) == parse_qchar_latex(golden("qchar_B2.tex"))


@pytest.mark.parametrize("flavor,name", [("L+", "tq_A1"), ("R+", "tq_A1_R"), ("L-", "tq_A1_Lminus"), ("R-", "tq_A1_Rminus")])
def test_tq_flavors(capsys, flavor, name):
    code, out, _ = run(capsys, "tq", "--flavor", flavor, "--latex")
    assert code == 0
    assert normalize_relation_latex(out) == normalize_relation_latex(golden(f"{name}.tex"))


def test_unsupported_type_is_usage_error(capsys):
    code, _, err = run(capsys, "qchar", "--type", "G2")
    assert code == 2 and "G2" in err
    code, _, _ = run(capsys, "cartan", "show", "Q7")
    assert code == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nosuchcommand"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["bethe", "gen"])
    assert exc.value.code == 2


def test_bethe_gen_closed_root(capsys):
    code, out, _ = run(capsys, "bethe", "gen", "--sl2", "--N", "1", "--R", "1")
    obj = json.loads(out)
    assert code == 0
    assert obj["closed_root"]["latex"] == "\\frac{1 - q^{-1}v}{1 - qv}"
    assert len(obj["equations"]) == 1


def test_bethe_solve_nontwisted(capsys):
    code, out, _ = run(capsys, "bethe", "solve", "--sl2", "--R", "5", "--m", "2", "--q0", "1.2", "--preset", "nontwisted")
    obj = json.loads(out)
    assert code == 0
    assert obj["v0"] == pytest.approx([1.44, 0.0])
    assert all(r < 1e-9 for s in obj["solutions"] for r in s["residuals"])


def test_bethe_solve_without_admissible_roots(capsys):
    # at v = q^2 the only solution of this system is w_1 = w_2 = 0
    code, out, _ = run(capsys, "bethe", "solve", "--sl2", "--R", "2", "--m", "2", "--q0", "1.2", "--preset", "nontwisted")
    assert code == 1 and json.loads(out)["status"] == "fail"


def test_bethe_solve_needs_v0(capsys):
    code, _, err = run(capsys, "bethe", "solve", "--sl2")
    assert code == 2 and "--v0" in err


def test_bethe_mismatched_factor_lists(capsys):
    code, _, _ = run(capsys, "bethe", "gen", "--sl2", "--R", "1", "--R", "2", "--b", "0")
    assert code == 2


def test_spectra_commands(capsys):
    code, out, _ = run(capsys, "spectra", "fratio", "--type", "A2", "--target", "Y_{1,1}Y_{2,q}", "--latex")
    assert code == 0 and out.count("\n") == 3
    code, out, _ = run(capsys, "spectra", "template", "--target", "Y_{1,q^{-1}}", "--lam", "-1", "--K", "4")
    assert code == 0 and len(json.loads(out)["summands"]) == 2
    code, _, _ = run(capsys, "spectra", "fseries", "--target", "Y_{1,q}^{-1}")
    assert code == 2


def test_verify_sl2_and_suites(capsys):
    code, out, _ = run(capsys, "verify", "sl2", "--what", "transfer", "--N", "2")
    obj = json.loads(out)
    assert code == 0 and obj["status"] == "pass"
    code, out, _ = run(capsys, "verify", "all", "--suite", "relations", "--suite", "qchar")
    obj = json.loads(out)
    assert code == 0
    assert all(r["runtime_ms"] is None for r in obj["checks"])
    assert {r["check_id"] for r in obj["checks"]} >= {"tq.A1", "tq.A2", "tq.B2", "qchar.kr.6"}


def test_verify_timing_flag(capsys):
    _, out, _ = run(capsys, "verify", "all", "--suite", "bethe", "--timing")
    assert all(isinstance(r["runtime_ms"], float) for r in json.loads(out)["checks"])


def test_bad_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("TQLAB_SEED", "abc")
    code, _, err = run(capsys, "verify", "all", "--suite", "bethe")
    assert code == 2 and "TQLAB_SEED" in err


def test_seed_env_is_recorded(capsys, monkeypatch):
    monkeypatch.setenv("TQLAB_SEED", "17")
    _, out, _ = run(capsys, "verify", "all", "--suite", "bethe")
    assert json.loads(out)["seed"] == 17


# scenarios


def test_scenario_defaults():
    sc = parse_scenario("[scenario]\ncommand = qchar\n")
    assert (sc.K, sc.Kv, sc.M) == (DEFAULTS["K"], DEFAULTS["Kv"], DEFAULTS["M"])
    assert sc.type == "A1" and sc.format == "json" and sc.seed == 0


def test_scenario_nontwisted_preset():
    sc = parse_scenario("[scenario]\ncommand = verify\nwhat = baxter\npreset = nontwisted\nq0 = 1.2+0.1i\n")
    assert sc.q0 == complex(1.2, 0.1)
    assert sc.to_json()["v0"] == "q0^2"


@pytest.mark.parametrize("text,line,col", [
    ("[scenario]\ncommand = qchar\ncolour = red\n", 3, 1),
    ("[scenario]\ncommand = qchar\n    K = 4\n", 2, 1),
    ("K = 4\n[scenario]\n", 1, 1),
    ("[scenario]\ncommand = qchar\nK = 0\n", 3, 1),
    ("[scenario]\ncommand = dance\n", 2, 1),
    ("[scenario]\ncommand = qchar\nN = two\n", 3, 1),
])
def test_scenario_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_scenario(text)
    assert (exc.value.line, exc.value.col) == (line, col)


def test_scenario_structure_errors():
    with pytest.raises(ParseError):
        parse_scenario("command = qchar\n")
    with pytest.raises(ParseError):
        parse_scenario("[scenario]\ncommand = qchar\n[extra]\nx = 1\n")
    with pytest.raises(ParseError):
        parse_scenario("[scenario]\ntype = A2\n")


def test_scenario_run(tmp_path, capsys):
    p = tmp_path / "tq.ini"
    p.write_text("[scenario]\ncommand = tq\ntype = A2\nanchor = 1\nformat = latex\n")
    code, out, _ = run(capsys, "scenario", "run", str(p))
    assert code == 0
    assert normalize_relation_latex(out) == normalize_relation_latex(golden("tq_A2.tex"))
    bad = tmp_path / "bad.ini"
    bad.write_text("[scenario]\ncommand = tq\nbogus = 1\n")
    code, _, err = run(capsys, "scenario", "run", str(bad))
    assert code == 2 and "line 3" in err
    code, _, _ = run(capsys, "scenario", "run", str(tmp_path / "missing.ini"))
    assert code == 2


def test_scenario_verify(tmp_path, capsys):
    p = tmp_path / "v.ini"
    p.write_text("[scenario]\ncommand = verify\nwhat = baxter\nN = 1\nseed = 4\n")
    code, out, _ = run(capsys, "scenario", "run", str(p))
    obj = json.loads(out)
    assert code == 0 and obj["status"] == "pass"
    assert obj["scenario"]["seed"] == 4


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tqlab", "cartan", "show", "A2", "--text"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("C = ")


def test_cli_reports_are_byte_identical(capsys):
    outs = [run(capsys, "verify", "all", "--suite", "spectra", "--suite", "invariants", "--seed", "7")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_scenario_inline_comments():
    sc = parse_scenario("[scenario]\ncommand = tq   ; relation\ntype = B2 # rank two\nnode = 2\n")
    assert (sc.command, sc.type, sc.node) == ("tq", "B2", 2)
