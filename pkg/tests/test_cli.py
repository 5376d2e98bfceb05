import json
from pathlib import Path

import pytest

from lmt.cli import main
from lmt.config import Config, load_config

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_config_defaults_and_env():
    assert load_config(env={}) == Config()
    c = load_config(env={"LMT_MAX_DEPTH": "7", "LMT_TOL": "1e-6", "LMT_SEED": "3"})
    assert (c.maxDepth, c.tol, c.seed) == (7, 1e-6, 3)
    assert load_config(env={"LMT_JOBS": "2"}, jobs=4).jobs == 4


def test_config_rejects_bad_values():
    with pytest.raises(ValueError):
        load_config(env={"LMT_QUBIT_CAP": "zero"})
    with pytest.raises(ValueError):
        Config(searchBudget=0)
    with pytest.raises(ValueError):
        Config(seed=2**64)


def test_term_commands(capsys):
    th = SAMPLES / "monoid.json"
    lhs = "((gen u * id c) ; gen m)"
    assert run(capsys, "term", "eq", th, "((id c * id c) ; gen m)", "gen m")[0] == 0
    assert run(capsys, "term", "eq", th, lhs, "id c")[0] == 1
    code, out, _ = run(capsys, "term", "derive", th, lhs, "id c")
    assert code == 0
    code, out, _ = run(capsys, "term", "normalize", th, lhs)
    assert code == 0 and out.strip()


def test_sig(capsys):
    code, out, _ = run(capsys, "sig", SAMPLES / "monoid.json")
    assert code == 0 and "m" in out


def test_zx(capsys):
    assert run(capsys, "zx", "eq", "(H ; H)", "id q")[0] == 0
    assert run(capsys, "zx", "eq", "Z(1,1,1/2)", "X(1,1,1/2)")[0] == 1


def test_mbqc(capsys):
    code, out, _ = run(capsys, "mbqc", "lc", SAMPLES / "graph.json", "b")
    assert code == 0
    assert json.loads(out)["outLabels"]["c"] == ["-g/2", "r/2", "g"]
    assert run(capsys, "mbqc", "sound", SAMPLES / "graph.json", "lc", "b")[0] == 0
    code, _, err = run(capsys, "mbqc", "lc", SAMPLES / "graph.json", "zz")
    assert code == 2 and "UnknownVertex" in err


def test_chan_condition(capsys):
    code, out, _ = run(capsys, "chan", "condition", SAMPLES / "joint.json", "--copar", "x0,x1")
    assert code == 0
    for v in ("1/4", "3/4", "1/3", "2/3"):
        assert v in out


def test_chan_compose(capsys):
    code, out, _ = run(capsys, "chan", "compose", SAMPLES / "coin.json", SAMPLES / "flip.json")
    assert code == 0


def test_ccs(capsys):
    code, out, _ = run(capsys, "ccs", "red", "(a.0 | ~a.0)")
    assert code == 0 and "0" in out
    assert run(capsys, "ccs", "check", "--size", "3")[0] == 0


def test_layer(capsys):
    sig = SAMPLES / "circuits.json"
    code, out, err = run(capsys, "layer", "sort", sig, "at[circ]{gen h}")
    assert code == 0, err


def test_exit_codes(capsys):
    assert run(capsys, "zx", "eval", "Z(1,1,1/0)")[0] == 2
    assert run(capsys, "suite", "nope")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "sig", SAMPLES / "missing.json")[0] == 2


def test_suite_json(capsys):
    code, out, _ = run(capsys, "suite", "layered-witnesses", "--json")
    assert code == 0
    rep = json.loads(out)[0]
    assert rep["suite"] == "layered-witnesses" and rep["failed"] == 0


def test_suite_text(capsys):
    code, out, _ = run(capsys, "suite", "layered-witnesses")
    assert code == 0 and out.startswith("PASS layered-witnesses")
