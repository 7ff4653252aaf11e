import json
import subprocess
import sys

import pytest

from rankspan import __version__
from rankspan.cli import main


def run(tmp_path, *argv, env=None):
    proc = subprocess.run(
        [sys.executable, "-m", "rankspan", *argv], capture_output=True, text=True, cwd=tmp_path, env=env
    )
    return proc.returncode, proc.stdout, proc.stderr


@pytest.mark.parametrize(
    "argv,dim,codim",
    [
        (["sl2_f2"], 3, 1),
        (["t_upper", "--n", "2"], 3, 1),
        (["t_strict_upper", "--n", "4", "--q", "3"], 6, 10),
        (["unspanned", "--n", "3", "--p", "3", "--r", "1"], 7, 2),
        (["extremal_affine", "--n", "3", "--p", "2", "--k", "2"], 3, 3),
        (["random", "--n", "3", "--p", "2", "--codim", "2", "--seed", "4"], 4, 2),
    ],
)
def test_construct_analyze_round_trip(tmp_path, capsys, argv, dim, codim):
    out = tmp_path / "obj.json"
    assert main(["construct", *argv, "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["analyze", str(out), "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert (rep["dim"], rep["codim"]) == (dim, codim)
    assert rep["version"] == __version__


def test_analyze_reports(tmp_path, capsys):
    f = tmp_path / "sl2.json"
    main(["construct", "sl2_f2", "--out", str(f)])
    capsys.readouterr()
    main(["analyze", str(f), "--span", "2", "--profile"])
    text = capsys.readouterr().out
    assert "span_of_rank(2)   = V" in text
    assert "SL2_CLASS" in text
    main(["construct", "t_upper", "--n", "2", "--out", str(f)])
    capsys.readouterr()
    main(["analyze", str(f), "--profile", "--format", "json"])
    rep = json.loads(capsys.readouterr().out)
    assert rep["profile"] == {"0": 1, "1": 5, "2": 2}


def test_analyze_zero_space(tmp_path, capsys):
    f = tmp_path / "zero.json"
    f.write_text(json.dumps({"q": 3, "rows": 2, "cols": 2, "basis": []}))
    main(["analyze", str(f), "--profile", "--format", "json"])
    assert json.loads(capsys.readouterr().out)["profile"] == {"0": 1}


def test_parse_error_has_line_context(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"q": 2,\n "rows": 2 "cols": 2}\n')
    assert main(["analyze", str(f)]) == 2
    err = capsys.readouterr().err
    assert "bad.json:2:" in err and '"rows": 2 "cols": 2' in err


def test_invalid_entries_rejected(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"q": 2, "rows": 1, "cols": 2, "basis": [[[1, 2]]]}))
    assert main(["analyze", str(f)]) == 2


def test_budget_env_var(tmp_path):
    f = tmp_path / "full.json"
    f.write_text(json.dumps({"q": 3, "rows": 2, "cols": 2, "basis": [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]]}))
    import os

    env = {**os.environ, "RANKSPAN_BUDGET": "10"}
    code, _, err = run(tmp_path, "analyze", str(f), "--profile", env=env)
    assert code == 2 and "81" in err
    code, out, _ = run(tmp_path, "analyze", str(f), "--profile")
    assert code == 0 and "0:1  1:32  2:48" in out


def test_verify_exit_codes(capsys):
    assert main(["verify", "oddcase"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["counts"]["SL2_CLASS"] == 6 and d["counts"]["T2PLUS_CLASS"] == 9
    assert main(["verify", "oddcase", "--inject-failure"]) == 1
    capsys.readouterr()
    assert main(["verify", "gerstenhaber", "--n", "3", "--exhaustive", "--budget", "5"]) == 2
    assert main(["verify", "lcinf", "--n", "3"]) == 2
    assert main(["verify", "corhyper", "--n", "2", "--q", "2"]) == 0
    assert main(["verify", "hbound", "--n", "2", "--p", "3", "--k", "1"]) == 2


def test_inject_failure_every_suite(capsys):
    cases = [
        ["oddcase"],
        ["gerstenhaber", "--n", "2", "--exhaustive"],
        ["lcinf", "--n", "3", "--p", "2", "--trials", "3"],
        ["exist", "--n", "3", "--p", "2", "--trials", "3"],
        ["condsuff", "--n", "3", "--p", "2", "--trials", "3"],
        ["genrangmax", "--n", "3", "--p", "2", "--trials", "3"],
        ["corhyper", "--n", "2", "--q", "3"],
        ["flanders", "--n", "2", "--p", "2"],
        ["hbound", "--n", "2", "--p", "2", "--k", "2"],
        ["tightness", "--n", "3", "--p", "3", "--r", "1"],
        ["combin", "--trials", "3"],
        ["triangularize", "--trials", "3"],
    ]
    for argv in cases:
        assert main(["verify", *argv]) == 0, argv
        assert main(["verify", *argv, "--inject-failure"]) == 1, argv
    capsys.readouterr()


def test_verify_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    base = ["verify", "condsuff", "--n", "4", "--p", "4", "--q", "3", "--trials", "6", "--seed", "42", "--no-timing"]
    assert main([*base, "--out", str(a)]) == 0
    assert main([*base, "--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_triangularize_single_mode(capsys):
    assert main(["verify", "triangularize", "--trials", "5", "--mode", "recursive"]) == 0
    assert json.loads(capsys.readouterr().out)["params"]["modes"] == ["RECURSIVE"]
    assert main(["verify", "triangularize", "--mode", "construct"]) == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit):
        main(["--version"])
    assert __version__ in capsys.readouterr().out


def test_spanning_suite_single_rank(capsys):
    assert main(["verify", "condsuff", "--n", "4", "--p", "4", "--r", "2", "--q", "3", "--trials", "10", "--seed", "42"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["params"]["r"] == 2 and d["counts"]["PASS"] == 10
    assert main(["verify", "condsuff", "--n", "4", "--p", "4", "--r", "4", "--trials", "2"]) == 2
