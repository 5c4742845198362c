import json

import pytest

from surfacelie.cli import COMMANDS, main

TORUS = """\
surface g=1 n=1
map ta:
  b1 -> b1 a1
map tb:
  a1 -> a1 b1^-1
map ca:
  b1 -> a1 b1 a1^-1
rel: ta tb ta = tb ta tb
rel: (ta tb)^6 = 1
rel: ca = 1
"""

DEEP = """\
surface g=1 n=2
map inner:
  a1 -> b1 a1 b1^-1
  b1 -> b1
  c1 -> b1 c1 b1^-1
map push:
  c1 -> b1^-1 a1^-1 b1 a1 c1 a1^-1 b1^-1 a1 b1
"""

NOT_BRAID = """\
surface g=1 n=2
map part:
  c1 -> a1 b1 c1 b1^-1 a1^-1
"""


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in {"torus": TORUS, "deep": DEEP, "notbraid": NOT_BRAID,
                       "bad": "surface g=1 n=1\nmap t:\n  z1 -> a1\n",
                       "wrong": TORUS + "rel: ta = 1\n"}.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        out[name] = str(p)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


CASES = {
    "ranks": ["--genus", "0", "--punctures", "3", "--max-degree", "6"],
    "basis": ["--letters", "2", "--max-degree", "4"],
    "magnus": ["--genus", "1", "--punctures", "1", "--word", "a1 b1 a1^-1 b1^-1",
               "--max-degree", "4"],
    "exactness": ["--genus", "1", "--punctures", "1", "--max-degree", "4"],
    "out-ranks": ["--genus", "1", "--punctures", "2", "--max-degree", "4",
                  "--mod-l", "2", "--k", "2"],
    "der-ranks": ["--letters", "2", "--max-degree", "4"],
    "dehn-nielsen": ["--genus", "1", "--punctures", "1", "--max-degree", "4"],
}


def test_every_subcommand_is_covered():
    assert set(CASES) | {"ihara", "johnson", "check-aut", "verify-relations"} == set(COMMANDS)


@pytest.mark.parametrize("cmd", sorted(CASES))
def test_subcommands_pass(capsys, cmd):
    code, rep = run_json(capsys, cmd, *CASES[cmd])
    assert code == 0, rep["failures"]
    assert set(rep) == {"command", "params", "results", "failures", "version"}
    assert rep["command"] == cmd and rep["results"] and rep["failures"] == []


def test_ranks_table(capsys):
    code, rep = run_json(capsys, "ranks", "--genus", "0", "--punctures", "3", "--max-degree", "6")
    ranks = {row["degree"]: row for row in rep["results"]}
    assert [ranks[m]["witt"] for m in range(1, 7)] == [0, 2, 0, 1, 0, 2]
    assert all(r["witt"] == r["lyndon"] for r in rep["results"])


def test_table_format(capsys):
    code, out = run(capsys, "ranks", "--letters", "3", "--max-degree", "3", "--format", "table")
    assert code == 0 and "witt" in out and not out.lstrip().startswith("{")


def test_ihara_reports_degree_one(capsys):
    code, rep = run_json(capsys, "ihara", "--max-degree", "4")
    assert code == 1
    assert [f["degree"] for f in rep["failures"]] == [1]


def test_johnson(capsys, files):
    code, rep = run_json(capsys, "johnson", "--input", files["deep"], "--max-degree", "6")
    assert code == 0
    rows = {r["map"]: r for r in rep["results"]}
    assert rows["inner"]["zero_in_out"]
    assert rows["push"]["depth"] == 2 and not rows["push"]["zero_in_out"]
    code, rep = run_json(capsys, "johnson", "--input", files["notbraid"])
    assert code == 1 and rep["failures"][0]["map"] == "part"


def test_check_aut_builtin(capsys):
    code, rep = run_json(capsys, "check-aut", "--builtin", "suzuki-g2")
    assert code == 1
    assert [f["map"] for f in rep["failures"]] == ["alpha2"]
    ok = [r for r in rep["results"] if r["certified"]]
    assert len(ok) == 6 and all(r["similitude"] in (1, -1) for r in ok)


def test_verify_relations(capsys, files):
    code, rep = run_json(capsys, "verify-relations", "--input", files["torus"],
                         "--max-degree", "4")
    assert code == 0
    assert [r["status"] for r in rep["results"]] == ["holds"] * 3
    code, rep = run_json(capsys, "verify-relations", "--input", files["wrong"],
                         "--max-degree", "4")
    assert code == 1 and rep["failures"][0]["status"] == "fails-at-degree-0"


def test_birman_needs_candidates(capsys, files):
    code = main(["verify-relations", "--input", files["torus"], "--builtin", "birman-relations"])
    assert code == 2
    assert "s1" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["check-aut"],
    ["check-aut", "--input", "/nonexistent/file.txt"],
    ["johnson", "--builtin", "suzuki-g2"],
    ["der-ranks", "--genus", "2", "--punctures", "0"],
    ["magnus", "--genus", "1", "--punctures", "1", "--word", "q7"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_parse_error_position(capsys, files):
    assert main(["check-aut", "--input", files["bad"]]) == 2
    assert "line 3, column 3" in capsys.readouterr().err


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as info:
        main(["ranks", "--format", "xml"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["ranks", "--max-degree", "0"])
    assert info.value.code == 2


def test_deterministic_output(capsys, files):
    argv = ["verify-relations", "--input", files["torus"], "--max-degree", "4"]
    assert run(capsys, *argv) == run(capsys, *argv)
