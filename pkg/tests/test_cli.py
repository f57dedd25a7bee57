import json
import subprocess
import sys

import pytest

from trkr.cli import main


def _strict(text):
    def bad(c):
        raise ValueError(f"non-standard JSON constant {c}")
    return json.loads(text, parse_constant=bad)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_homology_json_is_deterministic(capsys):
    args = ("homology", "--braid", "b=2; 1", "-N", "2", "--kmax", "9", "--format", "json")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    data = _strict(out1)
    assert data["schema"] == 1 and data["sl"] == -1
    assert data["audits"]["structure_theorem"]["passed"]
    assert data["components"] == [{"eps": 1, "i": 0, "free": [{"j": -1, "k": -1, "mult": 1},
                                                                {"j": -1, "k": 1, "mult": 1}],
                                   "torsion": [{"l": 1, "j": -1, "k": k, "mult": 1} for k in (3, 5, 7, 9)]}]


def test_entry_point_subprocess():
    proc = subprocess.run([sys.executable, "-m", "trkr.cli", "homology", "--braid", "b=1;", "-N", "1",
                           "--kmax", "5", "--format", "json", "--timing"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert _strict(proc.stdout)["N"] == 1
    assert "elapsed" in proc.stderr


def test_empty_report(capsys):
    code, out, _ = run(capsys, "homology", "--braid", "b=1;", "-N", "2", "--kmax", "-3",
                       "--format", "json", "--no-parity")
    assert code == 0
    assert _strict(out)["components"] == []
    code, out, _ = run(capsys, "homology", "--braid", "b=1;", "-N", "2", "--kmax", "-3", "--no-parity")
    assert "(zero)" in out


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["homology", "--braid", "b=2; 5", "-N", "2"],
    ["homology", "--braid", "b=2; 1", "-N", "0"],
    ["oracle"],
    ["oracle", "--word", "b=2; t3"],
    ["moves", "--braid", "b=2; -1", "--move", "destab_pos"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""


def test_usage_error_json_on_stderr(capsys):
    code, _, err = run(capsys, "sln", "--braid", "b=2; 1", "-N", "-1")
    assert code == 1
    assert _strict(err)["error"] == "usage"


def test_compare_and_moves(capsys):
    code, out, _ = run(capsys, "compare", "--braid-a", "b=1;", "--braid-b", "b=2; -1", "-N", "1")
    assert code == 0 and out.startswith("DIFFERENT")
    code, out, _ = run(capsys, "compare", "--braid-a", "b=1;", "--braid-b", "b=2; 1", "-N", "1")
    assert code == 0 and out.startswith("EQUAL")
    code, out, _ = run(capsys, "moves", "--braid", "b=2; 1", "--move", "destab_pos", "-N", "1")
    assert code == 0 and "unchanged" in out
    code, out, _ = run(capsys, "moves", "--braid", "b=1;", "--move", "stab_neg", "-N", "1")
    assert code == 0 and "homology changed" in out


def test_checks(capsys):
    for argv in (["unknot-check", "-m", "1", "-N", "1"],
                 ["stab-check", "--braid", "b=1;", "-N", "1"],
                 ["cone-check", "--braid", "b=1;", "-N", "1"],
                 ["oracle", "--word", "b=2; t1", "-N", "1", "--check"],
                 ["sln", "--braid", "b=2; 1", "-N", "2"]):
        code, out, _ = run(capsys, *argv, "--format", "json")
        assert code == 0, argv
        _strict(out)
