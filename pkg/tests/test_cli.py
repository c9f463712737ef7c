import json
import subprocess
import sys

import pytest

from amalgrade.cli import main
from amalgrade.report import (EXIT_MISMATCH, EXIT_OK, EXIT_PARSE, EXIT_RESOURCE, corpus_paths,
                              run_files, strip_timing)

GOOD = """name "line";
ring A = QQ[x];
ideal I in A = (x);
amalgam R = duplication(A, I);
family F in A = (0), (x);
check flat_integral(R, F) expect cm-over-family;
check theorem_maximal(R) expect cm-over-family;
"""


def _write(tmp_path, text, name="inst.amg"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_ok_exit(tmp_path, capsys):
    assert main(["run", _write(tmp_path, GOOD)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "flat_integral(R): cm-over-family  [ok]" in out


def test_mismatch_exit(tmp_path):
    bad = GOOD.replace("check theorem_maximal(R) expect cm-over-family",
                       "check theorem_maximal(R) expect counterexample")
    assert main(["run", _write(tmp_path, bad)]) == EXIT_MISMATCH


def test_parse_exit(tmp_path, capsys):
    assert main(["run", _write(tmp_path, "ring A = QQ[x];\nideal I in B = (x);\n")]) == EXIT_PARSE
    assert "2:" in capsys.readouterr().out
    assert main(["run", str(tmp_path / "missing.amg")]) == EXIT_PARSE


def test_resource_exit(tmp_path):
    path = next(p for p in corpus_paths() if p.stem == "plane_line")
    assert main(["run", str(path), "--budget", "20", "-q"]) == EXIT_RESOURCE


def test_exit_precedence(tmp_path):
    bad = GOOD.replace("check theorem_maximal(R) expect cm-over-family",
                       "check theorem_maximal(R) expect fails")
    files = [_write(tmp_path, bad, "a.amg"), _write(tmp_path, "ring A = QQ[;", "b.amg")]
    assert main(["run", files[0]]) == EXIT_MISMATCH
    assert main(["run", *files]) == EXIT_PARSE


def test_json_schema(tmp_path):
    out = tmp_path / "r.json"
    T = GOOD + "family U in A = (1);\ncheck cm(A, U) expect cm-over-family;\n"
    assert main(["run", _write(tmp_path, T), "--json", str(out), "-q"]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["schema"] == 1 and doc["tool"] == "amalgrade"
    assert {"seed", "field", "instances", "timing", "version"} <= set(doc)
    inst = doc["instances"][0]
    assert inst["status"] == "ok"
    assert {"spairs_processed", "max_coefficient_bits"} <= set(inst["kernel"])
    cm = [c for c in inst["checks"] if c["check"] == "cm"][0]
    assert cm["rows"][0]["values"] == {"kgr": "inf", "ht": "inf"}
    for c in inst["checks"]:
        assert {"verdict", "rows", "witness", "notes"} <= set(c)


def test_determinism_across_runs_and_jobs():
    paths = corpus_paths()[:4]
    a = run_files(paths, seed=7).to_dict()
    b = run_files(paths, seed=7, jobs=3).to_dict()
    assert json.dumps(strip_timing(a), sort_keys=True) == json.dumps(strip_timing(b), sort_keys=True)


def test_field_override(tmp_path):
    assert main(["run", _write(tmp_path, GOOD), "--field", "fp:101", "-q"]) == EXIT_OK
    assert main(["run", _write(tmp_path, GOOD), "--field", "fp:100"]) == EXIT_PARSE


def test_list(capsys):
    assert main(["list"]) == 0
    assert "plane_line.amg" in capsys.readouterr().out


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "amalgrade.cli", "run", _write(tmp_path, GOOD)],
                       capture_output=True, text=True)
    assert r.returncode == EXIT_OK
    r = subprocess.run([sys.executable, "-m", "amalgrade.cli", "run",
                        _write(tmp_path, "ring A = QQ[x]\n", "p.amg")], capture_output=True, text=True)
    assert r.returncode == EXIT_PARSE
