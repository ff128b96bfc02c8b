import json
import math
import subprocess
import sys

import pytest

from gplab import __version__
from gplab.cli import main
from gplab.tabular import read_table


def run(argv):
    try:
        return main([str(a) for a in argv])
    except SystemExit as exc:  # argparse usage errors
        return exc.code


@pytest.fixture(scope="module")
def kummer13(tmp_path_factory):
    out = tmp_path_factory.mktemp("k") / "k13.csv"
    assert run(["kummer", "--d", 13, "--out", out]) == 0
    return out


def test_kummer_output(kummer13):
    t = read_table(str(kummer13))
    assert t.subcommand == "kummer" and t.version == __version__
    assert [round(s, 12) for s in t.column("sigma")] == [3, 7, 11, 15]
    assert max(abs(e) for e in t.column("rel_error")) <= 5e-3


def test_rerun_byte_identical(kummer13, tmp_path):
    again = tmp_path / "again.csv"
    assert run(["kummer", "--d", 13, "--out", again]) == 0
    assert again.read_bytes() == kummer13.read_bytes()


def test_json_mirrors_csv(kummer13, tmp_path):
    out = tmp_path / "k13.json"
    assert run(["kummer", "--d", 13, "--format", "json", "--out", out]) == 0
    a, b = read_table(str(kummer13)), read_table(str(out))
    assert a.columns == b.columns
    for ra, rb in zip(a.rows, b.rows, strict=True):
        for x, y in zip(ra, rb, strict=True):
            assert type(x) is type(y)
            assert x == y or (isinstance(x, float) and math.isnan(x)
                              and math.isnan(y))
    assert a.config_sha256 == b.config_sha256


def test_stdout_when_no_out(capsys):
    assert run(["constants", "--d", 7]) == 0
    text = capsys.readouterr().out
    assert text.startswith(f"# gplab-version: {__version__}\n")
    assert "sobolev" in text.lower()


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d": 13, "grid_n": 1500}))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["kummer", "--config", cfg, "--out", a]) == 0
    assert read_table(str(a)).config["grid_n"] == 1500
    assert run(["kummer", "--config", cfg, "--grid-n", 1800, "--out", b]) == 0
    tb = read_table(str(b))
    assert tb.config["grid_n"] == 1800 and tb.config["d"] == 13


def test_morse_d16(tmp_path):
    out = tmp_path / "m.csv"
    assert run(["morse", "--d", 16, "--out", out]) == 0
    rec = read_table(str(out)).records()
    assert rec[0]["morse_index"] == 1 and rec[0]["verdict"] == "nondegenerate"


@pytest.mark.parametrize("argv", [
    ["kummer", "--d", 4],
    ["green", "--d", 7],
    ["ground", "--d", 5],
    ["sweep-omega", "--d", 7],
    ["kummer", "--d", 13, "--format", "xml"],
    ["kummer", "--d", 13, "--grid-n", 10],
    ["sweep-b", "--d", 8, "--b-list", "10,5"],
    ["frobnicate"],
])
def test_config_errors_exit_2(argv):
    assert run(argv) == 2


@pytest.mark.parametrize("content", ['{"d": 13, "colour": 1}', "{not json",
                                     '{"d": "x"}'])
def test_bad_config_file_exit_2(tmp_path, content):
    cfg = tmp_path / "c.json"
    cfg.write_text(content)
    assert run(["kummer", "--config", cfg]) == 2


def test_missing_config_file_exit_2(tmp_path):
    assert run(["kummer", "--config", tmp_path / "none.json"]) == 2


def test_nonexistence_exit_3(tmp_path):
    out = tmp_path / "g.csv"
    assert run(["ground", "--d", 5, "--omega", 5.5, "--out", out]) == 3
    rec = read_table(str(out)).records()
    assert rec[0]["status"] == "no_solution"


def test_report_partial_inputs(kummer13, tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert run(["report", "--input", kummer13.parent, "--out", out]) == 0
    rec = read_table(str(out)).records()
    assert len(rec) == 11
    assert all(r["status"] in ("pass", "fail", "skipped") for r in rec)
    assert rec[0]["status"] == "skipped"
    assert "kummer:d=16" in rec[0]["detail"]


def test_report_corrupted_exit_2(kummer13, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text(kummer13.read_text()[:-40])
    assert run(["report", "--input", bad]) == 2


def test_report_without_inputs_exit_2(tmp_path):
    assert run(["report", "--input", tmp_path]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gplab", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and __version__ in res.stdout


def test_nan_cells_survive(tmp_path):
    out = tmp_path / "k.csv"
    assert run(["kummer", "--d", 8, "--out", out]) == 0
    rec = read_table(str(out)).records()
    assert rec[0]["n"] == -1 and math.isnan(rec[0]["sigma"])
