import json

import pytest

from glg.cli import build_parser, main
from conftest import needs_data


def test_parser_subcommands():
    p = build_parser()
    a = p.parse_args(["run", "--task", "CD2CO", "--model", "glg", "--runs", "3", "--seed", "7", "--glg", "max_iter=2"])
    assert a.model == "GLG" and a.runs == 3 and a.glg == ["max_iter=2"]
    with pytest.raises(SystemExit):
        p.parse_args(["run", "--task", "CD2CO", "--model", "kcca"])


def test_prepare_reports_missing(tmp_path, capsys):
    assert main(["prepare", "--data-dir", str(tmp_path)]) == 1
    assert "missing" in capsys.readouterr().out


def test_missing_data_is_a_clean_error(tmp_path, capsys):
    code = main(["run", "--task", "G2A", "--model", "A1", "--runs", "1", "--data-dir", str(tmp_path), "--out", str(tmp_path / "o")])
    assert code == 1  # recorded as a failed cell
    rep = json.loads((tmp_path / "o" / "G2A_A1.json").read_text())
    assert "glg prepare" in rep["error"]


@needs_data
def test_prepare_ok(data_dir, capsys):
    assert main(["prepare", "--data-dir", str(data_dir)]) == 0


@needs_data
def test_run_is_byte_deterministic(tmp_path, data_dir):
    args = ["run", "--task", "CD2CO", "--model", "RLG", "--runs", "2", "--seed", "7", "--data-dir", str(data_dir)]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("CD2CO_RLG.json", "summary.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@needs_data
def test_mmd_command_prints_statistics(data_dir, capsys):
    code = main(["mmd", "--task", "CD2CO", "--seed", "1", "--model", "RLG", "--permutations", "50", "--json", "--data-dir", str(data_dir)])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert [t["stage"] for t in out["tests"]] == ["homogeneous representations", "adapted domains"]
    assert all(t["verdict"] in ("Yes", "No") and "statistic" in t for t in out["tests"])
