import os
from pathlib import Path

import pytest

from combdesign.cli import main, parse_budget
from helpers import FIXTURES


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_budget():
    assert parse_budget("5s") == 5.0
    assert parse_budget("2m") == 120.0
    assert parse_budget("1h") == 3600.0
    assert parse_budget("7") == 7.0


def test_verify_golden_exit_zero(capsys):
    code, out, _ = run(capsys, "verify", "symmw", "22", "16",
                       "--in", str(FIXTURES / "symmw_22_16.txt"))
    assert code == 0
    assert "valid" in out


def test_verify_transposed_fixture(capsys):
    code, _, _ = run(capsys, "verify", "brd", "15", "42", "14", "5", "4",
                     "--in", str(FIXTURES / "brd_15_42_14_5_4_transpose.txt"),
                     "--transpose")
    assert code == 0


def test_verify_invalid_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1 2 3\n")
    code, out, _ = run(capsys, "verify", "costas", "4", "--in", str(bad))
    assert code == 1
    assert out.strip()  # violation lines on stdout


def test_usage_errors_exit_two(tmp_path, capsys):
    code, _, err = run(capsys, "verify", "nosuch", "1", "--in", "x")
    assert code == 2
    sol = tmp_path / "s.txt"
    sol.write_text("0 1 2 3\n")
    code, _, _ = run(capsys, "verify", "bibd", "7", "7", "--in", str(sol))
    assert code == 2  # wrong arity
    code, _, _ = run(capsys, "badverb")
    assert code == 2


def test_solve_writes_header_with_seed(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "solve", "bibd", "7", "7", "3", "3", "1",
                       "--strategy", "tabu", "--budget", "10s", "--seed", "4",
                       "--out", "sol.txt")
    assert code == 0
    text = Path("sol.txt").read_text()
    assert text.splitlines()[0] == "# bibd 7 7 3 3 1 seed=4"
    code, _, _ = run(capsys, "verify", "bibd", "7", "7", "3", "3", "1",
                     "--in", "sol.txt")
    assert code == 0


def test_solve_timeout_exit_three(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, err = run(capsys, "solve", "costas", "18",
                       "--strategy", "dfs", "--budget", "0.2s")
    assert code == 3
    assert "timeout" in err


def test_solve_hyper_override(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, _ = run(capsys, "solve", "bibd", "7", "7", "3", "3", "1",
                     "--strategy", "tabu", "--budget", "10s",
                     "--hyper", "tenure=9", "--out", "s.txt")
    assert code == 0
    code, _, err = run(capsys, "solve", "bibd", "7", "7", "3", "3", "1",
                       "--strategy", "tabu", "--hyper", "bogus=1")
    assert code == 2


def test_catalog_types_and_list(capsys):
    code, out, _ = run(capsys, "catalog", "types")
    assert code == 0
    assert len(out.split()) == 22
    code, out, _ = run(capsys, "catalog", "list", "symmw")
    assert code == 0
    assert "symmw 22 16  [solved-by-paper]" in out
    code, _, _ = run(capsys, "catalog", "list", "nosuch")
    assert code == 2


def test_oracle_file_and_enumerate(capsys):
    code, out, _ = run(capsys, "oracle", "cs", "9", "1", "71",
                       "--in", str(FIXTURES / "cs_9_1_71.txt"))
    assert code == 0 and "valid" in out
    code, out, _ = run(capsys, "oracle", "costas", "5", "--enumerate")
    assert code == 0
    assert out.strip() == "40"
    # over the brute-force size caps -> usage error
    code, _, err = run(capsys, "oracle", "cs", "20", "1", "207000",
                       "--in", str(FIXTURES / "cs_9_1_71.txt"))
    assert code == 2


def test_tune_small_ladder(capsys):
    code, out, _ = run(capsys, "tune", "bibd", "7", "7", "3", "3", "1",
                       "--strategy", "tabu", "--sizes", "4,2",
                       "--limits", "0.3,0.6")
    assert code == 0
    assert "best:" in out and "score:" in out


def test_pipeline_from_config(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    transcript = FIXTURES / "transcripts" / "bibd_pipeline.txt"
    (tmp_path / "cfg.txt").write_text(
        "problem = bibd\n"
        "dev_instances = bibd 7 7 3 3 1\n"
        "open_instances = bibd 7 7 3 3 1\n"
        f"transcript = {transcript}\n"
        "reps = 1\nn_per_rep = 2\nrounds = 1\nfanout = 1\n"
        "ladder_sizes = 4, 2\nladder_limits = 0.5, 1.0\n"
        "final_dev_seconds = 5\nopen_seconds = 5\n"
    )
    code, out, _ = run(capsys, "pipeline", "--config", "cfg.txt")
    assert code == 0
    assert "generate:" in out and "solved bibd 7 7 3 3 1" in out
