import csv
import filecmp

import pytest

from octkcf.cli import main
from octkcf.evaluation import FRAME_FIELDS


def test_selftest(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 8


def test_track_writes_per_frame_csv(synth_root, tmp_path, capsys):
    assert main(["track", "--seq", str(synth_root / "synth_cv"), "--mode", "oct-kcf",
                 "--out", str(tmp_path)]) == 0
    with open(tmp_path / "synth_cv" / "oct-kcf.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == FRAME_FIELDS and len(rows) == 61


def test_bench_and_compare(synth_root, tmp_path, capsys):
    assert main(["bench", "--dataset", str(synth_root), "--out", str(tmp_path / "r"), "--jobs", "1"]) == 0
    capsys.readouterr()
    assert main(["compare", "--results", str(tmp_path / "r")]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["Tracker", "Precision", "Success", "rate", "Speed", "(FPS)"]
    assert [line.split()[0] for line in lines[1:]] == ["KCF", "OCT-KCF"]


def test_config_file_and_overrides(synth_root, tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("lambda=1e-4\nt_g=1.6\n")
    assert main(["track", "--seq", str(synth_root / "synth_static"), "--config", str(cfg),
                 "--set", "mode=kcf", "--out", str(tmp_path / "o")]) == 0
    cfg.write_text("lamda=1\n")
    assert main(["track", "--seq", str(synth_root / "synth_static"), "--config", str(cfg),
                 "--out", str(tmp_path / "o")]) == 1


@pytest.mark.parametrize("argv", [[], ["track"], ["track", "--seq", "x"], ["nope"],
                                  ["track", "--seq", "x", "--out", "y", "--mode", "mosse"],
                                  ["compare"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == 1
    assert capsys.readouterr().err


def test_data_errors(tmp_path, capsys):
    assert main(["track", "--seq", str(tmp_path / "missing"), "--out", str(tmp_path)]) == 2
    assert "missing" in capsys.readouterr().err
    assert main(["bench", "--dataset", str(tmp_path), "--out", str(tmp_path / "o")]) == 2
    assert main(["compare", "--results", str(tmp_path)]) == 2

def test_missing_config_is_data_error(synth_root, tmp_path, capsys):
    assert main(["track", "--seq", str(synth_root / "synth_cv"), "--out", str(tmp_path),
                 "--config", str(tmp_path / "none.cfg")]) == 2
    assert "none.cfg" in capsys.readouterr().err


def test_bench_is_deterministic(synth_root, tmp_path):
    for name in ("a", "b"):
        assert main(["bench", "--dataset", str(synth_root), "--out", str(tmp_path / name), "--jobs", "2"]) == 0
    a_files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    b_files = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
    assert a_files == b_files
    data = [f for f in a_files if f.name != "timing.json"]
    assert any(f.suffix == ".csv" for f in data)
    _, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", data, shallow=False)
    assert not mismatch and not errors
