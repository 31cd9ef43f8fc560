import csv
import io
import json
import subprocess
import sys

import pytest

from alq import quadratic
from alq.cli import main
from alq.serialize import dumps_json, load_cache


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_dim_breakdown(capsys):
    code, out, _ = run(capsys, "dim", "--level", "35", "--weight", "4", "--m", "35")
    assert code == 0
    assert {r["pattern"]: int(r["dim"]) for r in csv_rows(out)} == {"++": 2, "+-": 1, "-+": 0, "--": 3}


def test_dim_plus_minus(capsys):
    code, out, _ = run(capsys, "dim", "--level", "37", "--weight", "2")
    assert code == 0
    assert csv_rows(out) == [{"N": "37", "k": "2", "total": "2", "plus": "1", "minus": "1"}]


def test_dim_single_pattern(capsys):
    code, out, _ = run(capsys, "dim", "--level", "35", "--weight", "6", "--pattern=--")
    assert code == 0 and csv_rows(out)[0]["dim"] == "1"
    code, out, _ = run(capsys, "dim", "--level", "390", "--weight", "4", "--m", "10", "--pattern", "+-")
    assert code == 0 and csv_rows(out)[0]["M"] == "10"


@pytest.mark.parametrize(
    "argv,fragment",
    [
        (("dim", "--level", "12", "--weight", "4"), "level must be squarefree"),
        (("dim", "--level", "35", "--weight", "3"), "weight"),
        (("dim", "--level", "35", "--weight", "4", "--m", "3"), "divide"),
        (("dim", "--level", "35", "--weight", "4", "--pattern", "+"), "pattern"),
        (("trace", "--level", "35", "--weight", "4", "--m", "1"), ""),
        (("scan", "--levels", "4..4", "--weights", "2..4"), ""),
        (("scan", "--levels", "2..10", "--weights", "2..4", "--m-mode", "fixed:4"), ""),
        (("scan", "--levels", "2..10", "--weights", "2..4", "--jobs", "0"), "jobs"),
        (("verify", "--max-level", "1"), "empty"),
    ],
)
def test_usage_errors_exit_2(capsys, argv, fragment):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert fragment in err


@pytest.mark.parametrize("text", ["2-10", "10..2", "a..b"])
def test_malformed_range_exit_2(capsys, text):
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--levels", text, "--weights", "2..4"])
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "N,k,M,space,expected",
    [(11, 2, 11, "full", -1), (58, 2, 58, "new", 0), (15, 4, 5, "new", 0), (37, 6, 37, "new", -1)],
)
def test_trace(capsys, N, k, M, space, expected):
    code, out, _ = run(capsys, "trace", "--level", str(N), "--weight", str(k), "--m", str(M), "--space", space)
    assert code == 0 and int(csv_rows(out)[0]["trace"]) == expected


def test_scan_orbits_levels_two_three(capsys):
    code, out, _ = run(capsys, "scan", "--levels", "2..3", "--weights", "10..30", "--report", "orbits")
    assert code == 0
    rows = csv_rows(out)
    two = [int(r["k"]) for r in rows if r["N"] == "2" and r["all_occur"] == "true"]
    three = [int(r["k"]) for r in rows if r["N"] == "3" and r["all_occur"] == "true"]
    assert two == [14, 20, 22, 26, 28, 30]
    assert three == [10, 14, 16, 18, 20, 22, 24, 26, 28, 30]


def test_scan_equidist_390(capsys):
    code, out, _ = run(capsys, "scan", "--levels", "390..390", "--weights", "4..8",
                       "--m-mode", "fixed:10", "--report", "equidist")
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 3 and all(r["defect"] == "0" for r in rows)


@pytest.mark.parametrize("report", ["dims", "bias", "equidist", "orbits"])
def test_csv_and_json_carry_same_fields(capsys, report):
    argv = ["scan", "--levels", "2..40", "--weights", "2..6", "--report", report]
    _, out_csv, _ = run(capsys, *argv)
    _, out_json, _ = run(capsys, *argv, "--format", "json")
    header = out_csv.splitlines()[0].split(",")
    objs = json.loads(out_json)
    assert all(list(o) == header for o in objs)
    assert len(objs) == len(out_csv.splitlines()) - 1


def test_json_round_trip_is_byte_identical(capsys):
    _, out, _ = run(capsys, "scan", "--levels", "2..60", "--weights", "2..8", "--format", "json")
    assert dumps_json(json.loads(out)) == out
    assert all(isinstance(o["main_term"], str) for o in json.loads(out))


def test_output_independent_of_jobs(capsys):
    argv = ["scan", "--levels", "2..120", "--weights", "2..10", "--report", "orbits"]
    _, a, _ = run(capsys, *argv, "--jobs", "1")
    _, b, _ = run(capsys, *argv, "--jobs", "4")
    _, c, _ = run(capsys, *argv, "--jobs", "1")
    assert a == b == c


def test_float_rendering(capsys):
    _, out, _ = run(capsys, "scan", "--levels", "35..35", "--weights", "4..4", "--float", "3")
    row = csv_rows(out)[0]
    assert row["main_term"] == "1.500" and row["defect"] == "0.500"
    _, out, _ = run(capsys, "scan", "--levels", "35..35", "--weights", "4..4")
    assert csv_rows(out)[0]["main_term"] == "3/2"


def test_cache_written_and_reloaded(capsys, tmp_path):
    cache = tmp_path / "h.txt"
    code, first, _ = run(capsys, "scan", "--levels", "2..50", "--weights", "4..4", "--report", "bias",
                         "--cache", str(cache))
    assert code == 0
    table = load_cache(cache)
    assert table[-148] == 2 and table[-20] == 2
    lines = cache.read_text().splitlines()
    keys = [abs(int(line.split(",")[0])) for line in lines]
    assert keys == sorted(keys)
    quadratic.clear_class_number_memo()
    _, second, _ = run(capsys, "scan", "--levels", "2..50", "--weights", "4..4", "--report", "bias",
                       "--cache", str(cache))
    assert first == second


def test_cache_from_environment(capsys, tmp_path, monkeypatch):
    cache = tmp_path / "env.txt"
    monkeypatch.setenv("ALQ_CACHE", str(cache))
    code, _, _ = run(capsys, "scan", "--levels", "37..37", "--weights", "4..4", "--report", "bias")
    assert code == 0 and load_cache(cache)[-148] == 2


@pytest.mark.parametrize("content", ["-148,2\nbogus\n", "-148,2\n-148,3\n", "-5,1\n", "148,2\n"])
def test_bad_cache_rejected(capsys, tmp_path, content):
    cache = tmp_path / "bad.txt"
    cache.write_text(content)
    code, out, err = run(capsys, "scan", "--levels", "37..37", "--weights", "4..4", "--cache", str(cache))
    assert code == 2 and out == "" and "bad.txt" in err


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--max-level", "200", "--max-weight", "12")
    assert code == 0 and out.startswith("ok")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "alq", "dim", "--level", "12", "--weight", "4"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "level must be squarefree" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "alq", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify" in proc.stdout
