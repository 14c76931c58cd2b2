import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from rzt.cli import EXIT_BUDGET, EXIT_COUNTEREXAMPLE, EXIT_INPUT, EXIT_IO, EXIT_OK, STATS_HEADER, main
from rzt.workload import PHASE_HEADER

ROOT = Path(__file__).resolve().parent.parent
LD4 = sorted(str(p) for p in (ROOT / "problems" / "ld").glob("ld4_*.txt"))

SMALL = "size: 3\nto_move: W\nX..\nOXO\nOOO\n"


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def small_problem(tmp_path):
    f = tmp_path / "small.txt"
    f.write_text(SMALL)
    return str(f)


def test_solve_csv_schema_and_determinism(capsys):
    args = ["solve", "--in", *LD4[:4], "--max-depth", "6"]
    code, out1, _ = run(args, capsys)
    assert code == EXIT_OK
    assert out1.splitlines()[0] == ",".join(STATS_HEADER)
    _, out2, _ = run(args, capsys)
    strip = lambda text: [{k: v for k, v in r.items() if k != "lookup_time_ms"} for r in rows_of(text)]
    assert strip(out1) == strip(out2)
    assert [r["id"] for r in rows_of(out1)] == [Path(p).stem for p in LD4[:4]]


def test_solve_storage_modes_agree(capsys):
    outcomes = {}
    for table in ("radix", "linear", "none"):
        code, out, _ = run(["solve", "--in", *LD4[:3], "--max-depth", "6", "--table", table], capsys)
        assert code == EXIT_OK
        outcomes[table] = [r["outcome"] for r in rows_of(out)]
    assert outcomes["radix"] == outcomes["linear"] == outcomes["none"]
    assert all(o == "win" for o in outcomes["radix"])


def test_solve_json_and_smallest_report(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, err = run(["solve", "--in", LD4[0], "--out", "json", "--match", "smallest",
                          "--max-depth", "6", "-o", str(dest)], capsys)
    assert code == EXIT_OK and out == ""
    report = json.loads(dest.read_text())
    assert report["config"]["match"] == "smallest"
    assert set(report["rows"][0]) == set(STATS_HEADER)
    assert "smaller_zone_hits" in report
    assert "smallest zone differed" in err


def test_solve_dump_then_verify(capsys, tmp_path, small_problem):
    dump = tmp_path / "d.json"
    assert main(["solve", "--in", small_problem, "--max-depth", "4", "--dump", str(dump)]) == EXIT_OK
    data = json.loads(dump.read_text())
    assert data and {"problem", "player", "side", "zone", "content", "stamp", "depth", "or_player"} <= set(data[0])
    capsys.readouterr()
    code, out, err = run(["verify", "--in", str(dump)], capsys)
    assert code == EXIT_OK
    assert f"checked {len(data)} patterns" in err


def _truncated_pattern():
    # correct zone minus the captured stone at B2
    return {"player": "W", "side": 3, "zone": ["A1", "B1", "C1", "A2", "C2", "B3", "C3"],
            "content": {"A1": "W", "B1": "W", "C1": "W", "A2": "W", "C2": "W", "B3": "E", "C3": "E"},
            "stamp": 1, "depth": 1, "or_player": "W"}


def test_verify_reports_counterexample(capsys, tmp_path):
    dump = tmp_path / "bad.json"
    dump.write_text(json.dumps([_truncated_pattern()]))
    code, out, err = run(["verify", "--in", str(dump)], capsys)
    assert code == EXIT_COUNTEREXAMPLE
    assert "size: 3" in out and "counterexample" in err


def test_verify_budget_and_empty(capsys, tmp_path):
    phi = {"player": "W", "side": 4, "zone": ["A1"], "content": {"A1": "W"}, "depth": 1}
    dump = tmp_path / "big.json"
    dump.write_text(json.dumps([phi]))
    assert run(["verify", "--in", str(dump), "--budget", "10"], capsys)[0] in (EXIT_BUDGET, EXIT_COUNTEREXAMPLE)
    empty = tmp_path / "empty.json"
    empty.write_text("[]")
    assert run(["verify", "--in", str(empty)], capsys)[0] == EXIT_OK


def test_verify_budget_exit_code(capsys, tmp_path):
    # safe on every completion, but 3^k completions exceed a tiny budget
    phi = {"player": "W", "side": 4, "zone": ["A3", "B3", "C3", "D3", "A4", "B4", "C4", "D4"],
           "content": {"A3": "W", "B3": "W", "C3": "W", "D3": "W", "A4": "E", "B4": "W", "C4": "E", "D4": "W"},
           "depth": 0}
    dump = tmp_path / "safe.json"
    dump.write_text(json.dumps([phi]))
    assert run(["verify", "--in", str(dump), "--budget", "5"], capsys)[0] == EXIT_BUDGET


def test_bench_csv_and_determinism(capsys, tmp_path):
    args = ["bench", "--side", "5", "--entries", "400", "--queries", "600", "--hot-cells", "4", "--seed", "3"]
    stats = tmp_path / "s.csv"
    code, out1, err = run(args + ["--stats", str(stats)], capsys)
    assert code == EXIT_OK
    assert out1.splitlines()[0] == ",".join(PHASE_HEADER)
    assert "nt/ts=" in err
    assert [r["id"] for r in rows_of(stats.read_text())] == ["nt", "ts"]
    _, out2, _ = run(args, capsys)
    assert out1 == out2


@pytest.mark.parametrize("content", ["size: 3\nto_move: W\nXX\n", "not a board", "size: 2\nto_move: B\nXX\nXX\n"])
def test_malformed_problem_exits_2(capsys, tmp_path, content):
    f = tmp_path / "bad.txt"
    f.write_text(content)
    assert run(["solve", "--in", str(f)], capsys)[0] == EXIT_INPUT


@pytest.mark.parametrize("content", ["{", "{}", '[{"side": 3}]', '[{"player": "Q", "side": 3, "zone": [], "content": {}}]'])
def test_malformed_dump_exits_2(capsys, tmp_path, content):
    f = tmp_path / "bad.json"
    f.write_text(content)
    assert run(["verify", "--in", str(f)], capsys)[0] == EXIT_INPUT


def test_bad_bench_flags_exit_2(capsys):
    assert run(["bench", "--density", "0", "--entries", "1", "--queries", "1"], capsys)[0] == EXIT_INPUT


def test_missing_file_exits_1(capsys, tmp_path):
    assert run(["solve", "--in", str(tmp_path / "nope.txt")], capsys)[0] == EXIT_IO
    assert run(["verify", "--in", str(tmp_path / "nope.json")], capsys)[0] == EXIT_IO


def test_console_entry_point(small_problem):
    proc = subprocess.run([sys.executable, "-m", "rzt", "solve", "--in", small_problem, "--max-depth", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].split(",")[8] == "win"
