import csv
import io
import json

import pytest

from gridone.cli import CSV_HEADER, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "5", "2", "3")
    assert code == 0
    assert "crossings: 3" in out
    assert "a1: box 1  l=1/5" in out


def test_analyze_k2_marks_unsupported(capsys):
    code, out, _ = run(capsys, "analyze", "8", "3", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["crossing_count"] == 2
    assert doc["knot"]["k"] == 2
    assert doc["labeling"] == "unsupported"


def test_analyze_rejects_q_one(capsys):
    code, _, err = run(capsys, "analyze", "5", "1", "2")
    assert code == 2
    assert "q=1 unsupported" in err


def test_analyze_echoes_normalization(capsys):
    code, out, _ = run(capsys, "analyze", "5", "2", "2", "--format", "json")
    knot = json.loads(out)["knot"]
    assert (knot["input_h"], knot["h"], knot["v"]) == (2, 3, 1)


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "5"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


@pytest.mark.parametrize("argv,expected", [(["7", "6", "2"], "b3: S:3, N:2"), (["7", "6", "1"], "b1: S:1, N:1")])
def test_loops_text(capsys, argv, expected):
    code, out, _ = run(capsys, "loops", *argv)
    assert code == 0
    assert expected in out


def test_loops_oracle(capsys):
    code, out, _ = run(capsys, "loops", "11", "10", "2", "--oracle", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["family"]["S_recursion"] == 8
    assert doc["oracle"]["S_bruteforce"] == 8
    assert doc["oracle"]["enumeration_agree"] and doc["agree"]


def test_loops_words(capsys):
    code, out, _ = run(capsys, "loops", "7", "6", "2", "--words", "--format", "json")
    doc = json.loads(out)
    assert sum(1 for l in doc["loops"] if l["fixed"] == 3 and l["kind"] == "S") == 3


def test_loops_rejects_k_above_one(capsys):
    code, _, _ = run(capsys, "loops", "8", "3", "5")
    assert code == 2


@pytest.mark.parametrize("argv,exists,count", [(["15", "14", "2"], True, None), (["7", "6", "1"], True, 2), (["11", "10", "2"], False, 0)])
def test_augment(capsys, argv, exists, count):
    code, out, _ = run(capsys, "augment", *argv, "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["exists"] is exists
    if count is not None:
        assert doc["count"] == count


def test_augment_scope_and_force(capsys):
    code, _, _ = run(capsys, "augment", "5", "2", "3")
    assert code == 2
    code, out, _ = run(capsys, "augment", "5", "2", "3", "--force", "--oracle", "--format", "json")
    assert code == 0
    assert json.loads(out)["oracle"]["agree"]


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "3", "13", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert out.splitlines()[0] == ",".join(CSV_HEADER)
    assert [int(r["p"]) for r in rows] == [3, 5, 7, 9, 11, 13]
    assert [int(r["p"]) for r in rows if r["exists"] == "true"] == [3, 9]
    assert all(r["agree"] == "true" for r in rows)


def test_scan_single(capsys):
    code, out, _ = run(capsys, "scan", "5", "5", "--format", "json")
    doc = json.loads(out)
    assert len(doc["rows"]) == 1 and doc["rows"][0]["exists"] is False


def test_scan_parallel_matches_serial(capsys):
    _, serial, _ = run(capsys, "scan", "3", "25", "--format", "json")
    _, parallel, _ = run(capsys, "scan", "3", "25", "--format", "json", "--jobs", "2")
    assert serial == parallel


def test_scan_bad_range(capsys):
    code, _, _ = run(capsys, "scan", "9", "3")
    assert code == 1


def test_json_deterministic_and_roundtrip(capsys):
    _, first, _ = run(capsys, "analyze", "7", "6", "2", "--format", "json")
    _, second, _ = run(capsys, "analyze", "7", "6", "2", "--format", "json")
    assert first == second
    doc = json.loads(first)
    assert json.loads(json.dumps(doc)) == doc


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert out.count("PASS") == 6 and "FAIL" not in out
