import json
from fractions import Fraction

import pytest

from azcongruence import checks, report, sequences
from azcongruence.checks import CheckOutcome
from azcongruence.cli import main, parse_range
from azcongruence.padic import INF


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("AZ_CACHE", str(tmp_path / "cache.jsonl"))
    sequences.CACHE.clear()
    yield
    sequences.CACHE.clear()


def sample_outcomes():
    cases = checks.acceptance_cases()[::97]
    cases.append(checks.CheckCase("IDH", {"n": 4}))
    cases.append(checks.CheckCase("GESSEL", {"p": 5, "j": 9}))
    return checks.run_suite(cases)


def strip_timestamp(text):
    lines = text.splitlines()
    meta = json.loads(lines[0])
    meta["meta"].pop("timestamp")
    return [json.dumps(meta)] + lines[1:]


def test_jsonl_round_trip_is_identity():
    rep = report.Report.from_outcomes({"tool": "t"}, sample_outcomes())
    text = rep.to_jsonl()
    again = report.Report.from_jsonl(text)
    assert again.to_jsonl() == text
    assert again.outcomes == rep.outcomes
    assert again.summary == rep.summary


def test_jsonl_fields():
    rep = report.Report.from_outcomes({}, [checks.check_harmonic_identity(3)])
    line = json.loads(rep.to_jsonl().splitlines()[1])
    assert set(line) == set(report.FIELDS)
    assert line["required_valuation"] == "inf" and line["achieved_valuation"] == "inf"
    assert line["lhs"] == "-11/3"


def test_csv_round_trip_is_identity():
    outcomes = report.Report.from_outcomes({}, sample_outcomes()).outcomes
    text = report.outcomes_to_csv(outcomes)
    assert text.splitlines()[0] == ",".join(report.FIELDS)
    parsed = report.outcomes_from_csv(text)
    assert parsed == outcomes
    assert report.outcomes_to_csv(parsed) == text


def test_csv_quotes_notes_with_commas():
    o = CheckOutcome("X", {"p": 5}, True, 1, 2, Fraction(1), Fraction(1), 'a, "b"')
    text = report.outcomes_to_csv([o])
    assert '"a, ""b"""' in text
    assert report.outcomes_from_csv(text) == [o]


def test_summary_counts_match():
    rep = report.Report.from_outcomes({}, sample_outcomes())
    s = rep.summary
    assert s["total"] == len(rep.outcomes) == s["pass"] + s["fail"] + s["error"]
    assert s["error"] == 1
    assert sum(v["pass"] + v["fail"] + v["error"] for v in s["by_check"].values()) == s["total"]


def test_conjecture_failure_is_flagged():
    bad = CheckOutcome("CONJ71", {"p": 5, "i": 1, "n": 1}, False, 3, 2, Fraction(1), Fraction(0), "", "via_a1_n")
    rep = report.Report({}, [bad])
    assert rep.exit_code == 1
    assert rep.summary["conjecture_failures"] == ["CONJ71.via_a1_n[p=5,i=1,n=1]"]
    assert rep.summary["theorem_failures"] == 0
    assert "CONJECTURE VIOLATED" in rep.to_table()


def test_cache_round_trip_bytes(tmp_path):
    for n in range(1, 15):
        sequences.az_a(0, n)
        sequences.az_b(2, n)
    path = tmp_path / "c.jsonl"
    report.write_cache(path, sequences.CACHE.items())
    first = path.read_bytes()
    entries, warning = report.read_cache(path)
    assert warning is None
    assert entries == sequences.CACHE.items()
    report.write_cache(path, entries)
    assert path.read_bytes() == first


def test_unreadable_cache_is_rebuilt(tmp_path, capsys):
    path = tmp_path / "broken.jsonl"
    path.write_text("{not json\n")
    code = main(["scan", "--checks", "MAIN_SUPERCONGRUENCE", "--primes", "5", "--n", "1..2",
                 "--format", "json", "--cache", str(path)])
    assert code == 0
    meta = json.loads(capsys.readouterr().out.splitlines()[0])["meta"]
    assert meta["warnings"] and "unreadable cache" in meta["warnings"][0]
    entries, warning = report.read_cache(path)
    assert warning is None and entries


def test_parse_range():
    assert parse_range("1..5") == [1, 2, 3, 4, 5]
    assert parse_range("2,3,7") == [2, 3, 7]
    assert parse_range("1..2,9") == [1, 2, 9]


def test_seq_commands(capsys):
    assert main(["seq", "AZ_A", "0", "1..5"]) == 0
    rows = [line.split() for line in capsys.readouterr().out.splitlines()]
    assert [int(v) for _, v in rows] == [-3, 9, -3, -279, 2997]
    assert main(["seq", "APERY", "-", "0..2", "--format", "csv"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "family,index,n,value" and [r.split(",")[3] for r in out[1:]] == ["1/1", "5/1", "73/1"]
    assert main(["seq", "B", "1", "1..2", "--format", "json"]) == 0
    values = [json.loads(x)["value"] for x in capsys.readouterr().out.splitlines()]
    assert values == ["-3/1", "18/1"]


def test_seq_populates_cache(tmp_path):
    path = tmp_path / "seq.jsonl"
    assert main(["seq", "AZ_A", "0", "1..3", "--cache", str(path)]) == 0
    entries, _ = report.read_cache(path)
    assert (("AZ_A", 0, 3), Fraction(-3)) in entries


@pytest.mark.parametrize("argv", [["seq", "XX", "0", "1..3"], ["seq", "B", "0", "1..3"], ["seq", "AZ_A", "x", "1"]])
def test_seq_usage_errors(argv):
    assert main(argv) == 2


def test_verify_exit_codes(capsys):
    assert main(["verify", "MAIN_SUPERCONGRUENCE", "p=5", "n=1"]) == 0
    assert main(["verify", "THM31_VANISH", "p=5", "i=2", "n=1"]) == 2
    assert main(["verify", "T1", "p=7"]) == 0
    assert main(["verify", "MORT", "n=3", "y=1/2"]) == 0
    assert main(["verify", "CLOSECONG", "p=5", "m=1", "n=6"]) == 1
    assert main(["verify", "UNKNOWN"]) == 2
    assert main(["verify", "MAIN_SUPERCONGRUENCE", "p=5"]) == 2
    assert main(["verify", "MAIN_SUPERCONGRUENCE", "p=five", "n=1"]) == 2


def test_scan_main_grid(capsys):
    code = main(["scan", "--checks", "MAIN_SUPERCONGRUENCE", "--primes", "5,7,11", "--n", "1..8",
                 "--format", "json"])
    rep = report.Report.from_jsonl(capsys.readouterr().out)
    assert code == 0 and len(rep.outcomes) == 24 and all(o.passed for o in rep.outcomes)


def test_scan_t_sums(capsys):
    code = main(["scan", "--checks", "T1,T2,T3", "--primes", "5..31", "--format", "csv"])
    rows = capsys.readouterr().out.splitlines()
    assert code == 0 and len(rows) == 1 + 3 * 9


@pytest.mark.parametrize("argv", [
    ["scan", "--checks", "T1", "--primes", "5..4"],
    ["scan", "--checks", "MAIN_SUPERCONGRUENCE", "--primes", "5"],
    ["scan", "--primes", "5"],
    ["scan", "--checks", "THM31_VANISH", "--primes", "5", "--n", "1", "--param", "i=2"],
])
def test_scan_usage_errors(argv):
    assert main(argv) == 2


def test_scan_out_file_and_warm_cache_identity(tmp_path):
    cache = tmp_path / "warm.jsonl"
    outs = []
    for k in range(3):
        out = tmp_path / f"r{k}.jsonl"
        argv = ["scan", "--checks", "MAIN_SUPERCONGRUENCE,CONJ71", "--primes", "5,7", "--n", "1..4",
                "--param", "i=1..2", "--format", "json", "--cache", str(cache), "--out", str(out)]
        assert main(argv) == 0
        sequences.CACHE.clear()
        outs.append(out.read_text())
    assert strip_timestamp(outs[1]) == strip_timestamp(outs[2])
    assert strip_timestamp(outs[0]) == strip_timestamp(outs[1])


def test_scan_jobs(capsys):
    argv = ["scan", "--checks", "COR55", "--primes", "5,7", "--n", "1..4", "--param", "m=0..1",
            "--param", "r=1..6", "--format", "json"]
    assert main(argv + ["--jobs", "2"]) == 0
    par = strip_timestamp(capsys.readouterr().out)
    assert main(argv) == 0
    ser = strip_timestamp(capsys.readouterr().out)
    assert par == ser


def test_valuation_format():
    assert report.format_valuation(INF) == "inf"
    assert report.parse_valuation("inf") == INF
    assert report.parse_valuation(None) is None
