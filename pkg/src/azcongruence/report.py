"""Reports of check outcomes (JSON lines, CSV, table) and the value cache."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from azcongruence import sequences
from azcongruence.checks import CheckOutcome, is_conjectural
from azcongruence.padic import INF

FIELDS = (
    "check_id",
    "part",
    "params",
    "passed",
    "required_valuation",
    "achieved_valuation",
    "lhs",
    "rhs",
    "note",
)


def format_rational(x: Fraction | None) -> str | None:
    if x is None:
        return None
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str | None) -> Fraction | None:
    if text is None or text == "":
        return None
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))


def format_valuation(v):
    if v is None:
        return None
    return "inf" if v == INF else int(v)


def parse_valuation(v):
    if v is None or v == "":
        return None
    if v == "inf":
        return INF
    return int(v)


def outcome_to_dict(o: CheckOutcome) -> dict:
    return {
        "check_id": o.check_id,
        "part": o.part,
        "params": dict(o.params),
        "passed": o.passed,
        "required_valuation": format_valuation(o.required_valuation),
        "achieved_valuation": format_valuation(o.achieved_valuation),
        "lhs": format_rational(o.lhs),
        "rhs": format_rational(o.rhs),
        "note": o.note,
    }


def outcome_from_dict(d: dict) -> CheckOutcome:
    return CheckOutcome(
        check_id=d["check_id"],
        params={k: int(v) for k, v in d["params"].items()},
        passed=bool(d["passed"]),
        required_valuation=parse_valuation(d["required_valuation"]),
        achieved_valuation=parse_valuation(d["achieved_valuation"]),
        lhs=parse_rational(d["lhs"]),
        rhs=parse_rational(d["rhs"]),
        note=d["note"],
        part=d["part"],
    )


def summarize(outcomes: list[CheckOutcome]) -> dict:
    counts = {"pass": 0, "fail": 0, "error": 0}
    per_check: dict[str, dict] = {}
    conjecture_failures = []
    theorem_failures = 0
    for o in outcomes:
        status = "error" if o.error else ("pass" if o.passed else "fail")
        counts[status] += 1
        entry = per_check.setdefault(
            o.check_id, {"pass": 0, "fail": 0, "error": 0, "min_achieved_valuation": None}
        )
        entry[status] += 1
        if not o.error:
            cur = entry["min_achieved_valuation"]
            v = o.achieved_valuation
            if cur is None or v < parse_valuation(cur):
                entry["min_achieved_valuation"] = format_valuation(v)
        if status != "pass":
            if is_conjectural(o.check_id, o.params):
                label = o.check_id + (f".{o.part}" if o.part else "")
                shown = ",".join(f"{k}={v}" for k, v in o.params.items())
                conjecture_failures.append(f"{label}[{shown}]")
            else:
                theorem_failures += 1
    return {
        "total": len(outcomes),
        **counts,
        "theorem_failures": theorem_failures,
        "conjecture_failures": conjecture_failures,
        "by_check": {k: per_check[k] for k in sorted(per_check)},
    }


@dataclass
class Report:
    meta: dict
    outcomes: list[CheckOutcome]
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.summary:
            self.summary = summarize(self.outcomes)

    @classmethod
    def from_outcomes(cls, meta: dict, outcomes: list[CheckOutcome]) -> "Report":
        leaves = [leaf for o in outcomes for leaf in o.leaves()]
        return cls(meta, leaves)

    @property
    def exit_code(self) -> int:
        s = self.summary
        return 0 if s["fail"] == 0 and s["error"] == 0 else 1

    def to_jsonl(self) -> str:
        lines = [json.dumps({"meta": self.meta})]
        lines += [json.dumps(outcome_to_dict(o)) for o in self.outcomes]
        lines.append(json.dumps({"summary": self.summary}))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "Report":
        meta, summary, outcomes = {}, {}, []
        for line in text.splitlines():
            if not line.strip():
                continue
            obj = json.loads(line)
            if "meta" in obj and len(obj) == 1:
                meta = obj["meta"]
            elif "summary" in obj and len(obj) == 1:
                summary = obj["summary"]
            else:
                outcomes.append(outcome_from_dict(obj))
        return cls(meta, outcomes, summary)

    def to_csv(self) -> str:
        return outcomes_to_csv(self.outcomes)

    def to_table(self) -> str:
        rows = [("check", "params", "status", "v/req", "note")]
        for o in self.outcomes:
            label = o.check_id + (f".{o.part}" if o.part else "")
            status = "ERROR" if o.error else ("pass" if o.passed else "FAIL")
            val = f"{format_valuation(o.achieved_valuation)}/{format_valuation(o.required_valuation)}"
            rows.append((label, _params_text(o.params), status, val, o.note))
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r[:4], widths)) + "  " + r[4] for r in rows]
        lines = [ln.rstrip() for ln in lines]
        s = self.summary
        lines.append("")
        lines.append(f"total {s['total']}: {s['pass']} pass, {s['fail']} fail, {s['error']} error")
        for check_id, entry in s["by_check"].items():
            lines.append(
                f"  {check_id}: {entry['pass']} pass, {entry['fail']} fail, "
                f"min valuation {entry['min_achieved_valuation']}"
            )
        if s["conjecture_failures"]:
            lines.append("CONJECTURE VIOLATED: " + "; ".join(s["conjecture_failures"]))
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_jsonl()
        if fmt == "csv":
            return self.to_csv()
        return self.to_table()


def _params_text(params) -> str:
    return ";".join(f"{k}={v}" for k, v in params.items())


def _parse_params(text: str) -> dict:
    if not text:
        return {}
    return {k: int(v) for k, v in (item.split("=", 1) for item in text.split(";"))}


def outcomes_to_csv(outcomes: list[CheckOutcome]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for o in outcomes:
        d = outcome_to_dict(o)
        d["params"] = _params_text(o.params)
        d["passed"] = "true" if o.passed else "false"
        writer.writerow(["" if d[f] is None else d[f] for f in FIELDS])
    return buf.getvalue()


def outcomes_from_csv(text: str) -> list[CheckOutcome]:
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for row in reader:
        row = dict(row)
        row["params"] = _parse_params(row["params"])
        row["passed"] = row["passed"] == "true"
        for key in ("lhs", "rhs", "required_valuation", "achieved_valuation"):
            row[key] = row[key] or None
        out.append(outcome_from_dict(row))
    return out


# value cache

def cache_lines(entries) -> str:
    lines = []
    for (family, index, n), value in entries:
        value = Fraction(value)
        lines.append(json.dumps({
            "family": family,
            "index": index,
            "n": n,
            "num": str(value.numerator),
            "den": str(value.denominator),
        }))
    return "".join(line + "\n" for line in lines)


def read_cache(path: str | os.PathLike) -> tuple[list, str | None]:
    """Entries from a JSONL cache and a warning text if it could not be used."""
    path = Path(path)
    if not path.exists():
        return [], None
    entries = []
    try:
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            obj = json.loads(line)
            key = (str(obj["family"]), int(obj["index"]), int(obj["n"]))
            entries.append((key, Fraction(int(obj["num"]), int(obj["den"]))))
    except (OSError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        return [], f"unreadable cache {path} ({exc.__class__.__name__}); recomputed and rewritten"
    return entries, None


def write_cache(path: str | os.PathLike, entries) -> None:
    """Atomically replace the cache file (write to a temp file, then rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(cache_lines(entries))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_cache_into_memo(path) -> str | None:
    entries, warning = read_cache(path)
    sequences.CACHE.load(entries)
    return warning


def flush_memo_to_cache(path, force: bool = False) -> None:
    """Merge the in-process memo with what is on disk and rewrite the file."""
    if not (sequences.CACHE.dirty or force):
        return
    on_disk, _ = read_cache(path)
    sequences.CACHE.load(on_disk)
    write_cache(path, sequences.CACHE.items())
    sequences.CACHE.mark_clean()
