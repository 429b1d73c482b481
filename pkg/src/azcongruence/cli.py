"""Command line front end: ``azcong seq | verify | scan``.

Exit codes: 0 everything passed, 1 some check failed (conjectural failures
included), 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

from azcongruence import __version__, checks, report
from azcongruence.sequences import Family, apery, az_a, az_b, az_b_plain

DEFAULT_CACHE = "az-cache.jsonl"


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"1..5"``, ``"2,3,7"`` or a mix such as ``"1..3,9"``; inclusive."""
    values: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            if ".." in chunk:
                lo, hi = chunk.split("..", 1)
                values.extend(range(int(lo), int(hi) + 1))
            else:
                values.append(int(chunk))
        except ValueError:
            raise UsageError(f"bad integer range {text!r}") from None
    return values


def parse_primes(text: str) -> list[int]:
    """A prime list or range; ranges keep only the primes >= 5 inside them."""
    if ".." in text:
        from azcongruence.padic import is_prime

        return [q for q in parse_range(text) if q >= 5 and is_prime(q)]
    return parse_range(text)


def sequence_value(family: Family, index: int, n: int) -> Fraction:
    if family is Family.AZ_A:
        return Fraction(az_a(index, n))
    if family is Family.APERY:
        return Fraction(apery(n))
    if family is Family.B:
        return az_b(index, n)
    return az_b_plain(index, n)


def _cache_path(args) -> str:
    if args.cache:
        return args.cache
    return os.environ.get("AZ_CACHE") or DEFAULT_CACHE


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt_value(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def cmd_seq(args) -> int:
    try:
        family = Family(args.family.upper())
    except ValueError:
        raise UsageError(f"unknown family {args.family!r}; choose from "
                         + ", ".join(f.value for f in Family)) from None
    if family is Family.APERY:
        index = 0
    else:
        try:
            index = int(args.index)
        except ValueError:
            raise UsageError(f"index must be an integer, got {args.index!r}") from None
    ns = parse_range(args.n)
    if not ns:
        raise UsageError("empty n range")
    low_n = 0 if family in (Family.AZ_A, Family.APERY) else 1
    low_index = 1 if family in (Family.B, Family.B_PLAIN) else 0
    if index < low_index or min(ns) < low_n:
        raise UsageError(f"{family.value} needs index >= {low_index} and n >= {low_n}")

    path = _cache_path(args)
    report.load_cache_into_memo(path)
    rows = [(n, sequence_value(family, index, n)) for n in ns]
    report.flush_memo_to_cache(path)

    if args.format == "json":
        text = "".join(
            json.dumps({"family": family.value, "index": index, "n": n, "value": report.format_rational(v)}) + "\n"
            for n, v in rows
        )
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "index", "n", "value"])
        for n, v in rows:
            w.writerow([family.value, index, n, report.format_rational(v)])
        text = buf.getvalue()
    else:
        width = max(len(str(n)) for n, _ in rows)
        text = "".join(f"{str(n).rjust(width)}  {_fmt_value(v)}\n" for n, v in rows)
    _emit(text, args.out)
    return 0


def parse_assignments(items: list[str]) -> dict[str, int]:
    params: dict[str, int] = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"expected name=value, got {item!r}")
        name, value = item.split("=", 1)
        try:
            if name == "y":
                y = Fraction(value)
                params["y_num"], params["y_den"] = y.numerator, y.denominator
            else:
                params[name] = int(value)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad value in {item!r}") from None
    return params


def _meta(grid) -> dict:
    return {
        "tool": "azcongruence",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "grid": grid,
        "warnings": [],
    }


def cmd_verify(args) -> int:
    check_id = args.check_id.upper()
    if check_id not in checks.REGISTRY:
        raise UsageError(f"unknown check {args.check_id!r}")
    case = checks.CheckCase(check_id, parse_assignments(args.params))
    path = _cache_path(args)
    warning = report.load_cache_into_memo(path)
    try:
        outcome = checks.evaluate(case)
    except checks.ParameterError as exc:
        raise UsageError(str(exc)) from None
    report.flush_memo_to_cache(path, force=warning is not None)
    meta = _meta({"check_id": check_id, "params": dict(case.params)})
    if warning:
        meta["warnings"].append(warning)
    rep = report.Report.from_outcomes(meta, [outcome])
    _emit(rep.render(args.format), args.out)
    return rep.exit_code


def build_cases(args) -> tuple[list[checks.CheckCase], dict]:
    explicit = args.checks or args.primes or args.n or args.param
    if not explicit:
        return checks.acceptance_cases(), {"sweep": "acceptance"}
    if not args.checks:
        raise UsageError("--checks is required when a grid is given")
    check_ids = [c.strip().upper() for c in args.checks.split(",") if c.strip()]
    ranges: dict[str, list[int]] = {}
    if args.primes:
        ranges["p"] = parse_primes(args.primes)
    if args.n:
        ranges["n"] = parse_range(args.n)
    for item in args.param or []:
        if "=" not in item:
            raise UsageError(f"expected name=range, got {item!r}")
        name, spec = item.split("=", 1)
        ranges[name] = parse_range(spec)
    if not check_ids or any(not v for v in ranges.values()):
        raise UsageError("empty grid")
    cases = []
    for check_id in check_ids:
        try:
            cases += checks.grid_cases(check_id, **ranges)
        except checks.ParameterError as exc:
            raise UsageError(str(exc)) from None
    cases = checks.dedupe(cases)
    if not cases:
        raise UsageError("the grid contains no case satisfying the check hypotheses")
    grid = {"checks": check_ids, **{k: ranges[k] for k in sorted(ranges)}}
    return cases, grid


def cmd_scan(args) -> int:
    cases, grid = build_cases(args)
    path = _cache_path(args)
    warning = report.load_cache_into_memo(path)
    outcomes = checks.run_suite(cases, jobs=args.jobs)
    report.flush_memo_to_cache(path, force=warning is not None)
    meta = _meta(grid)
    if warning:
        meta["warnings"].append(warning)
    rep = report.Report.from_outcomes(meta, outcomes)
    _emit(rep.render(args.format), args.out)
    return rep.exit_code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--cache", help=f"value cache (default $AZ_CACHE or ./{DEFAULT_CACHE})")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="azcong", description="Almkvist-Zudilin sequences and their congruences."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_seq = sub.add_parser("seq", parents=[common], help="print sequence values")
    p_seq.add_argument("family", help="AZ_A, APERY, B or B_PLAIN")
    p_seq.add_argument("index", help="i for AZ_A, j for B; ignored ('-') for APERY")
    p_seq.add_argument("n", help="range such as 1..5")
    p_seq.set_defaults(func=cmd_seq)

    p_ver = sub.add_parser("verify", parents=[common], help="run one check")
    p_ver.add_argument("check_id", help="e.g. MAIN_SUPERCONGRUENCE")
    p_ver.add_argument("params", nargs="*", help="name=value pairs, e.g. p=5 n=1")
    p_ver.set_defaults(func=cmd_verify)

    p_scan = sub.add_parser("scan", parents=[common], help="run a parameter sweep")
    p_scan.add_argument("--checks", help="comma separated check ids")
    p_scan.add_argument("--primes", help="prime list (5,7,11) or range (5..31)")
    p_scan.add_argument("--n", help="range for n")
    p_scan.add_argument("--param", action="append", metavar="NAME=RANGE",
                        help="range for any other parameter; repeatable")
    p_scan.set_defaults(func=cmd_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"azcong: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
