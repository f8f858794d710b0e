"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 input outside the mathematical
scope, 3 two computations disagreed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from math import gcd
from typing import Any

from . import dga, lagrangian, lens_arith, loops
from .exceptions import ScopeError, SpecError

EXIT_OK, EXIT_USAGE, EXIT_SCOPE, EXIT_DISAGREE = 0, 1, 2, 3

CSV_HEADER = ["p", "p_mod_12", "k_S", "k_N", "S_parity", "N_parity", "exists", "predicate", "agree"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _knot_echo(spec: lens_arith.GridOneSpec, s: int) -> dict[str, Any]:
    return {
        "p": spec.p,
        "q": spec.q,
        "input_h": s,
        "h": spec.h,
        "v": spec.v,
        "k": spec.k,
        "primitive": lens_arith.is_primitive(spec),
    }


def _csv(rows: list[dict[str, Any]], header: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(header), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _emit(report: dict[str, Any], fmt: str, text: Callable[[dict[str, Any]], str], csv_rows: Callable[[dict[str, Any]], tuple[list[dict[str, Any]], Sequence[str]]] | None) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        if csv_rows is None:
            raise UsageError(f"--format csv is not available for {report['command']}")
        return _csv(*csv_rows(report))
    return text(report)


# --- analyze -----------------------------------------------------------------


def analyze_report(p: int, q: int, s: int) -> dict[str, Any]:
    spec = lens_arith.GridOneSpec.from_pqs(p, q, s)
    full = spec.k == 1
    diagram = lagrangian.build_diagram(spec, full=full)
    report: dict[str, Any] = {
        "command": "analyze",
        "knot": _knot_echo(spec, s),
        "crossing_count": len(diagram.crossings),
        "region_count": diagram.region_count,
        "labeling": "full" if full else "unsupported",
        "diagram": lagrangian.diagram_to_dict(diagram),
        "knot_disc": None,
    }
    if full:
        disc = lagrangian.knot_disc(diagram)
        report["knot_disc"] = {"rotation": disc.rotation, "area": str(disc.area), "defect": str(disc.defect)}
    return report


def _analyze_text(r: dict[str, Any]) -> str:
    k = r["knot"]
    d = r["diagram"]
    lines = [
        f"K({k['p']},{k['q']},{k['h']})  v={k['v']}  k={k['k']}  primitive={k['primitive']}"
        + (f"  (h normalized from {k['input_h']})" if k["input_h"] != k["h"] else ""),
        f"crossings: {r['crossing_count']}  regions: {r['region_count']}  labeling: {r['labeling']}",
    ]
    if d["grading_modulus"] is not None:
        lines.append(f"grading modulus: {d['grading_modulus']}")
    for c in d["crossings"]:
        for g in c["generators"]:
            grade = "" if g["grading"] is None else f"  |{g['symbol']}|={g['grading']}"
            lines.append(f"  {g['symbol']}: box {c['box']}  l={g['length']}{grade}")
    if d["regions"] is not None:
        for reg in d["regions"]:
            corners = " ".join(f"{q}{j}" for j, q, _ in reg["corners"])
            pole = f" [{reg['pole']} pole]" if reg["pole"] else ""
            lines.append(f"  region {reg['id']}{pole}: corners {corners}  area={reg['area']}  defect={reg['defect']}")
        for cp in d["capping_paths"]:
            if cp["constant_term"]:
                lines.append(f"  constant term: {cp['generator']} via {cp['side']} capping path")
    return "\n".join(lines) + "\n"


def _analyze_csv(r: dict[str, Any]) -> tuple[list[dict[str, Any]], Sequence[str]]:
    rows = [
        {"symbol": g["symbol"], "crossing": c["index"], "box": c["box"], "length": g["length"], "grading": g["grading"]}
        for c in r["diagram"]["crossings"]
        for g in c["generators"]
    ]
    return rows, ["symbol", "crossing", "box", "length", "grading"]


# --- loops -------------------------------------------------------------------


def loops_report(p: int, q: int, s: int, oracle: bool = False, words: bool = False) -> tuple[dict[str, Any], bool]:
    spec = lens_arith.GridOneSpec.from_pqs(p, q, s)
    if spec.k != 1:
        raise ScopeError(f"loop search needs k=1, got k={spec.k}")
    lifted = loops.lift_diagram(spec)
    rows = loops.loop_counts_report(lifted)
    agree = True
    report: dict[str, Any] = {"command": "loops", "knot": _knot_echo(spec, s), "rows": rows, "family": None, "oracle": None}

    if spec.q == spec.p - 1 and spec.h == 2:
        north, south = loops.family_chords(spec)
        k_s, k_n = loops.max_switch_chords(p, "S").k, loops.max_switch_chords(p, "N").k
        row = next(r for r in rows if r["crossing"] == north)
        expect_s, expect_n = loops.count_S(k_s).count, loops.count_N(k_n).count
        fam_agree = (row["S"], row["N"]) == (expect_s, expect_n)
        agree &= fam_agree
        report["family"] = {
            "b_N": north,
            "b_S": south,
            "k_S": k_s,
            "k_N": k_n,
            "S_recursion": expect_s,
            "N_recursion": expect_n,
            "agree": fam_agree,
        }

    if oracle:
        enumerated = []
        for r in rows:
            n_loops = len(loops.enumerate_loops(lifted, "N", r["crossing"]))
            s_loops = len(loops.enumerate_loops(lifted, "S", r["crossing"]))
            enumerated.append({"crossing": r["crossing"], "N": n_loops, "S": s_loops})
        enum_agree = enumerated == rows
        block: dict[str, Any] = {"enumerated": enumerated, "enumeration_agree": enum_agree}
        agree &= enum_agree
        fam = report["family"]
        if fam is not None:
            if max(fam["k_S"], fam["k_N"]) <= loops.BRUTE_MAX_K:
                brute_s = loops.count_subseq_bruteforce(fam["k_S"], "odd")
                brute_n = loops.count_subseq_bruteforce(fam["k_N"], "even")
                brute_agree = (brute_s, brute_n) == (fam["S_recursion"], fam["N_recursion"])
                block.update({"S_bruteforce": brute_s, "N_bruteforce": brute_n, "bruteforce_agree": brute_agree})
                agree &= brute_agree
            else:
                block["bruteforce_agree"] = None
        report["oracle"] = block

    if words:
        report["loops"] = [
            loop.to_dict() for r in rows for loop in loops.loops_for_generator(lifted, r["crossing"])
        ]
    report["agree"] = agree
    return report, agree


def _loops_text(r: dict[str, Any]) -> str:
    k = r["knot"]
    lines = [f"K({k['p']},{k['q']},{k['h']})  v={k['v']}"]
    for row in r["rows"]:
        lines.append(f"  b{row['crossing']}: S:{row['S']}, N:{row['N']}")
    fam = r["family"]
    if fam is not None:
        lines.append(
            f"  b_N=b{fam['b_N']}: S:{fam['S_recursion']}=S({fam['k_S']}), N:{fam['N_recursion']}=N({fam['k_N']})"
            f"  {'agree' if fam['agree'] else 'DISAGREE'}"
        )
    orc = r["oracle"]
    if orc is not None:
        lines.append(f"  explicit enumeration: {'agree' if orc['enumeration_agree'] else 'DISAGREE'}")
        if "S_bruteforce" in orc:
            lines.append(
                f"  brute force: S:{orc['S_bruteforce']} N:{orc['N_bruteforce']}  "
                f"{'agree' if orc['bruteforce_agree'] else 'DISAGREE'}"
            )
    for loop in r.get("loops", []):
        word = " ".join(loop["word"]) or "1"
        lines.append(f"  d a{loop['fixed']} ∋ {word}  ({loop['kind']}-loop)")
    return "\n".join(lines) + "\n"


def _loops_csv(r: dict[str, Any]) -> tuple[list[dict[str, Any]], Sequence[str]]:
    return r["rows"], ["crossing", "N", "S"]


# --- augment -----------------------------------------------------------------


def augment_report(p: int, q: int, s: int, force: bool = False, oracle: bool = False) -> tuple[dict[str, Any], bool]:
    spec = lens_arith.GridOneSpec.from_pqs(p, q, s)
    fragment = dga.counting_fragment(spec, force=force)
    diagram = lagrangian.build_diagram(spec)
    gradings = {c.b_gen.symbol: c.b_gen.grading for c in diagram.crossings}
    cands = dga.augmentation_search(fragment, gradings, diagram.grading_modulus or 0)
    report: dict[str, Any] = {
        "command": "augment",
        "knot": _knot_echo(spec, s),
        "verified_scope": dga.in_verified_scope(spec),
        "b_generators": list(fragment.b_generators),
        "paired": list(fragment.pair) if fragment.pair else None,
        "candidates": [{"assignment": c.as_dict(), "graded": c.graded} for c in cands],
        "count": len(cands),
        "exists": bool(cands),
        "oracle": None,
    }
    agree = True
    if oracle:
        explicit = dga.augmentation_search(dga.assemble_fragment(spec, force=force))
        agree = [c.as_dict() for c in explicit] == [c.as_dict() for c in cands]
        report["oracle"] = {"explicit_count": len(explicit), "agree": agree}
    return report, agree


def _augment_text(r: dict[str, Any]) -> str:
    k = r["knot"]
    lines = [f"K({k['p']},{k['q']},{k['h']})  v={k['v']}  b-generators: {' '.join(r['b_generators'])}"]
    if r["paired"]:
        lines.append(f"  restricted to eps({r['paired'][0]}) = eps({r['paired'][1]})")
    for c in r["candidates"]:
        values = " ".join(f"{b}={e}" for b, e in c["assignment"].items())
        lines.append(f"  augmentation: {values}  graded={c['graded']}")
    lines.append(f"  exists={str(r['exists']).lower()}  count={r['count']}")
    if r["oracle"] is not None:
        lines.append(f"  explicit words: {'agree' if r['oracle']['agree'] else 'DISAGREE'}")
    return "\n".join(lines) + "\n"


def _augment_csv(r: dict[str, Any]) -> tuple[list[dict[str, Any]], Sequence[str]]:
    header = r["b_generators"] + ["graded"]
    rows = [dict(c["assignment"], graded=c["graded"]) for c in r["candidates"]]
    return rows, header


# --- scan --------------------------------------------------------------------


def _scan_row(p: int) -> dict[str, Any]:
    return dga.theorem2_verify(p).to_dict()


def scan_report(p_min: int, p_max: int, jobs: int = 1) -> tuple[dict[str, Any], bool]:
    if p_min > p_max:
        raise UsageError("p_min must not exceed p_max")
    ps = [p for p in range(max(p_min, 3), p_max + 1) if p % 2 == 1]
    if jobs > 1 and len(ps) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_scan_row, ps))  # map preserves input order
    else:
        rows = [_scan_row(p) for p in ps]
    agree = all(r["agree"] for r in rows)
    return {"command": "scan", "q": "p-1", "rows": rows, "agree": agree}, agree


def _scan_text(r: dict[str, Any]) -> str:
    lines = ["  p  p%12  k_S  k_N  S  N  exists  predicate  agree"]
    for row in r["rows"]:
        lines.append(
            f"{row['p']:>3}  {row['p_mod_12']:>4}  {row['k_S']:>3}  {row['k_N']:>3}  {row['S_parity']}  {row['N_parity']}"
            f"  {str(row['exists']).lower():>6}  {str(row['predicate']).lower():>9}  {str(row['agree']).lower():>5}"
        )
    lines.append("all rows agree" if r["agree"] else "DISAGREEMENT")
    return "\n".join(lines) + "\n"


def _scan_csv(r: dict[str, Any]) -> tuple[list[dict[str, Any]], Sequence[str]]:
    rows = [{key: (str(v).lower() if isinstance(v, bool) else v) for key, v in row.items()} for row in r["rows"]]
    return rows, CSV_HEADER


# --- selftest ----------------------------------------------------------------


def _selftest_checks() -> list[tuple[str, Callable[[], bool]]]:
    def recursion_vs_bruteforce() -> bool:
        return all(
            loops.count_S(k).count == loops.count_subseq_bruteforce(k, "odd")
            and loops.count_N(k).count == loops.count_subseq_bruteforce(k, "even")
            for k in range(11)
        )

    def parity_periodicity() -> bool:
        return all(
            loops.count_S(k).parity == loops.count_S(k - 3).parity
            and loops.count_N(k).parity == loops.count_N(k - 3).parity
            and (loops.count_S(k).parity == 1) == (k % 3 != 2)
            and (loops.count_N(k).parity == 1) == (k % 3 != 1)
            for k in range(3, 31)
        )

    def crossing_counts() -> bool:
        specs = [
            lens_arith.GridOneSpec.from_pqs(p, q, s)
            for p in range(3, 40)
            for q in range(2, p)
            for s in (1, 2, 3)
            if s < p and lens_arith.cover_order(p, q) == 1 and gcd(p, q) == 1
        ]
        return all(len(lagrangian.crossing_set(sp)) == sp.h + sp.v - 1 for sp in specs)

    def family_loops() -> bool:
        for p in range(5, 24, 2):
            sp = lens_arith.GridOneSpec.from_pqs(p, p - 1, 2)
            lifted = loops.lift_diagram(sp)
            north, _ = loops.family_chords(sp)
            s_k, n_k = loops.max_switch_chords(p, "S").k, loops.max_switch_chords(p, "N").k
            if len(loops.enumerate_loops(lifted, "S", north)) != loops.count_S(s_k).count:
                return False
            if len(loops.enumerate_loops(lifted, "N", north)) != loops.count_N(n_k).count:
                return False
        return True

    def vanishing() -> bool:
        return all(dga.theorem1_check(p).passed for p in range(3, 60, 2))

    def existence() -> bool:
        return all(r.agree for r in dga.scan_range(3, 99))

    return [
        ("recursion matches brute force (k <= 10)", recursion_vs_bruteforce),
        ("parity periodicity and mod-3 laws (k <= 30)", parity_periodicity),
        ("crossing count h+v-1", crossing_counts),
        ("K(p,p-1,2) loop counts match recursions (p <= 23)", family_loops),
        ("K(p,p-1,1) differential vanishes (p <= 59)", vanishing),
        ("K(p,p-1,2) augmentations iff p mod 12 in {3,9} (p <= 99)", existence),
    ]


def selftest_report() -> tuple[dict[str, Any], bool]:
    results = [{"check": name, "passed": bool(fn())} for name, fn in _selftest_checks()]
    ok = all(r["passed"] for r in results)
    return {"command": "selftest", "results": results, "passed": ok}, ok


def _selftest_text(r: dict[str, Any]) -> str:
    lines = [f"{'PASS' if x['passed'] else 'FAIL'}  {x['check']}" for x in r["results"]]
    return "\n".join(lines) + "\n"


def _selftest_csv(r: dict[str, Any]) -> tuple[list[dict[str, Any]], Sequence[str]]:
    return r["results"], ["check", "passed"]


# --- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridone", description="Chekanov-type DGA data for grid-number-one knots in lens spaces.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add_format(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--format", choices=["text", "json", "csv"], default="text")

    def add_knot(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("p", type=int)
        sp.add_argument("q", type=int)
        sp.add_argument("h", type=int, help="basepoint separation; normalized before use")

    a = sub.add_parser("analyze", help="crossings, lengths, regions, defects, gradings")
    add_knot(a)
    add_format(a)

    lp = sub.add_parser("loops", help="N/S loop counts through each fixed chord")
    add_knot(lp)
    add_format(lp)
    lp.add_argument("--oracle", action="store_true", help="cross-check by explicit enumeration and brute force")
    lp.add_argument("--words", action="store_true", help="list every loop and its boundary word")

    au = sub.add_parser("augment", help="search for augmentations")
    add_knot(au)
    add_format(au)
    au.add_argument("--force", action="store_true", help="allow knots outside K(p,p-1,1) and K(p,p-1,2)")
    au.add_argument("--oracle", action="store_true", help="repeat the search on explicit words")

    sc = sub.add_parser("scan", help="check K(p,p-1,2) over a range of odd p")
    sc.add_argument("p_min", type=int)
    sc.add_argument("p_max", type=int)
    add_format(sc)
    sc.add_argument("--jobs", type=int, default=1, help="worker processes")

    st = sub.add_parser("selftest", help="run the built-in invariant checks")
    add_format(st)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    ok = True
    try:
        if args.verb == "analyze":
            report = analyze_report(args.p, args.q, args.h)
            out = _emit(report, args.format, _analyze_text, _analyze_csv)
        elif args.verb == "loops":
            report, ok = loops_report(args.p, args.q, args.h, args.oracle, args.words)
            out = _emit(report, args.format, _loops_text, _loops_csv)
        elif args.verb == "augment":
            report, ok = augment_report(args.p, args.q, args.h, args.force, args.oracle)
            out = _emit(report, args.format, _augment_text, _augment_csv)
        elif args.verb == "scan":
            report, ok = scan_report(args.p_min, args.p_max, args.jobs)
            out = _emit(report, args.format, _scan_text, _scan_csv)
        else:
            report, ok = selftest_report()
            out = _emit(report, args.format, _selftest_text, _selftest_csv)
    except UsageError as exc:
        print(f"gridone: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpecError, ScopeError) as exc:
        print(f"gridone: error: {exc}", file=sys.stderr)
        return EXIT_SCOPE
    sys.stdout.write(out)
    return EXIT_OK if ok else EXIT_DISAGREE


if __name__ == "__main__":
    sys.exit(main())
