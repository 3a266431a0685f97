"""Command-line entry point: ``symderiv <command> [options]``.

Exit status is 0 when every assertable check passes, 1 when any fails and 2
on a usage error.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from pathlib import Path

from .battery import TIERS, cached_bracket_image, run_battery
from .cache import Cache, default_cache_dir
from .derivations import basis_der_plain
from .free_lie import basis_l, dim_l, witt_number
from .homology import (
    AlgebraHandle,
    conjecture_probe,
    disconnected_contract,
    h1_weight,
    polygon_contract,
)
from .rep_theory import decomposition_report
from .report import Report
from .tensors import Space, invariant_subspace, necklace_count

# above this many basis elements a dimension is reported from its formula only
MAX_ENUMERATED = 5000
POLYGON_MAX_K = 12


class UsageError(Exception):
    pass


def _common_flags(suppress: bool) -> argparse.ArgumentParser:
    # registered on the main parser (with defaults) and on every subparser
    # (suppressed), so global flags work on either side of the command name
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--cache-dir", default=d(None), help="cache directory (env SYMDERIV_CACHE, default ./.symderiv-cache)")
    p.add_argument("--no-cache", action="store_true", default=d(False), help="neither read nor write the cache")
    p.add_argument("--tier", choices=TIERS, default=d("fast"), help="verification tier for verify-paper")
    p.add_argument("--json-out", default=d(None), metavar="PATH", help="write the JSON report here ('-' for stdout)")
    p.add_argument("--threads", type=int, default=d(1), metavar="N", help="worker processes for bracket images")
    return p


def _space_group(p: argparse.ArgumentParser, lie: bool = False):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--genus", "--sympl", dest="genus", type=int, help="symplectic H of genus g")
    if lie:
        g.add_argument("--lie", type=int, metavar="G", help="Lie derivations l_g")
    g.add_argument("--plain", type=int, metavar="N", help="Der(T(H_n)), H_n of dimension n")


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags(suppress=True)
    parser = argparse.ArgumentParser(prog="symderiv", description=__doc__, parents=[_common_flags(suppress=False)])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", parents=[common], help="dimension table with necklace/Witt cross-checks")
    _space_group(p)
    p.add_argument("--max-degree", type=int, default=3)

    p = sub.add_parser("abelianize", parents=[common], help="weight-m part of H1")
    _space_group(p, lie=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--allow-expensive", action="store_true", help="permit symplectic weights >= 3")

    sub.add_parser("verify-paper", parents=[common], help="run the whole verification battery")

    p = sub.add_parser("polygon", parents=[common], help="polygon contractions C_k(lambda_k)")
    p.add_argument("--k", default="2..8", help="a value or range such as 2..8")
    p.add_argument("--symmetric", action="store_true", help="symmetric-square factors instead of wedges")
    p.add_argument("--disconnected", action="store_true", help="also the two-polygon contractions (2,2),(2,3),(3,3)")

    p = sub.add_parser("conjecture", parents=[common], help="weight-2 abelianization of Der+(T(H_n))")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("decompose", parents=[common], help="Weyl-dimension sums for H^(x)4 and a_g(2)")
    p.add_argument("--genus", type=int, required=True)
    return parser


def parse_range(text: str) -> range:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not m:
        raise UsageError(f"bad range {text!r}; use K or A..B")
    a = int(m.group(1))
    b = int(m.group(2)) if m.group(2) else a
    if a > b:
        raise UsageError(f"empty range {text!r}")
    return range(a, b + 1)


def _timed(fn):
    t0 = time.perf_counter()
    v = fn()
    return v, int((time.perf_counter() - t0) * 1000)


# -- commands -------------------------------------------------------------------


def cmd_dims(args, cache: Cache) -> Report:
    if args.max_degree < 1:
        raise UsageError("--max-degree must be >= 1")
    if args.genus is not None:
        g = args.genus
        if g < 1:
            raise UsageError("--genus must be >= 1")
        report = Report("dims", {"genus": g, "max_degree": args.max_degree})
        n = 2 * g
        for k in range(1, args.max_degree + 1):
            expect = necklace_count(n, k + 2)
            if expect <= MAX_ENUMERATED:
                val, ms = _timed(lambda: invariant_subspace(Space.symplectic(g), k + 2).dim)
                report.add(f"dim a_{g}({k})", "cyclic invariants of H^(x)(k+2)", val, expect, ms)
            else:
                report.add(f"dim a_{g}({k}) (necklace formula)", "cyclic invariants of H^(x)(k+2)", expect)
        for k in range(1, args.max_degree + 1):
            expect = dim_l(g, k)
            if expect <= 400 and n ** (k + 2) <= 20000:
                val, ms = _timed(lambda: len(basis_l(g, k)))
                report.add(f"dim l_{g}({k})", "symplectic Lie derivations, Witt count", val, expect, ms)
            else:
                report.add(f"dim l_{g}({k}) (Witt formula)", "symplectic Lie derivations, Witt count", expect)
        return report
    n = args.plain
    if n < 2:
        raise UsageError("--plain must be >= 2")
    report = Report("dims", {"plain": n, "max_degree": args.max_degree})
    for k in range(1, args.max_degree + 1):
        expect = n ** (k + 2)
        if expect <= MAX_ENUMERATED:
            val, ms = _timed(lambda: len(basis_der_plain(n, k)))
            report.add(f"dim Der(T(H_{n}))({k})", "Hom(H, H^(x)(k+1))", val, expect, ms)
        else:
            report.add(f"dim Der(T(H_{n}))({k}) (formula)", "Hom(H, H^(x)(k+1))", expect)
        report.add(f"dim of degree {k + 1} in free Lie algebra on {n}", "Witt count", witt_number(n, k + 1))
    return report


def _abelianize_expectation(alg: AlgebraHandle, m: int) -> tuple[int | None, str]:
    if alg.kind == "plain" and alg.param == 2 and m >= 2:
        return (4 if m == 2 else 0), ""
    if alg.kind == "assoc" and m == 2:
        target = 2 * alg.param**2 - alg.param - 1
        if alg.param >= 4:
            return target, ""
        return None, f" (equals {target} if the isomorphism extends)"
    if alg.kind == "plain" and m == 2:
        return None, f" (conjectured {alg.param ** 2})"
    return None, ""


def cmd_abelianize(args, cache: Cache) -> Report:
    if args.genus is not None:
        alg_kind, param = "assoc", args.genus
    elif args.lie is not None:
        alg_kind, param = "lie", args.lie
    else:
        alg_kind, param = "plain", args.plain
    m = args.weight
    if m < 1:
        raise UsageError("--weight must be >= 1")
    try:
        alg = AlgebraHandle(alg_kind, param)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if alg_kind != "plain" and m >= 3 and not args.allow_expensive:
        raise UsageError(
            f"weight {m} for {alg} enumerates every bracket of degree {m} and grows combinatorially; "
            "pass --allow-expensive to run it anyway"
        )
    if alg_kind != "plain" and m >= 3:
        print(f"warning: weight {m} for {alg} is expensive", file=sys.stderr)
    report = Report("abelianize", {"algebra": alg_kind, "param": param, "weight": m})
    t0 = time.perf_counter()
    image = cached_bracket_image(alg, m, cache, args.threads) if m >= 2 else None
    res = h1_weight(alg, m, image)
    ms = int((time.perf_counter() - t0) * 1000)
    expect, note = _abelianize_expectation(alg, m)
    report.add(f"dim H1({alg})_{m}{note}", "weight-graded abelianization", res.quotient_dim, expect, ms)
    report.add("H1Result", "weight-graded abelianization", res.as_dict())
    report.cache_hits, report.cache_misses = cache.hits, cache.misses
    return report


def cmd_verify_paper(args, cache: Cache) -> Report:
    return run_battery(args.tier, cache, args.threads)


def cmd_polygon(args, cache: Cache) -> Report:
    ks = parse_range(args.k)
    if ks.start < 2 or ks.stop - 1 > POLYGON_MAX_K:
        raise UsageError(f"--k must lie in 2..{POLYGON_MAX_K}")
    report = Report("polygon", {"k": args.k, "symmetric": args.symmetric})
    for k in ks:
        val, ms = _timed(lambda: polygon_contract(k, symmetric=args.symmetric))
        if args.symmetric:
            nonzero = k % 4 == 3
        else:
            nonzero = k % 4 == 1 and k >= 5
        report.add(f"C_{k}(lambda_{k}) vanishes", "polygon contractions", val == 0, not nonzero, ms)
        report.add(f"C_{k}(lambda_{k}) value", "polygon contractions", val)
    if args.disconnected:
        for k1, k2 in ((2, 2), (2, 3), (3, 3)):
            val, ms = _timed(lambda: disconnected_contract(k1, k2, symmetric=args.symmetric))
            report.add(f"disconnected ({k1},{k2})", "polygon contractions", val, 0, ms)
    return report


def cmd_conjecture(args, cache: Cache) -> Report:
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    p, ms = _timed(lambda: conjecture_probe(args.n))
    report = Report("conjecture", {"n": args.n})
    expect = 4 if args.n == 2 else None
    report.add(
        f"dim H1(Der+(T(H_{args.n})))_2 (prediction {p.prediction})", "weight-2 abelianization",
        p.result.quotient_dim, expect, ms,
    )
    report.add("c13 rank on quotient representatives", "weight-2 abelianization", p.c13_rank_on_representatives)
    report.add("c13 surjects onto H_n^(x)2", "weight-2 abelianization", p.c13_surjective, True)
    return report


def cmd_decompose(args, cache: Cache) -> Report:
    if args.genus < 4:
        raise UsageError("decompose needs --genus >= 4")
    d, ms = _timed(lambda: decomposition_report(args.genus))
    report = Report("decompose", {"genus": args.genus})
    report.add("Weyl dimensions", "irreducible summands", d.weyl_dims)
    report.add("sum over H^(x)4", "irreducible summands", d.tensor4_sum, d.tensor4_expected, ms)
    report.add(f"sum over a_{args.genus}(2)", "irreducible summands", d.a2_sum, d.a2_expected)
    report.add("[1^4] absent", "irreducible summands", d.one_four_absent, True)
    return report


COMMANDS = {
    "dims": cmd_dims,
    "abelianize": cmd_abelianize,
    "verify-paper": cmd_verify_paper,
    "polygon": cmd_polygon,
    "conjecture": cmd_conjecture,
    "decompose": cmd_decompose,
}


def format_report(report: Report) -> str:
    lines = [f"symderiv {report.command} {report.params}"]
    for c in report.checks:
        value = c.computed
        if isinstance(value, dict) and len(str(value)) > 100:
            value = "{...}"
        lines.append(f"  [{c.status:8}] {c.name}: {value}  ({c.ms} ms)")
    for c in report.failures:
        lines.append(f"FAIL {c.name}\n  computed: {c.computed}\n  expected: {c.expected}")
    n = len(report.checks)
    lines.append(f"{n - len(report.failures)}/{n} checks without failure; cache hits={report.cache_hits} misses={report.cache_misses}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    directory = Path(args.cache_dir) if args.cache_dir else default_cache_dir()
    cache = Cache(directory, enabled=not args.no_cache)
    try:
        report = COMMANDS[args.command](args, cache)
    except UsageError as e:
        parser.error(str(e))
    if args.json_out == "-":
        print(report.to_json())
    else:
        print(format_report(report))
        if args.json_out:
            Path(args.json_out).write_text(report.to_json() + "\n")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
