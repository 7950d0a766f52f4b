"""Command-line front end.

Subcommands: eval, canonical, pack, classify, criteria, verify.
Exit codes: 0 success, 1 verification mismatch, 2 usage error,
3 resource truncation.  All output is deterministic byte-for-byte for a
fixed command line: canonical ordering everywhere, no timestamps.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .canonical import canonical_sequence
from .classify import classify, enumerate_index_profiles, parse_constraints
from .core import (
    Basket,
    BasketSyntaxError,
    WeightedBasket,
    anti_volume,
    format_basket,
    format_rational,
    gamma,
    parse_basket,
    plurigenus_sequence,
    r_index,
    r_max,
    sigma,
    sigma_prime,
)
from .criteria import BranchSpec, PipelinePolicy, table_pipeline
from .fixtures import verify_all, verify_manifest, verify_table
from .packing import (
    ClosureLimits,
    ClosureTruncated,
    all_of,
    closure,
    coprime_only,
    gamma_at_least,
    volume_at_most,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_TRUNCATED = 3


def _parse_fraction(text: str) -> Fraction:
    try:
        if "." in text:
            whole, frac = text.split(".", 1)
            scale = 10 ** len(frac)
            sign = -1 if whole.startswith("-") else 1
            return Fraction(int(whole) * scale + sign * int(frac or 0), scale)
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reidbasket",
        description="Exact Reid-basket calculus for terminal weak Q-Fano 3-folds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="basket invariants and anti-plurigenera")
    p_eval.add_argument("--basket", required=True)
    p_eval.add_argument("--p1", type=int, required=True)
    p_eval.add_argument("--upto", type=int, default=12)

    p_canon = sub.add_parser("canonical", help="level approximations and packing counts")
    p_canon.add_argument("--basket", required=True)
    p_canon.add_argument("--levels", help="comma list, e.g. 0,5,6,7")

    p_pack = sub.add_parser("pack", help="closure of a basket under packing")
    p_pack.add_argument("--basket", required=True)
    p_pack.add_argument("--gamma-min", type=_parse_fraction, default=None)
    p_pack.add_argument("--k3-max", type=_parse_fraction, default=None)
    p_pack.add_argument("--p1", type=int, default=0,
                        help="weight used for volume columns and --k3-max")
    p_pack.add_argument("--coprime-only", action="store_true")
    p_pack.add_argument("--max-states", type=int, default=ClosureLimits().max_visited)

    p_cls = sub.add_parser("classify", help="enumerate baskets from a constraints file")
    p_cls.add_argument("--constraints", required=True)
    p_cls.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_cls.add_argument("--profiles", type=int, metavar="LCM", default=None,
                       help="enumerate fixed-Gorenstein-index profiles instead of packing search")

    p_crit = sub.add_parser("criteria", help="birationality report for one basket")
    p_crit.add_argument("--basket", required=True)
    p_crit.add_argument("--p1", type=int, required=True)
    p_crit.add_argument("--policy", choices=("auto", "single", "six"), default="auto",
                        help="n1 convention: six consecutive values (P_{-1} = 0) or a single one")
    p_crit.add_argument("--case", type=int, choices=(1, 2, 3), default=None,
                        help="criterion case for the default branch (default: 2 if P_{-1}=0 else 3)")
    p_crit.add_argument("--same-pencil-k", type=int, default=None, metavar="K",
                        help="add the branch pair for |-KK| being (or not) the same pencil as |-m0 K|")
    p_crit.add_argument("--n0", type=int, default=1,
                        help="N0 used by the same-pencil b2 branch (default 1)")
    p_crit.add_argument("--format", choices=("text", "records"), default="text")

    p_ver = sub.add_parser("verify", help="diff pipeline output against the bundled tables")
    group = p_ver.add_mutually_exclusive_group(required=True)
    group.add_argument("--table", type=int)
    group.add_argument("--all", action="store_true")
    group.add_argument("--manifest", action="store_true")
    p_ver.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_ver.add_argument("--audit", action="store_true",
                       help="downgrade mismatches to discrepancy reports (exit 0)")

    return parser


def _cmd_eval(args) -> int:
    basket = parse_basket(args.basket)
    wb = WeightedBasket(basket, args.p1)
    print(f"basket = {format_basket(basket)}")
    print(f"p1 = {args.p1}")
    print(f"sigma = {sigma(basket)}")
    print(f"sigma' = {format_rational(sigma_prime(basket))}")
    print(f"gamma = {format_rational(gamma(basket))}")
    print(f"r_X = {r_index(basket)}")
    print(f"r_max = {r_max(basket) if len(basket) else '-'}")
    print(f"-K^3 = {format_rational(anti_volume(wb))}")
    seq = plurigenus_sequence(wb, max(args.upto, 1))
    for m in range(1, max(args.upto, 1) + 1):
        print(f"P[-{m}] = {format_rational(seq[m])}")
    return EXIT_OK


def _cmd_canonical(args) -> int:
    basket = parse_basket(args.basket)
    if args.levels:
        levels = sorted({int(x) for x in args.levels.split(",")})
        seq = canonical_sequence(basket, upto=max(levels))
        wanted = {n: (approx, eps) for n, approx, eps in seq.levels}
        for n in levels:
            if n not in wanted:
                print(f"B({n}): level not defined", file=sys.stderr)
                return EXIT_USAGE
            approx, eps = wanted[n]
            print(f"B({n}) = {format_basket(approx)}")
            if n >= 5:
                print(f"epsilon_{n} = {eps}")
    else:
        seq = canonical_sequence(basket)
        for n, approx, eps in seq.levels:
            print(f"B({n}) = {format_basket(approx)}")
            if n >= 5:
                print(f"epsilon_{n} = {eps}")
        print(f"stabilizes at level {seq.stabilization_level}")
    return EXIT_OK


def _cmd_pack(args) -> int:
    basket = parse_basket(args.basket)
    prune_clauses = []
    if args.gamma_min is not None:
        prune_clauses.append(gamma_at_least(args.gamma_min))
    if args.k3_max is not None:
        prune_clauses.append(volume_at_most(args.k3_max, args.p1))
    prune = all_of(*prune_clauses) if prune_clauses else None
    emit = coprime_only if args.coprime_only else None
    result = closure(basket, prune=prune, emit=emit,
                     limits=ClosureLimits(max_visited=args.max_states))
    for b in result.baskets:
        wb = WeightedBasket(b, args.p1)
        print(f"{format_basket(b)}\t{format_rational(anti_volume(wb))}"
              f"\t{r_index(b)}\t{r_max(b) if len(b) else '-'}")
    print(f"# visited {result.visited} baskets, emitted {len(result.baskets)}")
    if result.truncated:
        print("# TRUNCATED: state budget exhausted, listing is partial", file=sys.stderr)
        return EXIT_TRUNCATED
    return EXIT_OK


def _cmd_classify(args) -> int:
    with open(args.constraints) as handle:
        constraints = parse_constraints(handle.read())
    if args.profiles is not None:
        found = enumerate_index_profiles(args.profiles, constraints)
    else:
        found = classify(constraints, jobs=max(args.jobs, 1))
    for wb in found:
        print(f"{format_basket(wb.basket)}\t{format_rational(anti_volume(wb))}"
              f"\t{r_index(wb.basket)}\t{r_max(wb.basket) if len(wb.basket) else '-'}")
    print(f"# {len(found)} basket(s)")
    return EXIT_OK


def _cmd_criteria(args) -> int:
    basket = parse_basket(args.basket)
    wb = WeightedBasket(basket, args.p1)
    p1_zero = args.p1 == 0
    window = 6 if (args.policy == "six" or (args.policy == "auto" and p1_zero)) else 1
    case = args.case if args.case is not None else (2 if p1_zero else 3)
    branches: tuple[BranchSpec, ...] = ()
    if args.same_pencil_k is not None:
        k = args.same_pencil_k
        seq = plurigenus_sequence(wb, k)
        if seq[k].denominator != 1 or seq[k] < 2:
            print(f"error: P[-{k}] = {format_rational(seq[k])} < 2, "
                  "no same-pencil branch available", file=sys.stderr)
            return EXIT_USAGE
        branches = (
            BranchSpec(
                f"|-{k}K| and the m0-system not composed with the same pencil",
                "b", case=3, m1=k,
            ),
            BranchSpec(
                f"|-{k}K| and the m0-system composed with the same pencil",
                "b2", mu0=Fraction(k, int(seq[k]) - 1), n0=args.n0,
            ),
        )
    report = table_pipeline(wb, PipelinePolicy(n1_window=window, case=case, branches=branches))
    if args.format == "records":
        for line in report.to_records():
            print(line)
    else:
        print(report.to_text())
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.manifest:
        problems = verify_manifest()
        for problem in problems:
            print(problem)
        print("manifest OK" if not problems else f"{len(problems)} problem(s)")
        return EXIT_OK if not problems else EXIT_MISMATCH
    if args.all:
        reports = verify_all(jobs=max(args.jobs, 1))
    else:
        reports = [verify_table(args.table)]
    bad = False
    for report in reports:
        for line in report.lines():
            print(line)
        if report.mismatches:
            bad = True
    if bad and args.audit:
        print("# audit mode: mismatches reported above with recomputed values")
        return EXIT_OK
    return EXIT_MISMATCH if bad else EXIT_OK


_HANDLERS = {
    "eval": _cmd_eval,
    "canonical": _cmd_canonical,
    "pack": _cmd_pack,
    "classify": _cmd_classify,
    "criteria": _cmd_criteria,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except BasketSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ClosureTruncated as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATED
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
