"""Command-line front end: classification runs, single-type verification,
toric computations, dual-graph export, and audit sweeps.

Exit codes: 0 on success (and catalog match / clean audit / all
certificates passing), 1 on a verification failure, 2 on flag errors.
Volumes are always printed as exact fractions.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .catalog import TYPE_NAMES, build_entry_ladder, entries_for_type
from .enumerator import audit, canonical_form, classify
from .multiplet import (
    certificate_index_is_a,
    certify_ladder,
    identities_check,
    index_of,
    ladder_json,
    local_lemma_checks,
    volume,
)
from .toric import (
    anticanonical_square,
    gorenstein_index,
    hj_resolve,
    family_fan,
)


class FlagError(Exception):
    pass


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("DELPEZZO_THREADS", "1")))
    except ValueError:
        return 1


def _cmd_classify(args) -> int:
    report = classify(args.a, threads=args.threads)
    sys.stdout.write(report.to_text())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.a < 4:
        return 0
    return 0 if report.catalog_match else 1


def _type_entries(args):
    if args.type not in TYPE_NAMES:
        raise FlagError(f"unknown type {args.type!r}; expected one of {', '.join(TYPE_NAMES)}")
    if args.type == "A5" and args.a != 5:
        raise FlagError("type A5 exists only at index 5")
    if args.type in ("B4", "C4") and args.a != 4:
        raise FlagError(f"type {args.type} exists only at index 4")
    return entries_for_type(args.a, args.type)


def _cmd_verify_type(args) -> int:
    entries = _type_entries(args)
    all_ok = True
    for entry in entries:
        for idx in range(len(entry.configs)):
            ladder = build_entry_ladder(entry, args.a, idx)
            report = certify_ladder(ladder)
            vol = volume(ladder)
            pair = ladder.bottom_pair()
            idx_val = index_of(pair)
            lemma_violations = local_lemma_checks(ladder)
            idents = identities_check(ladder)
            ok = (
                report.passed
                and idents
                and not lemma_violations
                and vol == entry.volume
                and idx_val == args.a
                and certificate_index_is_a(pair)
            )
            all_ok = all_ok and ok
            print(f"{entry.name} configuration {idx + 1}/{len(entry.configs)}")
            print(f"  volume {_frac_str(vol)}  index {idx_val}")
            print(f"  certificates: {'pass' if report.passed else 'FAIL ' + ','.join(report.failures)}")
            print(f"  identities: {'pass' if idents else 'FAIL'}")
            print(f"  index certificate: {'pass' if certificate_index_is_a(pair) else 'FAIL'}")
            if lemma_violations:
                for v in lemma_violations:
                    print(f"  local check FAIL: {v}")
            else:
                print("  local checks: pass")
            print(f"  canonical key: {canonical_form(pair)}")
    return 0 if all_ok else 1


_FAMILIES = ("O", "I", "II1", "II2", "P113")


def _cmd_toric(args) -> int:
    if args.family not in _FAMILIES:
        raise FlagError(f"unknown family {args.family!r}; expected one of {', '.join(_FAMILIES)}")
    if args.family == "P113" and args.a != 3:
        raise FlagError("family P113 is the index-3 model; pass --a 3")
    fan = family_fan(args.family, args.a)
    res = hj_resolve(fan)
    vol = anticanonical_square(fan)
    idx = gorenstein_index(fan)
    print(f"family {args.family} at a={args.a}")
    print(f"  rays: {', '.join(str(r) for r in fan.rays)}")
    ins = res.inserted_rays()
    if ins:
        for r in ins:
            d = res.discrepancies[r]
            print(f"  inserted ray {r}: discrepancy {_frac_str(d)}, "
                  f"relative anticanonical coefficient {_frac_str(-args.a * d)}")
    else:
        print("  already smooth, no insertions")
    print(f"  volume {_frac_str(vol)}")
    print(f"  index {idx}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(res.report_json(args.a), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def _cmd_dualgraph(args) -> int:
    entries = _type_entries(args)
    entry = entries[0] if len(entries) == 1 else entries[args.config - 1]
    ladder = build_entry_ladder(entry, args.a, 0)
    pair = ladder.bottom_pair()
    graph = pair.model.dual_graph(pair.E0.support, pair.E0.as_dict())
    if args.format == "dot":
        payload = graph.to_dot()
    else:
        payload = json.dumps(
            {
                "vertices": [
                    {"name": v.name, "self_intersection": v.self_intersection, "coeff": v.coeff}
                    for v in graph.vertices
                ],
                "edges": [list(e) for e in graph.edges],
            },
            indent=2,
            sort_keys=True,
        ) + "\n"
    if args.out == "-":
        sys.stdout.write(payload)
    else:
        with open(args.out, "w") as fh:
            fh.write(payload)
    return 0


def _cmd_audit(args) -> int:
    report = audit(args.a, args.nmax, h0=args.h0, threads=args.threads)
    sys.stdout.write(report.to_text())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if report.clean else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delpezzo",
        description="exact classification of large-volume log del Pezzo surfaces of fixed index",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="enumerate and compare against the catalog")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--json", type=str, default=None)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("verify-type", help="certify one catalog type")
    p.add_argument("--type", type=str, required=True)
    p.add_argument("--a", type=int, required=True)
    p.set_defaults(func=_cmd_verify_type)

    p = sub.add_parser("toric", help="resolve and measure a toric model")
    p.add_argument("--family", type=str, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--json", type=str, default=None)
    p.set_defaults(func=_cmd_toric)

    p = sub.add_parser("dualgraph", help="export the dual graph of a type's divisor")
    p.add_argument("--type", type=str, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--format", type=str, choices=("dot", "json"), default="dot")
    p.add_argument("--out", type=str, required=True)
    p.add_argument("--config", type=int, default=1, help="configuration number for split types")
    p.set_defaults(func=_cmd_dualgraph)

    p = sub.add_parser("audit", help="sweep the excluded cells and re-verify the kills")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--h0", type=int, default=None)
    p.add_argument("--json", type=str, default=None)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=_cmd_audit)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on flag errors already
        return int(exc.code or 0)
    emit_json = getattr(args, "json", None)
    try:
        if getattr(args, "a", 2) < 2:
            raise FlagError("the index must be at least 2")
        return args.func(args)
    except FlagError as exc:
        if emit_json:
            sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        else:
            sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
