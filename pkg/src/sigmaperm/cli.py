"""Command-line interface.

Exit codes: 0 success / all claims pass, 1 a claim failed (engine bug),
2 usage or configuration error, 3 scan produced genuine findings.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .catalog import build_group, catalog, parse_group_spec, parse_sigma_spec
from .errors import SigmapermError
from .group import FiniteGroup, is_soluble
from .harness import run_suite, summary_text, validate_claims, write_report_files
from .lattice import Subgroup, lattice_of, normal_subgroups, subgroup_generated
from .perm import parse_cycles
from .pi import PrimeSet, gpi_projectors, prime_support
from .sigma import enumerate_sigma_partitions, sigma_permutable
from . import __version__


def _emit(payload: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _sub_record(H: Subgroup) -> dict:
    gens = [H.parent.elements[g].cycle_string() for g in H.generator_indices()]
    return {"order": H.order, "generators": gens}


def _parse_subgroup(G: FiniteGroup, text: str) -> Subgroup:
    gens = [parse_cycles(part.strip(), G.degree) for part in text.split(";") if part.strip()]
    if not gens:
        return subgroup_generated(G, [0])
    return subgroup_generated(G, [G.element_index(p) for p in gens])


def _cmd_info(args) -> int:
    G = build_group(args.group)
    normals = normal_subgroups(G)
    payload = {
        "group": args.group,
        "order": G.order,
        "degree": G.degree,
        "primes": [p for p in prime_support(G.order)],
        "abelian": G.is_abelian(),
        "soluble": is_soluble(G),
        "generators": [G.elements[g].cycle_string() for g in G.generator_indices],
        "normal_subgroups": [_sub_record(N) for N in normals],
    }
    lines = [
        f"group {args.group}: order {G.order}, degree {G.degree}",
        f"primes {{{', '.join(str(p) for p in payload['primes'])}}}"
        f", abelian {payload['abelian']}, soluble {payload['soluble']}",
        "generators " + " ".join(payload["generators"]),
        f"normal subgroups ({len(normals)}):",
    ]
    lines += [f"  order {r['order']:4d}  <{', '.join(r['generators']) or '()'}>" for r in (_sub_record(N) for N in normals)]
    _emit(payload, args.json, lines)
    return 0


def _cmd_subgroups(args) -> int:
    G = build_group(args.group)
    lat = lattice_of(G)
    records = []
    for i, H in enumerate(lat.subgroups):
        rec = _sub_record(H)
        rec["index"] = i
        rec["normal"] = lat.normal_flags[i]
        rec["conjugacy_class"] = lat.class_of[i]
        records.append(rec)
    payload = {
        "group": args.group,
        "count": len(records),
        "conjugacy_classes": len(lat.conjugacy_classes),
        "subgroups": records,
    }
    lines = [f"group {args.group}: {len(records)} subgroups in {len(lat.conjugacy_classes)} conjugacy classes"]
    for rec in records:
        star = "*" if rec["normal"] else " "
        lines.append(
            f"  [{rec['index']:3d}]{star} order {rec['order']:4d}  class {rec['conjugacy_class']:3d}  "
            f"<{', '.join(rec['generators']) or '()'}>"
        )
    _emit(payload, args.json, lines)
    return 0


def _cmd_projectors(args) -> int:
    G = build_group(args.group)
    lat = lattice_of(G)
    primes = []
    for tok in args.pi.split(","):
        tok = tok.strip()
        if tok:
            primes.append(int(tok))
    pi = PrimeSet.of(primes)
    projectors = gpi_projectors(G, pi, lat)
    payload = {
        "group": args.group,
        "pi": [p for p in pi],
        "count": len(projectors),
        "projectors": [_sub_record(H) for H in projectors],
    }
    lines = [f"group {args.group}, pi {{{pi}}}: {len(projectors)} projectors"]
    lines += [
        f"  order {r['order']:4d}  <{', '.join(r['generators']) or '()'}>"
        for r in payload["projectors"]
    ]
    _emit(payload, args.json, lines)
    return 0


def _cmd_permutable(args) -> int:
    G = build_group(args.group)
    lat = lattice_of(G)
    H = _parse_subgroup(G, args.h)
    sigma = parse_sigma_spec(args.sigma).resolve(G)
    result = sigma_permutable(H, G, sigma, args.level, lat)
    verdict = result.verdict
    payload = {
        "group": args.group,
        "subgroup": _sub_record(H),
        "sigma": str(sigma),
        "level": args.level,
        "verdict": verdict,
    }
    lines = [
        f"subgroup {H.describe()} in {args.group}, partition {sigma}, level {args.level}: "
        + ("undefined" if verdict is None else str(verdict).lower())
    ]
    if result.witness is not None:
        w = result.witness
        payload["witness"] = {
            "block": str(w.block),
            "offender": None if w.offender is None else w.offender.describe(),
            "note": w.note,
        }
        lines.append(f"  block {w.block}: {w.note}")
        if w.offender is not None:
            lines.append(f"  offender {w.offender.describe()}")
    _emit(payload, args.json, lines)
    return 0


def _report_payload(result) -> dict:
    return {
        "reports": [r.to_record() for r in result.reports],
        "summary": {**result.counts, "exit_code": result.exit_code},
    }


def _finish_reports(args, result) -> int:
    payload = _report_payload(result)
    lines = []
    for r in result.reports:
        lines.append(f"{r.group_id:18s} sigma {r.sigma:12s} {r.claim_id:6s} {r.status}")
        for w in r.witnesses:
            lines.append(f"    subject {w.subject}; block {w.block}; offender {w.offender}; {w.detail}")
    lines.append("")
    lines.extend(summary_text(result.reports).splitlines())
    _emit(payload, args.json, lines)
    if args.report_dir:
        for path in write_report_files(result.reports, args.report_dir):
            print(f"wrote {path}", file=sys.stderr)
    return result.exit_code


def _cmd_verify(args) -> int:
    G = build_group(args.group)
    claims = validate_claims(args.claims.split(",")) if args.claims != "all" else None
    sigma = parse_sigma_spec(args.sigma).resolve(G) if args.sigma else None
    result = run_suite([(args.group, G)], claims=claims, sigma=sigma)
    return _finish_reports(args, result)


def _cmd_scan(args) -> int:
    claims = validate_claims(args.claims.split(",")) if args.claims != "all" else None
    entries = catalog(args.max_order)
    result = run_suite(entries, claims=claims)
    return _finish_reports(args, result)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigmaperm",
        description="permutability analysis of subgroup families in finite permutation groups",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="emit JSON instead of plain text")

    p = sub.add_parser("info", help="order, primes, generators, normal subgroups")
    p.add_argument("group", help="group spec, e.g. S4 or C2xD5")
    common(p)
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("subgroups", help="every subgroup, with normality and classes")
    p.add_argument("group", help="group spec")
    common(p)
    p.set_defaults(func=_cmd_subgroups)

    p = sub.add_parser("projectors", help="projectors for a prime set")
    p.add_argument("group", help="group spec")
    p.add_argument("--pi", required=True, help="comma-separated primes, e.g. 2,5")
    common(p)
    p.set_defaults(func=_cmd_projectors)

    p = sub.add_parser("permutable", help="evaluate one subgroup at one level")
    p.add_argument("group", help="group spec")
    p.add_argument("--h", required=True, help="subgroup generators, e.g. '(1 2);(3 4)'")
    p.add_argument("--sigma", required=True, help="partition spec, e.g. s1 or 2,3|5")
    p.add_argument("--level", default="1", choices=["1", "2", "3", "skiba"])
    common(p)
    p.set_defaults(func=_cmd_permutable)

    p = sub.add_parser("verify", help="run claims against one group")
    p.add_argument("--group", required=True)
    p.add_argument("--sigma", default=None, help="partition spec; default sweeps all partitions")
    p.add_argument("--claims", default="all", help="comma-separated claim ids, or 'all'")
    p.add_argument("--report-dir", default=None, help="write reports, summary, and figures here")
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("scan", help="run claims across the whole catalog")
    p.add_argument("--max-order", type=int, default=60)
    p.add_argument("--claims", default="all", help="comma-separated claim ids, or 'all'")
    p.add_argument("--report-dir", default=None, help="write reports, summary, and figures here")
    common(p)
    p.set_defaults(func=_cmd_scan)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SigmapermError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
