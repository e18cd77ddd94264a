"""Command-line entry point: ``fusiongraphs <command> ...``.

Exit codes: 0 success, 1 usage error, 2 ring validation failure,
3 a scan produced graphs outside the reference catalog of a known ring.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algsearch import MAX_RECURSION, ScanRefused, SearchOptions, scan_ring
from .fusionring import (FusionRing, RingAxiomError, RingFormatError, ring_save, ring_to_dict,
                         validate)
from .fusionring import resolve_ring as _resolve
from .izumi import RingShapeError, conjecture_check, izumi_identities, saturated_analysis
from .lattice import NECESSARY_CONDITION_BANNER, AdmissibleIndexSet, galois_orbit_report, intermediate_candidates, lattice_dot
from .pgraph import to_dot
from .qfield import QuadExt, format_quad, parse_quad

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_UNRESOLVED = 0, 1, 2, 3

# nontrivial surviving indices per known ring
REFERENCE_CATALOGS: dict[str, tuple[str, ...]] = {
    "h4": ("5/2+1/2*sqrt(13)", "7/2+1/2*sqrt(13)", "4+sqrt(13)", "11/2+3/2*sqrt(13)",
           "15/2+3/2*sqrt(13)", "19/2+5/2*sqrt(13)", "12+3*sqrt(13)"),
    "h6": ("3", "5/2+1/2*sqrt(13)", "4+sqrt(13)", "11/2+3/2*sqrt(13)", "15/2+3/2*sqrt(13)",
           "12+3*sqrt(13)", "33/2+9/2*sqrt(13)"),
    "i2_5": ("5", "7/2+1/2*sqrt(29)", "11+2*sqrt(29)", "27/2+5/2*sqrt(29)", "35/2+5/2*sqrt(29)",
             "55+10*sqrt(29)", "135/2+25/2*sqrt(29)"),
}
REFERENCE_CATALOGS["i2_3"] = REFERENCE_CATALOGS["h6"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ring(selector: str) -> FusionRing:
    try:
        return _resolve(selector)
    except (KeyError, ValueError, OSError) as exc:
        if isinstance(exc, (RingFormatError, RingAxiomError)):
            raise
        raise UsageError(f"cannot resolve ring {selector!r}: {exc}") from exc


def _emit_json(record, out: str | None) -> None:
    text = json.dumps(record, indent=2, ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# ring


def _product_table(ring: FusionRing) -> list[list[str]]:
    return [[str(ring.simple(i) * ring.simple(j)) for j in range(ring.rank)] for i in range(ring.rank)]


def cmd_ring(args) -> int:
    ring = _ring(args.ring)
    if args.action == "show":
        table = _product_table(ring)
        width = max(len(s) for row in table for s in row + [ring.labels[0]]) + 2
        print(f"ring {ring.name}  rank {ring.rank}  field Q(sqrt({ring.D}))")
        print("".join(f"{'':{width}}") + "".join(f"{lab:<{width}}" for lab in ring.labels))
        for lab, row in zip(ring.labels, table):
            print(f"{lab:<{width}}" + "".join(f"{s:<{width}}" for s in row))
        print()
        print(f"{'simple':<10}{'dual':<10}dim")
        for i, lab in enumerate(ring.labels):
            print(f"{lab:<10}{ring.labels[ring.dual[i]]:<10}{ring.dims[i].pretty()}")
        return EXIT_OK
    if args.action == "validate":
        report = validate(ring)
        for line in report.lines():
            print(line)
        return EXIT_OK if report.ok else EXIT_INVALID
    if args.action == "save":
        if args.out:
            ring_save(ring, args.out)
        else:
            _emit_json(ring_to_dict(ring), None)
        return EXIT_OK
    raise UsageError(f"unknown ring action {args.action!r}")


# ---------------------------------------------------------------------------
# scan


def _options(args) -> SearchOptions:
    if not 0 <= args.recursion_depth <= MAX_RECURSION:
        raise UsageError(f"--recursion-depth must be in [0, {MAX_RECURSION}]")
    try:
        max_index = parse_quad(args.max_index) if args.max_index else None
    except ValueError as exc:
        raise UsageError(f"bad --max-index: {exc}") from exc
    return SearchOptions(
        self_dual_filter=not args.no_self_dual,
        inner_orbit_dedup=not args.no_orbit_dedup,
        recursion_depth=args.recursion_depth,
        max_index=max_index,
        jones_filter=not args.no_jones,
        expressibility_filter=not args.no_expressibility,
        connectivity_filter=args.require_connected,
    )


def unresolved_graphs(ring_name: str, indices) -> list[QuadExt] | None:
    """Surviving indices absent from the reference catalog; None if the ring has no catalog."""
    catalog = REFERENCE_CATALOGS.get(ring_name)
    if catalog is None:
        return None
    known = {parse_quad(x) for x in catalog}
    return [x for x in indices if x not in known]


def cmd_scan(args) -> int:
    ring = _ring(args.ring)
    opts = _options(args)
    try:
        report = scan_ring(ring, opts, workers=args.workers)
    except ScanRefused as exc:
        raise UsageError(f"{exc}; use --max-index") from exc
    survivors = report.surviving_graphs()
    if args.out:
        _emit_json(report.to_dict(), args.out)
    if args.dot:
        out_dir = Path(args.dot)
        out_dir.mkdir(parents=True, exist_ok=True)
        for k, g in enumerate(survivors, 1):
            (out_dir / f"{ring.name}_{k:02d}.dot").write_text(to_dot(g), encoding="utf-8")

    print(f"ring {ring.name}: {len(report.entries)} candidates, {len(survivors)} surviving graphs")
    for k, g in enumerate(survivors, 1):
        print(f"  {k:>2}  {g.index.pretty():<22} {str(g.gamma):<24} odd={g.n_odd}")
    counts = report.reason_counts()
    if counts:
        print("eliminated: " + ", ".join(f"{r} {c}" for r, c in sorted(counts.items())))
    if report.index_capped:
        print(f"index capped at {format_quad(opts.max_index)}")
    unresolved = unresolved_graphs(ring.name, [g.index for g in survivors])
    if unresolved:
        for x in unresolved:
            print(f"UNRESOLVED index {x.pretty()}")
        return EXIT_UNRESOLVED
    return EXIT_OK


# ---------------------------------------------------------------------------
# izumi and lattice wrappers


def cmd_saturated(args) -> int:
    ring = _ring(args.ring)
    rec = saturated_analysis(ring, args.kind)
    if args.json:
        _emit_json(rec, None)
    else:
        print(f"ring {rec['ring']} ({rec['kind']}): saturated object {rec['gamma']}")
        print(f"  reduced matrix {rec['reduced_size']}x{rec['reduced_size']}, "
              f"all ones: {rec['all_ones']}, expected pattern: {rec['pattern_ok']}")
        print(f"  dim {rec['dim_pretty']}" + (f"  (n+n^2 d: {rec['dim_ok']})" if "dim_ok" in rec else ""))
        if "extra_weight_square" in rec:
            print(f"  extra odd vertex weight^2 {rec['extra_weight_square']}")
            print(f"  expressibility target {rec['expressibility_target']}: "
                  f"{'expressible' if rec['expressible'] else 'not expressible'}")
        print(f"  verdict: {rec['verdict']}")
    if args.out:
        _emit_json(rec, args.out)
    return EXIT_OK


def cmd_identities(args) -> int:
    try:
        rec = izumi_identities(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        _emit_json(rec, None)
    else:
        print(f"n={rec['n']}  d={rec['d']}  index={rec['index_pretty']}")
        for name, ok in rec["checks"].items():
            print(f"  {'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if rec["ok"] else EXIT_INVALID


def _admissible_union(selectors: list[str]) -> AdmissibleIndexSet:
    result = None
    for sel in selectors:
        ring = _ring(sel)
        try:
            s = AdmissibleIndexSet.from_report(scan_ring(ring))
        except ScanRefused as exc:
            raise UsageError(str(exc)) from exc
        result = s if result is None else result.union(s)
    return result


def cmd_lattice(args) -> int:
    try:
        delta = parse_quad(args.index)
    except ValueError as exc:
        raise UsageError(f"bad --index: {exc}") from exc
    upper = _admissible_union(args.upper)
    lower = _admissible_union(args.lower)
    try:
        pairs = intermediate_candidates(delta, upper, lower)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        _emit_json({"index": format_quad(delta), "banner": NECESSARY_CONDITION_BANNER,
                    "pairs": [p.to_dict() for p in pairs]}, None)
    else:
        print(NECESSARY_CONDITION_BANNER)
        print(f"index {delta.pretty()}  upper={upper.name}  lower={lower.name}")
        for p in pairs:
            tag = "  (trivial)" if p.trivial else ""
            print(f"  [M:P]={p.upper.pretty():<18} [P:N]={p.lower.pretty()}{tag}")
    if args.galois:
        g, h, c = args.galois
        print(f"orbit count (bookkeeping, free action assumed): {galois_orbit_report(g, h, c)}")
    if args.dot:
        Path(args.dot).write_text(lattice_dot(delta, pairs), encoding="utf-8")
    return EXIT_OK


def cmd_conjecture(args) -> int:
    ring = _ring(args.ring)
    try:
        rec = conjecture_check(ring)
    except RingShapeError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        _emit_json(rec, None)
    else:
        print(f"ring {rec['ring']} (n={rec['n']}): gamma = {rec['gamma']}")
        print(f"  dim {rec['dim_pretty']}  (1+(n-1)d: {rec['dim_ok']})")
        print(f"  surviving graphs {len(rec['surviving_graphs'])}, eliminated {len(rec['eliminated_graphs'])}")
        print(f"  status: {rec['status']}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fusiongraphs", description="Principal graph search for algebra objects in fusion rings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("ring", help="show, validate or save a fusion ring")
    r.add_argument("action", choices=("show", "validate", "save"))
    r.add_argument("--ring", required=True, help="h4, h6, i2:<n> or a ring JSON file")
    r.add_argument("--out", help="output file for save")
    r.set_defaults(func=cmd_ring)

    s = sub.add_parser("scan", help="enumerate candidates and filter their principal graphs")
    s.add_argument("--ring", required=True)
    s.add_argument("--no-self-dual", action="store_true", help="drop the self-duality filter")
    s.add_argument("--no-orbit-dedup", action="store_true", help="scan every candidate, not one per orbit")
    s.add_argument("--no-jones", action="store_true")
    s.add_argument("--no-expressibility", action="store_true")
    s.add_argument("--recursion-depth", type=int, default=1)
    s.add_argument("--require-connected", action="store_true", help="reject disconnected graphs")
    s.add_argument("--max-index", help="exact upper bound on candidate dimension")
    s.add_argument("--workers", type=int, default=None, help="worker processes (default FUSIONGRAPHS_WORKERS or 1)")
    s.add_argument("--out", help="write the JSON report here")
    s.add_argument("--dot", help="directory for one DOT file per surviving graph")
    s.set_defaults(func=cmd_scan)

    sa = sub.add_parser("saturated", help="analyse the saturated object of a ring")
    sa.add_argument("--ring", required=True)
    sa.add_argument("--kind", choices=("I1-like", "I2-like"))
    sa.add_argument("--json", action="store_true")
    sa.add_argument("--out")
    sa.set_defaults(func=cmd_saturated)

    i = sub.add_parser("identities", help="exact index identities for d = (n+sqrt(n^2+4))/2")
    i.add_argument("--n", type=int, required=True)
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=cmd_identities)

    la = sub.add_parser("lattice", help="index factorizations through admissible sets")
    la.add_argument("--index", required=True, help="exact value, e.g. 33/2+9/2*sqrt(13)")
    la.add_argument("--upper", nargs="+", default=["h4", "h6"])
    la.add_argument("--lower", nargs="+", default=["h4", "h6"])
    la.add_argument("--galois", nargs=3, type=int, metavar=("GAL", "DUAL_GAL", "CLASSES"))
    la.add_argument("--dot", help="write the candidate lattice as DOT")
    la.add_argument("--json", action="store_true")
    la.set_defaults(func=cmd_lattice)

    c = sub.add_parser("conjecture", help="feasibility of 1 + sum(nu_j + mu_j) in an I1-shaped ring")
    c.add_argument("--ring", required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_conjecture)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fusiongraphs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RingFormatError, RingAxiomError) as exc:
        print(f"fusiongraphs: invalid ring: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
