"""Command line: ``classpower analyze | chartable | suite``.

Exit codes: 0 clean, 2 finding (criterion/oracle disagreement, violated
conclusion, failed table validation, failed catalogue fact), 1 operational
error (bad arguments, unreadable input, construction failure).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .catalogue import CatalogueEntry, build_catalogue, check_entry, entry_from_dict, get_entry
from .chartable import (
    DEFAULT_SEED,
    COMPUTED_TOLERANCE,
    compute_character_table,
    dumps_table,
    import_table,
    tables_match,
)
from .classalg import structure_constants
from .criteria import (
    CriterionReport,
    corollaryC3_verify,
    idempotent_class_violations,
    lemma_l1_violations,
    lemma_le1_violations,
    mass_conservation_violations,
    nonreal_inverse_pair_violations,
    remark_commutator_set_violations,
)
from .estimator import ClassPowerScanner
from .exceptions import CatalogueError, ClassPowerError, ValidationFailed
from .group import FiniteGroup, conjugacy_classes
from .numbers import prime_divisors
from .presentation import load_group
from .report import census, group_block, to_csv, to_json, to_text
from .validation import check_max_n, check_tolerance

EXIT_OK, EXIT_ERROR, EXIT_FINDING = 0, 1, 2
ONLY_CHOICES = ("hits", "findings", "conjectures")

log = logging.getLogger("classpower")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _arg_max_n(text: str) -> int:
    try:
        return check_max_n(int(text))
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _arg_tolerance(text: str) -> float:
    try:
        return check_tolerance(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-n", type=_arg_max_n, default=None, help="largest exponent n, in [2, 16]")
    common.add_argument("--tolerance", type=_arg_tolerance, default=None, help="character-table tolerance, in (0, 1e-3]")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for the character-table engine")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="classpower", description="Powers of conjugacy classes: oracle vs character criteria.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="scan one group or character table")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--group", help="catalogue:NAME or a group-input JSON file")
    src.add_argument("--table", type=Path, help="character-table JSON file (no oracle)")
    p.add_argument("--only", choices=ONLY_CHOICES, default=None)

    p = sub.add_parser("chartable", parents=[common], help="compute and validate a character table")
    p.add_argument("--group", required=True, help="catalogue:NAME or a group-input JSON file")
    p.add_argument("--verify-against", type=Path, default=None, help="table JSON to compare with")

    p = sub.add_parser("suite", parents=[common], help="run the whole catalogue")
    p.add_argument("--group", action="append", default=[], help="extra group-input JSON entry (repeatable)")
    p.add_argument("--only", choices=ONLY_CHOICES, default=None)
    return parser


def resolve_group(source: str) -> tuple[str, FiniteGroup]:
    if source.startswith("catalogue:"):
        name = source.split(":", 1)[1]
        try:
            entry = get_entry(name)
        except KeyError as exc:
            raise ClassPowerError(str(exc.args[0])) from exc
        if entry.is_table_only:
            raise ClassPowerError(f"catalogue entry {name} is a character table; use --table")
        return name, entry.group
    G, raw = load_group(source)
    return G.name or Path(source).stem, G


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _filter(reports: list[CriterionReport], only: str | None) -> list[CriterionReport]:
    if only == "hits":
        return [r for r in reports if r.is_hit]
    if only == "findings":
        return [r for r in reports if r.is_finding]
    return reports


def _render(blocks: list[dict], reports_by_group: dict[str, list[CriterionReport]], fmt: str) -> str:
    if fmt == "csv":
        return to_csv(r for b in blocks for r in reports_by_group.get(b["group"], []))
    if fmt == "text":
        return to_text(blocks, reports_by_group)
    return to_json(blocks)


def _scan(source, args) -> ClassPowerScanner:
    return ClassPowerScanner(max_n=args.max_n, tolerance=args.tolerance, seed=args.seed).fit(source)


def _block(name, order, scanner, only, extra=None):
    reports = _filter(scanner.reports_, only if only != "conjectures" else None)
    block = group_block(name, order, reports, extra)
    if only == "conjectures":
        block.pop("reports")
        block["census"] = census(scanner.reports_)
    return block, reports


def cmd_analyze(args) -> int:
    if args.table is not None:
        table = import_table(args.table)
        name, order, source = table.name or args.table.stem, table.group_order, table
    else:
        name, G = resolve_group(args.group)
        order, source = G.order, G
    scanner = _scan(source, args)
    findings = scanner.findings_
    block, reports = _block(name, order, scanner, args.only, {"max_n": scanner.max_n_})
    _write(_render([block], {name: reports}, args.format), args.out)
    s = block["summary"]
    print(
        f"{name}: {s['pairs']} pairs, {sum(s['hits'].values())} hits, "
        f"{s['disagreements']} disagreements, {s['violations']} violations",
        file=sys.stderr,
    )
    return EXIT_FINDING if findings else EXIT_OK


def cmd_chartable(args) -> int:
    name, G = resolve_group(args.group)
    dec = conjugacy_classes(G)
    table = compute_character_table(
        G, dec, structure_constants(dec), seed=args.seed, tolerance=args.tolerance or COMPUTED_TOLERANCE
    )
    _write(dumps_table(table), args.out)
    if args.verify_against is not None:
        other = import_table(args.verify_against)
        ok, detail = tables_match(table, other)
        print(f"verify against {args.verify_against}: {detail}", file=sys.stderr)
        if not ok:
            return EXIT_FINDING
    return EXIT_OK


def property_block(G: FiniteGroup, max_n: int) -> dict:
    dec = conjugacy_classes(G)
    props = {
        "mass_conservation": len(mass_conservation_violations(dec)),
        "lemma_le1": len(lemma_le1_violations(dec)),
        "idempotent_class": len(idempotent_class_violations(dec)),
        "remark_commutator_set": len(remark_commutator_set_violations(dec, max_n)),
        "lemma_l1": len(lemma_l1_violations(dec)),
        "nonreal_inverse_pair": len(nonreal_inverse_pair_violations(dec, max_n)),
    }
    c3 = []
    primes = sorted(prime_divisors(G.order)) if G.order > 1 else []
    for pi in [[p] for p in primes] + ([primes] if len(primes) > 1 else []):
        res = corollaryC3_verify(G, dec, pi, max_n)
        c3.append({
            "pi": list(res.pi),
            "hypothesis_met": res.hypothesis_met,
            "conclusions": [c.to_dict() for c in res.conclusions],
        })
    return {"property_violations": props, "corollary_c3": c3}


def _property_findings(extra: dict) -> bool:
    if any(extra["property_violations"].values()):
        return True
    return any(not c["holds"] for block in extra["corollary_c3"] for c in block["conclusions"])


def cmd_suite(args) -> int:
    entries: list[CatalogueEntry] = build_catalogue()
    for path in args.group:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ClassPowerError(f"cannot read suite entry {path}: {exc}") from exc
        entries.append(entry_from_dict(data))

    blocks, reports_by_group, finding = [], {}, False
    for entry in entries:
        try:
            check_entry(entry)
        except CatalogueError as exc:
            print(f"suite: entry {entry.name} failed its expected facts: {exc}", file=sys.stderr)
            blocks.append({"group": entry.name, "order": None, "error": str(exc)})
            finding = True
            continue
        source = entry.table if entry.is_table_only else entry.group
        log.info("scanning %s", entry.name)
        scanner = _scan(source, args)
        extra = {"max_n": scanner.max_n_}
        if not entry.is_table_only:
            extra.update(property_block(entry.group, scanner.max_n_))
            finding |= _property_findings(extra)
        order = entry.group.order if entry.group is not None else entry.table.group_order
        block, reports = _block(entry.name, order, scanner, args.only, extra)
        blocks.append(block)
        reports_by_group[entry.name] = reports
        finding |= bool(scanner.findings_)
    _write(_render(blocks, reports_by_group, args.format), args.out)
    clean = sum("error" not in b and not b["summary"]["disagreements"] and not b["summary"]["violations"] for b in blocks)
    print(f"suite: {len(blocks)} entries, {clean} clean", file=sys.stderr)
    return EXIT_FINDING if finding else EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "chartable": cmd_chartable, "suite": cmd_suite}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ValidationFailed as exc:
        print(f"classpower: table validation failed: {exc}", file=sys.stderr)
        return EXIT_FINDING
    except (ClassPowerError, OSError, ValueError) as exc:
        print(f"classpower: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
