#!/usr/bin/env python3
"""
belyicert CLI: certify Belyi maps and their monodromy triples.

Usage:
    python -m belyicert verify fixtures/ --json out.json
    python -m belyicert verify fixtures/aut_hs_100a.ini --budget-class-size 3e7 --budget-seconds 3600
    python -m belyicert scan fixtures/pgl2_11_55a.ini fixtures/pgl2_11_55b.ini

Exit codes:
    0 - every fixture passed (verify) / every scan completed (scan)
    1 - at least one fixture failed
    2 - usage, I/O or parse error
    3 - nothing failed, but a budget left a fixture or scan incomplete
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List

from .config import REPORT_SCHEMA_VERSION
from .errors import ParseError
from .fixtures import Fixture, discover, load_fixture
from .report import Verdict, aggregate_by_group
from .toolkit import Certifier, create_certifier, run_scan, run_verify

logger = logging.getLogger("belyicert")

__all__ = ["main", "run_verify", "run_scan"]

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _setup_logging(verbose: int, quiet: bool) -> None:
    level = logging.WARNING if quiet else (logging.DEBUG if verbose else logging.INFO)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[belyicert] %(levelname)s %(message)s"))
    root = logging.getLogger("belyicert")
    root.handlers[:] = [handler]
    root.setLevel(level)


def _certifier(args) -> Certifier:
    return create_certifier(
        config_path=args.config,
        class_size=args.budget_class_size,
        class_seconds=args.budget_seconds,
        table_order=args.budget_table_order,
        max_rss_mb=args.max_rss_mb,
        generation_checks=args.budget_generation_checks,
        seed=args.seed,
    )


def _load_all(paths: List[str]) -> List[Fixture]:
    files = discover(paths)
    if not files:
        raise FileNotFoundError("no fixture files given")
    return [load_fixture(p) for p in files]


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    logger.info("report written to %s", path)


def cmd_verify(args) -> int:
    """Verify fixtures; one report per fixture."""
    certifier = _certifier(args)
    fixtures = _load_all(args.fixtures)
    if args.jobs > 1 and len(fixtures) > 1:
        jobs = [(f, certifier.budget_for(f), certifier.presift) for f in fixtures]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_verify_job, jobs))
    else:
        reports = [certifier.verify(f) for f in fixtures]

    for r in reports:
        print(r.summary())
        print()
    if args.json:
        _write_json(args.json, {
            "schema_version": REPORT_SCHEMA_VERSION,
            "kind": "verify-batch",
            "reports": [r.to_dict() for r in reports],
        })

    verdicts = [r.verdict for r in reports]
    if Verdict.FAIL in verdicts:
        return EXIT_FAIL
    if Verdict.INCOMPLETE in verdicts:
        return EXIT_BUDGET
    return EXIT_PASS


def _verify_job(job):
    fixture, budget, presift = job
    return run_verify(fixture, budget, presift)


def cmd_scan(args) -> int:
    """Scan each fixture's group for nice triples and total them per group."""
    certifier = _certifier(args)
    reports = [certifier.scan(f) for f in _load_all(args.fixtures)]
    groups = aggregate_by_group(reports)

    for r in reports:
        print(r.summary())
    print()
    print(f"{'Group':<32} {'Nice triples':>12} {'Ordered':>8}")
    print("-" * 54)
    for label, entry in groups.items():
        flag = "" if entry["complete"] else "  (incomplete)"
        print(f"{label:<32} {entry['count']:>12} {entry['ordered_count']:>8}{flag}")

    if args.json:
        _write_json(args.json, {
            "schema_version": REPORT_SCHEMA_VERSION,
            "kind": "scan-batch",
            "reports": [r.to_dict() for r in reports],
            "groups": groups,
        })
    return EXIT_PASS if all(r.complete for r in reports) else EXIT_BUDGET


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("fixtures", nargs="+", help="Fixture files or directories of *.ini")
    p.add_argument("--json", metavar="PATH", help="Write a JSON report")
    p.add_argument("--config", help="JSON config file (default: $BELYICERT_CONFIG or ./config.json)")
    p.add_argument("--budget-class-size", type=lambda s: int(float(s)), metavar="N",
                   help="Largest conjugacy class enumerated")
    p.add_argument("--budget-seconds", type=float, metavar="S",
                   help="Wall-clock limit per class enumeration or census")
    p.add_argument("--budget-table-order", type=lambda s: int(float(s)), metavar="N",
                   help="Largest group order for a complete class table")
    p.add_argument("--budget-generation-checks", type=lambda s: int(float(s)), metavar="N",
                   help="Generation tests allowed in one triple census")
    p.add_argument("--max-rss-mb", type=int, metavar="MB", help="Resident memory ceiling")
    p.add_argument("--seed", type=int, help="Random seed (recorded in reports)")
    p.add_argument("-v", "--verbose", action="count", default=0, help="Debug logging")
    p.add_argument("-q", "--quiet", action="store_true", help="Warnings only")


def main(argv=None) -> int:
    """CLI entry point."""
    parser = argparse.ArgumentParser(
        prog="belyicert",
        description="Certify Belyi maps, monodromy groups and rigid generating triples",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    # verify
    p = sub.add_parser("verify", help="Run the full certification on fixtures")
    _add_common(p)
    p.add_argument("--jobs", type=int, default=1, help="Fixtures verified in parallel")

    # scan
    p = sub.add_parser("scan", help="Count nice triples of each fixture's group")
    _add_common(p)

    args = parser.parse_args(argv)
    _setup_logging(args.verbose, args.quiet)
    cmd_map = {
        "verify": cmd_verify,
        "scan": cmd_scan,
    }
    try:
        return cmd_map[args.command](args)
    except (ParseError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
