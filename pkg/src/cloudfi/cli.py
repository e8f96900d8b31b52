"""Command-line entry point: ``cloudfi <subcommand> ...``.

Exit status: 0 success, 1 usage error, 2 campaign or analysis error.
"""

import argparse
import csv
import logging
import os
import shutil
import sys
import tempfile

from cloudfi.analyzer import aggregate, summary_text, write_report
from cloudfi.mutation import MutationError, read_catalog, scan, validate_points, write_catalog
from cloudfi.orchestrator import BaselineFailure, ManifestMismatch, load_campaign_config, load_dataset, run_campaign
from cloudfi.orchestrator.campaign import run_coverage_phase
from cloudfi.testbed import HostStartError, TransportError

DEMO_POINTS = 20
EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p, out_required=False, out_help="output path"):
    p.add_argument("--config", metavar="PATH", help="campaign/scan configuration (INI)")
    p.add_argument("--seed", type=int, help="campaign seed")
    p.add_argument("--jobs", type=int, help="parallel sandboxes")
    p.add_argument("--out", metavar="DIR", required=out_required, help=out_help)
    p.add_argument("--points", metavar="FILE", help="points catalog to use instead of scanning")
    p.add_argument("--timeout-secs", type=float, help="per-round wall-clock budget")


def build_parser():
    parser = _Parser(prog="cloudfi", description="Fault-injection campaigns against the minicloud testbed.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scan", help="enumerate injection points")
    _common(p, out_help="points catalog to write (JSON lines)")
    p.add_argument("--target", metavar="DIR", help="target package directory")
    p.add_argument("--validate", action="store_true", help="also build every mutant and report rejections")

    p = sub.add_parser("coverage", help="run the fault-free workload on an instrumented target")
    _common(p, out_help="file receiving the covered point ids")

    p = sub.add_parser("campaign", help="run a full campaign")
    _common(p, out_required=True, out_help="dataset directory")
    p.add_argument("--limit", type=int, help="run only a seeded sample of covered points")

    p = sub.add_parser("resume", help="continue an interrupted campaign")
    _common(p, out_required=True, out_help="dataset directory")
    p.add_argument("--limit", type=int)

    for name, text in (("analyze", "classify every experiment of a dataset"), ("report", "write tables, graphs and summary")):
        p = sub.add_parser(name, help=text)
        p.add_argument("dataset", metavar="DATASET")
        p.add_argument("--out", metavar="DIR", help="output directory (default DATASET/report)")

    p = sub.add_parser("demo", help=f"seeded {DEMO_POINTS}-point mini campaign with report")
    _common(p, out_required=True, out_help="output directory")
    return parser


def _config(args):
    cfg = load_campaign_config(args.config)
    return cfg.with_overrides(seed=getattr(args, "seed", None), jobs=getattr(args, "jobs", None), timeout_secs=getattr(args, "timeout_secs", None))


def _points(args, cfg):
    if getattr(args, "points", None):
        return read_catalog(args.points)
    return None


def cmd_scan(args):
    cfg = _config(args)
    target = args.target or cfg.target
    points = scan(target, cfg.scan)
    if args.out:
        write_catalog(args.out, points)
    counts = {}
    for p in points:
        counts[p.bug_type.value] = counts.get(p.bug_type.value, 0) + 1
    print(f"{len(points)} injection points")
    for name, n in sorted(counts.items()):
        print(f"  {name}: {n}")
    if args.validate:
        _, rejected = validate_points(target, points, cfg.scan)
        print(f"valid mutants: {len(points) - len(rejected)} / {len(points)}")
        for exc in rejected.values():
            print(f"  rejected {exc}")
    return EXIT_OK


def cmd_coverage(args):
    cfg = _config(args)
    points = _points(args, cfg)
    if points is None:
        points = scan(cfg.target, cfg.scan)
    work = tempfile.mkdtemp(prefix="cloudfi-coverage-")
    try:
        result = run_coverage_phase(cfg, points, work)
    finally:
        shutil.rmtree(work, ignore_errors=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.writelines(f"{pid}\n" for pid in result.covered)
    print(f"covered {len(result.covered)} of {len(points)} points")
    return EXIT_OK


def cmd_campaign(args, resume=False):
    cfg = _config(args)
    manifest = run_campaign(cfg, args.out, points=_points(args, cfg), limit=args.limit, resume=resume)
    c = manifest.data["counts"]
    print(f"scanned {c['points_scanned']}, covered {c['points_covered']}, completed {c['experiments_completed']}, invalid {c['experiments_invalid']}")
    return EXIT_OK


def _load(dataset):
    if not os.path.isdir(dataset):
        raise RuntimeError(f"{dataset}: no such dataset directory")
    records = load_dataset(dataset)
    if not records:
        raise RuntimeError(f"{dataset}: dataset contains no experiment records")
    return records


def cmd_analyze(args):
    report = aggregate(_load(args.dataset))
    out = args.out or os.path.join(args.dataset, "report")
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "verdicts.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["point_id", "injected_subsystem", "failure_class", "round_class", "logged", "latency", "latency_category", "spatial"])
        for v in report.verdicts:
            w.writerow([v.point_id, v.injected, v.failure_class.value, v.propagation_round.value, int(v.logged),
                        "" if v.latency is None else f"{v.latency:.3f}", v.latency_category.value if v.latency_category else "", int(v.spatial)])
    print(summary_text(report), end="")
    return EXIT_OK


def cmd_report(args):
    report = aggregate(_load(args.dataset))
    out = write_report(report, args.out or os.path.join(args.dataset, "report"))
    print(f"report written to {out}")
    return EXIT_OK


def cmd_demo(args):
    cfg = _config(args)
    dataset = os.path.join(args.out, "dataset")
    run_campaign(cfg, dataset, points=_points(args, cfg), limit=DEMO_POINTS)
    report = aggregate(load_dataset(dataset))
    write_report(report, os.path.join(args.out, "report"))
    print(summary_text(report), end="")
    return EXIT_OK


COMMANDS = {
    "scan": cmd_scan,
    "coverage": cmd_coverage,
    "campaign": cmd_campaign,
    "resume": lambda a: cmd_campaign(a, resume=True),
    "analyze": cmd_analyze,
    "report": cmd_report,
    "demo": cmd_demo,
}


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, FileNotFoundError) as exc:
        print(f"cloudfi {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BaselineFailure, ManifestMismatch, MutationError, HostStartError, TransportError, RuntimeError) as exc:
        print(f"cloudfi {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
