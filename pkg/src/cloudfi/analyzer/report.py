"""Write a :class:`Report` as CSV tables, DOT graphs and a text summary.

Percentages and averages use two decimals, latencies three, counts are
plain integers.
"""

import csv
import os

from cloudfi.workload.events import FAULT_FREE, FAULTY

from .aggregate import FAILED_CLASSES, FAILURE_CLASSES
from .classify import FailureClass, PropagationRound
from .latency import LatencyCategory

TABLES = (
    "failure_distribution.csv",
    "round_propagation.csv",
    "assertion_histogram.csv",
    "endpoint_errors.csv",
    "latency_stats.csv",
    "latency_cdf.csv",
    "logging_coverage.csv",
)
GRAPHS = ("propagation_faulty.dot", "propagation_fault_free.dot")
SUMMARY = "summary.txt"


def pct(num, den):
    return f"{100.0 * num / den:.2f}" if den else "0.00"


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_report(report, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    j = lambda name: os.path.join(out_dir, name)  # noqa: E731

    rows = []
    for sub, counts in report.distribution.items():
        total = sum(counts.values())
        for cls in FAILURE_CLASSES:
            rows.append([sub, cls.value, counts[cls], pct(counts[cls], total)])
    _write_csv(j("failure_distribution.csv"), ["injected_subsystem", "failure_class", "count", "percent"], rows)

    rows = []
    for sub, counts in report.round_propagation.items():
        total = sum(counts.values())
        for r in PropagationRound:
            rows.append([sub, r.value, counts[r], pct(counts[r], total)])
    _write_csv(j("round_propagation.csv"), ["injected_subsystem", "round_class", "count", "percent"], rows)

    _write_csv(j("assertion_histogram.csv"), ["assertion", FAULTY, FAULT_FREE],
               [[name, c[FAULTY], c[FAULT_FREE]] for name, c in report.assertion_histogram.items()])
    _write_csv(j("endpoint_errors.csv"), ["endpoint", "subsystem", FAULTY, FAULT_FREE],
               [[ep, sub, c[FAULTY], c[FAULT_FREE]] for (ep, sub), c in report.endpoint_errors.items()])
    _write_csv(j("latency_stats.csv"), ["injected_subsystem", "category", "n", "avg", "p50", "p90"],
               [[sub, cat.value, s["n"], f"{s['avg']:.3f}", f"{s['p50']:.3f}", f"{s['p90']:.3f}"] for (sub, cat), s in report.latency_stats.items()])
    _write_csv(j("latency_cdf.csv"), ["category", "latency", "cumulative_percent"],
               [[cat.value, f"{x:.3f}", f"{100.0 * p:.2f}"] for cat in LatencyCategory for x, p in report.latency_cdf.get(cat, [])])
    _write_csv(j("logging_coverage.csv"), ["injected_subsystem", "failure_class", "failures", "logged", "coverage_percent"],
               [[sub, cls if isinstance(cls, str) else cls.value, n, k, pct(k, n)] for (sub, cls), (n, k) in report.logging_coverage.items()])

    for tag, name in zip((FAULTY, FAULT_FREE), GRAPHS):
        with open(j(name), "w", encoding="utf-8") as fh:
            fh.write(report.graphs[tag].to_dot())
    with open(j(SUMMARY), "w", encoding="utf-8") as fh:
        fh.write(summary_text(report))
    return out_dir


def summary_text(report):
    vs = report.verdicts
    n = len(vs)
    failed = [v for v in vs if v.failure_class is not FailureClass.NO_FAILURE]
    dist = report.distribution.get("all", {})
    lines = [
        "campaign summary",
        f"experiments completed: {n}",
        f"experiments invalid: {len(report.invalid)}",
        f"records excluded (malformed): {len(report.excluded)}",
        "",
        "failure classes:",
    ]
    for cls in FAILURE_CLASSES:
        lines.append(f"  {cls.value}: {dist.get(cls, 0)} ({pct(dist.get(cls, 0), n)}%)")
    non_fail_stop = sum(1 for v in vs if v.failure_class in (FailureClass.ASSERTION_ONLY, FailureClass.ASSERTION_THEN_API))
    never_notified = dist.get(FailureClass.ASSERTION_ONLY, 0)
    lines += [
        "",
        f"failures: {len(failed)}",
        f"non-fail-stop failures (an assertion failed first): {non_fail_stop} ({pct(non_fail_stop, len(failed))}% of failures)",
        f"failures never reported by an API error: {never_notified} ({pct(never_notified, len(failed))}% of failures)",
        f"non-logged failures: {sum(1 for v in failed if not v.logged)} ({pct(sum(1 for v in failed if not v.logged), len(failed))}% of failures)",
        f"spatially propagated failures: {sum(1 for v in failed if v.spatial)} ({pct(sum(1 for v in failed if v.spatial), len(failed))}% of failures)",
        f"failures in the fault-free round: {sum(1 for v in vs if v.propagation_round is PropagationRound.FAULT_FREE_PROPAGATED)}",
        f"API errors without a preceding trigger execution: {sum(1 for v in vs if v.latency_flagged)}",
        f"API errors raised outside the injected subsystem: {sum(1 for v in vs if v.cross_subsystem_latency)}",
    ]
    for tag in (FAULTY, FAULT_FREE):
        g = report.graphs.get(tag)
        if g is not None:
            lines.append(f"propagation graph ({tag}): {sum(g.failed.values())} failed records, {len(g.spatial_ids)} spatial, conserved={g.conserved()}")
    if report.excluded:
        lines.append("")
        lines.append("excluded records:")
        lines += [f"  {pid}: {why}" for pid, why in report.excluded]
    return "\n".join(lines) + "\n"


__all__ = ["FAILED_CLASSES", "GRAPHS", "SUMMARY", "TABLES", "summary_text", "write_report"]
