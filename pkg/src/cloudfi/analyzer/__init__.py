"""Campaign analysis: failure classes, latency, logging coverage, propagation."""

from .aggregate import FailureClassification, Report, aggregate, classify_record, latency_stats, logging_coverage
from .classify import FailureClass, MalformedTrace, PropagationRound, classify_failure, classify_round, is_logged
from .graph import PropagationGraph, build_propagation_graph, manifestation
from .latency import Latency, LatencyCategory, compute_latency, percentile, summarize
from .report import GRAPHS, SUMMARY, TABLES, summary_text, write_report

__all__ = [
    "FailureClass",
    "FailureClassification",
    "GRAPHS",
    "Latency",
    "LatencyCategory",
    "MalformedTrace",
    "PropagationGraph",
    "PropagationRound",
    "Report",
    "SUMMARY",
    "TABLES",
    "aggregate",
    "build_propagation_graph",
    "classify_failure",
    "classify_record",
    "classify_round",
    "compute_latency",
    "is_logged",
    "latency_stats",
    "logging_coverage",
    "manifestation",
    "percentile",
    "summarize",
    "summary_text",
    "write_report",
]
