"""Per-record verdicts and the report tables built from them."""

from collections import Counter, defaultdict
from dataclasses import dataclass, field

from cloudfi.workload.assertions import CHECKS, SUBSYSTEMS
from cloudfi.workload.events import FAULT_FREE, FAULTY, ApiOutcome

from .classify import FailureClass, MalformedTrace, PropagationRound, classify_failure, classify_round, failed_assertions, is_logged
from .graph import build_propagation_graph, manifestation
from .latency import LatencyCategory, compute_latency, summarize

FAILURE_CLASSES = tuple(FailureClass)
FAILED_CLASSES = tuple(c for c in FailureClass if c is not FailureClass.NO_FAILURE)


@dataclass(frozen=True)
class FailureClassification:
    point_id: str
    injected: str
    failure_class: FailureClass
    propagation_round: PropagationRound
    logged: bool
    latency: float = None
    latency_category: LatencyCategory = None
    latency_flagged: bool = False
    assertion_subsystems: frozenset = frozenset()
    api_subsystem: str = None
    spatial: bool = False
    cross_subsystem_latency: bool = False


def classify_record(record):
    """Verdict for one COMPLETED record; raises MalformedTrace."""
    cls = classify_failure(record.trace_faulty)
    if record.trace_fault_free is not None and not record.trace_fault_free.is_ordered():
        raise MalformedTrace("fault-free trace timestamps out of order")
    lat = compute_latency(record.trace_faulty)
    m = manifestation(record, FAULTY)
    return FailureClassification(
        record.point.id,
        record.point.subsystem,
        cls,
        classify_round(record),
        cls is not FailureClass.NO_FAILURE and is_logged(record),
        lat.seconds if lat else None,
        lat.category if lat else None,
        bool(lat and lat.flagged),
        m.assertion_subsystems,
        m.api_subsystem,
        m.spatial,
        bool(lat and lat.seconds is not None and lat.error_subsystem != record.point.subsystem),
    )


@dataclass
class Report:
    verdicts: list = field(default_factory=list)
    excluded: list = field(default_factory=list)
    invalid: list = field(default_factory=list)
    distribution: dict = field(default_factory=dict)
    round_propagation: dict = field(default_factory=dict)
    assertion_histogram: dict = field(default_factory=dict)
    endpoint_errors: dict = field(default_factory=dict)
    latency_stats: dict = field(default_factory=dict)
    latency_cdf: dict = field(default_factory=dict)
    logging_coverage: dict = field(default_factory=dict)
    graphs: dict = field(default_factory=dict)

    @property
    def completed(self):
        return len(self.verdicts)


def latency_stats(verdicts):
    """{(injected subsystem, category): {n, avg, p50, p90}} over known latencies."""
    groups = defaultdict(list)
    for v in verdicts:
        if v.latency is not None:
            groups[(v.injected, v.latency_category)].append(v.latency)
    return {k: summarize(vals) for k, vals in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1].value))}


def latency_cdf(verdicts):
    out = {}
    for cat in LatencyCategory:
        vals = sorted(v.latency for v in verdicts if v.latency is not None and v.latency_category is cat)
        out[cat] = [(x, (i + 1) / len(vals)) for i, x in enumerate(vals)]
    return out


def logging_coverage(verdicts):
    """{(subsystem or 'all', class): (failures, logged)} for failed records only."""
    cells = {}
    for sub in SUBSYSTEMS + ("all",):
        for cls in FAILED_CLASSES:
            vs = [v for v in verdicts if v.failure_class is cls and (sub == "all" or v.injected == sub)]
            cells[(sub, cls)] = (len(vs), sum(v.logged for v in vs))
        vs = [v for v in verdicts if v.failure_class is not FailureClass.NO_FAILURE and (sub == "all" or v.injected == sub)]
        cells[(sub, "ALL_FAILURES")] = (len(vs), sum(v.logged for v in vs))
    return cells


def aggregate(records):
    report = Report()
    completed = []
    for rec in sorted(records, key=lambda r: r.point.id):
        if not rec.completed:
            report.invalid.append(rec.point.id)
            continue
        try:
            report.verdicts.append(classify_record(rec))
            completed.append(rec)
        except MalformedTrace as exc:
            report.excluded.append((rec.point.id, str(exc)))
    vs = report.verdicts

    for sub in SUBSYSTEMS + ("all",):
        counts = Counter(v.failure_class for v in vs if sub == "all" or v.injected == sub)
        report.distribution[sub] = {c: counts.get(c, 0) for c in FAILURE_CLASSES}
        rounds = Counter(v.propagation_round for v in vs if sub == "all" or v.injected == sub)
        report.round_propagation[sub] = {r: rounds.get(r, 0) for r in PropagationRound}

    for name in CHECKS:
        report.assertion_histogram[name] = {FAULTY: 0, FAULT_FREE: 0}
    endpoint_errors = defaultdict(lambda: {FAULTY: 0, FAULT_FREE: 0})
    for rec in completed:
        for tag, trace in ((FAULTY, rec.trace_faulty), (FAULT_FREE, rec.trace_fault_free)):
            if trace is None:
                continue
            for name in sorted({a.name for a in failed_assertions(trace)}):
                report.assertion_histogram[name][tag] += 1
            for e in trace.events:
                if isinstance(e, ApiOutcome) and not e.ok:
                    endpoint_errors[(e.api_name, e.subsystem)][tag] += 1
    report.endpoint_errors = dict(sorted(endpoint_errors.items()))

    report.latency_stats = latency_stats(vs)
    report.latency_cdf = latency_cdf(vs)
    report.logging_coverage = logging_coverage(vs)
    report.graphs = {tag: build_propagation_graph(completed, tag) for tag in (FAULTY, FAULT_FREE)}
    return report
