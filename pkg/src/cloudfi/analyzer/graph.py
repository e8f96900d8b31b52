"""Propagation graphs: injected subsystem -> failed assertion -> API-error subsystem."""

from collections import Counter
from dataclasses import dataclass, field

from cloudfi.workload.events import FAULT_FREE, FAULTY

from .classify import failed_assertions, first_api_error

SUBSYSTEMS = ("compute", "volume", "network")


def round_trace(record, round_tag):
    return record.trace_faulty if round_tag == FAULTY else record.trace_fault_free


@dataclass(frozen=True)
class Manifestation:
    injected: str
    first_assertion: str
    assertion_subsystems: frozenset
    api_subsystem: str

    @property
    def failed(self):
        return bool(self.first_assertion or self.api_subsystem)

    @property
    def spatial(self):
        return any(s != self.injected for s in self.assertion_subsystems | ({self.api_subsystem} if self.api_subsystem else set()))


def manifestation(record, round_tag):
    trace = round_trace(record, round_tag)
    failed = failed_assertions(trace) if trace is not None else []
    _, err = first_api_error(trace) if trace is not None else (None, None)
    return Manifestation(
        record.point.subsystem,
        failed[0].name if failed else None,
        frozenset(a.subsystem for a in failed),
        err.subsystem if err is not None else None,
    )


@dataclass
class PropagationGraph:
    round: str
    inj_to_assertion: Counter = field(default_factory=Counter)
    assertion_to_api: Counter = field(default_factory=Counter)
    inj_to_api: Counter = field(default_factory=Counter)
    failed: Counter = field(default_factory=Counter)
    spatial: Counter = field(default_factory=Counter)
    spatial_ids: set = field(default_factory=set)

    def outgoing(self, subsystem):
        return sum(n for (s, _), n in self.inj_to_assertion.items() if s == subsystem) + sum(n for (s, _), n in self.inj_to_api.items() if s == subsystem)

    def conserved(self):
        return all(self.outgoing(s) == self.failed[s] for s in set(self.failed) | {s for s, _ in self.inj_to_assertion} | {s for s, _ in self.inj_to_api})

    def to_dot(self):
        lines = [f'digraph "propagation_{self.round}" {{', "  rankdir=TB;"]
        injected = sorted({s for s, _ in self.inj_to_assertion} | {s for s, _ in self.inj_to_api})
        checks = sorted({a for _, a in self.inj_to_assertion} | {a for a, _ in self.assertion_to_api})
        apis = sorted({e for _, e in self.assertion_to_api} | {e for _, e in self.inj_to_api})
        for s in injected:
            lines.append(f'  "inj:{s}" [shape=box, label="{s} (injected)"];')
        for a in checks:
            lines.append(f'  "check:{a}" [shape=ellipse, label="{a}"];')
        for e in apis:
            lines.append(f'  "api:{e}" [shape=box, style=rounded, label="{e} API error"];')
        for (s, a), n in sorted(self.inj_to_assertion.items()):
            lines.append(f'  "inj:{s}" -> "check:{a}" [label="{n}"];')
        for (a, e), n in sorted(self.assertion_to_api.items()):
            lines.append(f'  "check:{a}" -> "api:{e}" [label="{n}"];')
        for (s, e), n in sorted(self.inj_to_api.items()):
            lines.append(f'  "inj:{s}" -> "api:{e}" [label="{n}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_propagation_graph(records, round_tag=FAULTY):
    """Counted edges over COMPLETED records; one path per failed record."""
    g = PropagationGraph(round_tag)
    for rec in records:
        if not rec.completed:
            continue
        m = manifestation(rec, round_tag)
        if not m.failed:
            continue
        g.failed[m.injected] += 1
        if m.first_assertion:
            g.inj_to_assertion[(m.injected, m.first_assertion)] += 1
            if m.api_subsystem:
                g.assertion_to_api[(m.first_assertion, m.api_subsystem)] += 1
        else:
            g.inj_to_api[(m.injected, m.api_subsystem)] += 1
        if m.spatial:
            g.spatial[m.injected] += 1
            g.spatial_ids.add(rec.point.id)
    return g


__all__ = ["FAULT_FREE", "FAULTY", "Manifestation", "PropagationGraph", "build_propagation_graph", "manifestation"]
