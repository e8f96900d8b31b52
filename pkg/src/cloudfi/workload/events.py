"""Event traces recorded by the workload, one per round."""

import json
from dataclasses import asdict, dataclass, field

TRACE_FORMAT = "cloudfi-trace/1"
FAULTY = "faulty"
FAULT_FREE = "fault_free"
ROUNDS = (FAULTY, FAULT_FREE)


@dataclass(frozen=True)
class ApiOutcome:
    api_name: str
    subsystem: str
    start: float
    end: float
    ok: bool
    error_code: str = None
    status: int = None
    message: str = None
    error_subsystem: str = None
    type: str = "api"

    @property
    def timestamp(self):
        return self.end

    @property
    def failed(self):
        return not self.ok


@dataclass(frozen=True)
class AssertionResult:
    name: str
    subsystem: str
    passed: bool
    timestamp: float
    reason: str = ""
    type: str = "assertion"

    @property
    def failed(self):
        return not self.passed


@dataclass(frozen=True)
class TriggerExecution:
    point_id: str
    timestamp: float
    type: str = "trigger"

    failed = False


_EVENT_TYPES = {"api": ApiOutcome, "assertion": AssertionResult, "trigger": TriggerExecution}


def event_from_dict(data):
    return _EVENT_TYPES[data["type"]](**data)


def strip_timestamps(event):
    """Event as a dict without any timing fields, for equivalence checks."""
    d = asdict(event)
    for key in ("timestamp", "start", "end"):
        d.pop(key, None)
    return d


@dataclass
class EventTrace:
    round: str
    events: list = field(default_factory=list)
    aborted: bool = False
    truncated: bool = False

    def api_outcomes(self):
        return [e for e in self.events if isinstance(e, ApiOutcome)]

    def assertions(self):
        return [e for e in self.events if isinstance(e, AssertionResult)]

    def triggers(self):
        return [e for e in self.events if isinstance(e, TriggerExecution)]

    def timestamps(self):
        return [e.timestamp for e in self.events]

    def is_ordered(self):
        ts = self.timestamps()
        return all(a <= b for a, b in zip(ts, ts[1:]))

    def has_failure(self):
        return any(e.failed for e in self.events)

    def equivalent(self, other):
        """Equal modulo timestamps."""
        return (self.round, self.aborted, self.truncated) == (other.round, other.aborted, other.truncated) and [
            strip_timestamps(e) for e in self.events
        ] == [strip_timestamps(e) for e in other.events]

    def to_dict(self):
        return {"round": self.round, "aborted": self.aborted, "truncated": self.truncated, "events": [asdict(e) for e in self.events]}

    @classmethod
    def from_dict(cls, data):
        return cls(data["round"], [event_from_dict(e) for e in data["events"]], data["aborted"], data.get("truncated", False))


def write_trace(path, trace):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format": TRACE_FORMAT, "round": trace.round, "aborted": trace.aborted, "truncated": trace.truncated}, sort_keys=True) + "\n")
        for event in trace.events:
            fh.write(json.dumps(asdict(event), sort_keys=True) + "\n")


def read_trace(path):
    with open(path, encoding="utf-8") as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if not lines or lines[0].get("format") != TRACE_FORMAT:
        raise ValueError(f"{path}: not a {TRACE_FORMAT} file")
    head = lines[0]
    return EventTrace(head["round"], [event_from_dict(e) for e in lines[1:]], head["aborted"], head.get("truncated", False))
