"""Experiment records and their on-disk layout.

``exp-<point id>/record.json`` holds the summary, ``traces/<round>.jsonl``
the event traces and ``logs/`` the raw component logs plus
``tagged.jsonl`` (every log record with its round tag).
"""

import json
import os
import shutil
from dataclasses import dataclass, field

from cloudfi.minicloud.logs import ServiceLogRecord
from cloudfi.mutation.types import InjectionPoint
from cloudfi.workload.events import FAULT_FREE, FAULTY, read_trace, write_trace

COMPLETED = "COMPLETED"
INVALID = "INVALID"
SETUP = "setup"
RECORD_FORMAT = "cloudfi-record/1"


@dataclass(frozen=True)
class TaggedLog:
    round: str
    record: ServiceLogRecord

    def to_dict(self):
        return {"round": self.round, **self.record.to_dict()}

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        tag = data.pop("round")
        return cls(tag, ServiceLogRecord.from_dict(data))


@dataclass
class ExperimentRecord:
    point: InjectionPoint
    status: str
    reason: str = ""
    trace_faulty: object = None
    trace_fault_free: object = None
    logs: list = field(default_factory=list)
    windows: dict = field(default_factory=dict)
    digest_at_start: str = None

    @property
    def completed(self):
        return self.status == COMPLETED

    @property
    def trigger_executions(self):
        if self.trace_faulty is None:
            return []
        return [e.timestamp for e in self.trace_faulty.triggers()]

    def logs_for(self, round_tag):
        return [t.record for t in self.logs if t.round == round_tag]

    def summary(self):
        return {
            "format": RECORD_FORMAT,
            "point": self.point.to_dict(),
            "status": self.status,
            "reason": self.reason,
            "windows": {k: list(v) for k, v in self.windows.items()},
            "digest_at_start": self.digest_at_start,
            "trigger_executions": self.trigger_executions,
        }


def tag_logs(records, windows):
    """Assign each log record to the round whose window contains it."""
    out = []
    f0, f1 = windows.get(FAULTY, (None, None))
    g0, g1 = windows.get(FAULT_FREE, (None, None))
    for rec in records:
        if f0 is not None and f0 <= rec.timestamp <= f1:
            tag = FAULTY
        elif g0 is not None and g0 <= rec.timestamp <= g1:
            tag = FAULT_FREE
        else:
            tag = SETUP
        out.append(TaggedLog(tag, rec))
    return out


def exp_dir(dataset, point_id):
    return os.path.join(dataset, f"exp-{point_id}")


def write_record(dataset, record, raw_log_dir=None):
    final = exp_dir(dataset, record.point.id)
    tmp = final + ".tmp"
    if os.path.exists(tmp):
        shutil.rmtree(tmp)
    os.makedirs(os.path.join(tmp, "traces"))
    os.makedirs(os.path.join(tmp, "logs"))
    for trace in (record.trace_faulty, record.trace_fault_free):
        if trace is not None:
            write_trace(os.path.join(tmp, "traces", f"{trace.round}.jsonl"), trace)
    with open(os.path.join(tmp, "logs", "tagged.jsonl"), "w", encoding="utf-8") as fh:
        for t in record.logs:
            fh.write(json.dumps(t.to_dict(), sort_keys=True) + "\n")
    if raw_log_dir and os.path.isdir(raw_log_dir):
        for name in sorted(os.listdir(raw_log_dir)):
            shutil.copyfile(os.path.join(raw_log_dir, name), os.path.join(tmp, "logs", name))
    with open(os.path.join(tmp, "record.json"), "w", encoding="utf-8") as fh:
        json.dump(record.summary(), fh, indent=1, sort_keys=True)
        fh.write("\n")
    if os.path.exists(final):
        shutil.rmtree(final)
    os.replace(tmp, final)
    return final


def read_record(path):
    with open(os.path.join(path, "record.json"), encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("format") != RECORD_FORMAT:
        raise ValueError(f"{path}: unknown record format")
    traces = {}
    for tag in (FAULTY, FAULT_FREE):
        p = os.path.join(path, "traces", f"{tag}.jsonl")
        if os.path.exists(p):
            traces[tag] = read_trace(p)
    logs = []
    tagged = os.path.join(path, "logs", "tagged.jsonl")
    if os.path.exists(tagged):
        with open(tagged, encoding="utf-8") as fh:
            logs = [TaggedLog.from_dict(json.loads(line)) for line in fh if line.strip()]
    return ExperimentRecord(
        InjectionPoint.from_dict(data["point"]),
        data["status"],
        data.get("reason", ""),
        traces.get(FAULTY),
        traces.get(FAULT_FREE),
        logs,
        {k: tuple(v) for k, v in data.get("windows", {}).items()},
        data.get("digest_at_start"),
    )


def list_record_dirs(dataset):
    if not os.path.isdir(dataset):
        return []
    return sorted(
        os.path.join(dataset, d) for d in os.listdir(dataset)
        if d.startswith("exp-") and not d.endswith(".tmp") and os.path.exists(os.path.join(dataset, d, "record.json"))
    )


def load_dataset(dataset):
    return [read_record(p) for p in list_record_dirs(dataset)]
