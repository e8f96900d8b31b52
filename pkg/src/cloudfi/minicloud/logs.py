"""Per-component service logs.

Line format: ``ISO-timestamp SEVERITY component: message``.  Timestamps are
clock seconds rendered as an offset from a fixed epoch, so the round trip
``format_line`` -> ``parse_line`` is exact at microsecond resolution.
"""

import datetime as _dt
import enum
import os
from dataclasses import dataclass

EPOCH = _dt.datetime(2019, 1, 1)


class Severity(enum.IntEnum):
    TRACE = 5
    DEBUG = 10
    INFO = 20
    WARNING = 30
    ERROR = 40
    CRITICAL = 50


HIGH_SEVERITY = Severity.ERROR


@dataclass(frozen=True)
class ServiceLogRecord:
    timestamp: float
    severity: Severity
    component: str
    message: str

    def to_dict(self):
        return {
            "timestamp": self.timestamp,
            "severity": self.severity.name,
            "component": self.component,
            "message": self.message,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(float(data["timestamp"]), Severity[data["severity"]], data["component"], data["message"])


def iso_timestamp(seconds):
    return (EPOCH + _dt.timedelta(seconds=seconds)).isoformat(timespec="microseconds")


def parse_iso(text):
    delta = _dt.datetime.fromisoformat(text) - EPOCH
    return round(delta.total_seconds(), 6)


def format_line(record):
    message = record.message.replace("\n", " ")
    return f"{iso_timestamp(record.timestamp)} {record.severity.name} {record.component}: {message}"


def parse_line(line):
    stamp, severity, rest = line.rstrip("\n").split(" ", 2)
    component, _, message = rest.partition(": ")
    return ServiceLogRecord(parse_iso(stamp), Severity[severity], component, message)


def read_log_dir(directory):
    records = []
    if not os.path.isdir(directory):
        return records
    for name in sorted(os.listdir(directory)):
        if not name.endswith(".log"):
            continue
        with open(os.path.join(directory, name), encoding="utf-8") as fh:
            records.extend(parse_line(line) for line in fh if line.strip())
    records.sort(key=lambda r: r.timestamp)
    return records


class LogSink:
    """Collects records in memory and, when given a directory, one file per component."""

    def __init__(self, directory=None, min_severity=Severity.TRACE):
        self.directory = directory
        self.min_severity = min_severity
        self.records = []
        self._files = {}
        if directory:
            os.makedirs(directory, exist_ok=True)

    def emit(self, record):
        if record.severity < self.min_severity:
            return
        self.records.append(record)
        if self.directory is None:
            return
        fh = self._files.get(record.component)
        if fh is None:
            path = os.path.join(self.directory, f"{record.component}.log")
            fh = self._files[record.component] = open(path, "a", encoding="utf-8", buffering=1)
        fh.write(format_line(record) + "\n")

    def close(self):
        for fh in self._files.values():
            fh.close()
        self._files.clear()


class ServiceLogger:
    def __init__(self, component, sink, clock):
        self.component = component
        self._sink = sink
        self._clock = clock

    def log(self, severity, msg, *args):
        if args:
            msg = msg % args
        self._sink.emit(ServiceLogRecord(self._clock.now(), Severity(severity), self.component, msg))

    def trace(self, msg, *args):
        self.log(Severity.TRACE, msg, *args)

    def debug(self, msg, *args):
        self.log(Severity.DEBUG, msg, *args)

    def info(self, msg, *args):
        self.log(Severity.INFO, msg, *args)

    def warning(self, msg, *args):
        self.log(Severity.WARNING, msg, *args)

    def error(self, msg, *args):
        self.log(Severity.ERROR, msg, *args)

    def critical(self, msg, *args):
        self.log(Severity.CRITICAL, msg, *args)
