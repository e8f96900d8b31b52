"""Core records of the mutation engine."""

import enum
import hashlib
import os
from dataclasses import dataclass, field


class BugType(enum.Enum):
    WRONG_PARAM_VALUE = "WRONG_PARAM_VALUE"
    MISSING_PARAM = "MISSING_PARAM"
    MISSING_FUNC_CALL = "MISSING_FUNC_CALL"
    WRONG_RETURN_VALUE = "WRONG_RETURN_VALUE"
    MISSING_EXC_HANDLER = "MISSING_EXC_HANDLER"

    @property
    def order(self):
        return _BUG_ORDER[self]


_BUG_ORDER = {bt: i for i, bt in enumerate(BugType)}


def point_id(file, span, bug_type, operand_index):
    key = f"{file}:{','.join(map(str, span))}:{bug_type.value}:{operand_index}"
    return hashlib.sha1(key.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class InjectionPoint:
    id: str
    file: str
    span: tuple
    bug_type: BugType
    target_call: str
    operand_index: int = None
    subsystem: str = ""

    @classmethod
    def make(cls, file, span, bug_type, target_call, operand_index, subsystem):
        span = tuple(span)
        return cls(point_id(file, span, bug_type, operand_index), file, span, bug_type, target_call, operand_index, subsystem)

    def sort_key(self):
        return (self.file, self.span, self.bug_type.order, -1 if self.operand_index is None else self.operand_index)

    def to_dict(self):
        return {
            "id": self.id,
            "file": self.file,
            "span": list(self.span),
            "bug_type": self.bug_type.value,
            "target_call": self.target_call,
            "operand_index": self.operand_index,
            "subsystem": self.subsystem,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data["id"], data["file"], tuple(data["span"]), BugType(data["bug_type"]), data["target_call"], data.get("operand_index"), data["subsystem"])


class RejectReason(enum.Enum):
    NOT_APPLICABLE = "not-applicable"
    SITE_NOT_FOUND = "site-not-found"
    SHARED_LINE = "shared-line"
    UNSUPPORTED_CONTEXT = "unsupported-context"
    NO_EXCEPTION_TYPE = "no-exception-type"
    NOT_PRESERVING = "not-preserving"
    COMPILE_ERROR = "compile-error"


class MutationError(Exception):
    pass


class ScanError(MutationError):
    """A target file could not be parsed."""

    def __init__(self, file, lineno, offset, msg):
        super().__init__(f"{file}:{lineno}:{offset}: {msg}")
        self.file, self.lineno, self.offset = file, lineno, offset


class InjectionRejected(MutationError):
    def __init__(self, point, reason, detail=""):
        super().__init__(f"{point.id} ({point.bug_type.value} at {point.file}:{point.span[0]}): {reason.value}{': ' + detail if detail else ''}")
        self.point, self.reason, self.detail = point, reason, detail


class ContractViolation(MutationError):
    pass


@dataclass
class TriggerHandle:
    """Control-file switch for one experiment.

    The file holds ``enabled <point id>`` or ``disabled <point id>``; guard
    code re-reads it on every execution, so toggling needs no restart.
    """

    experiment_id: str
    channel: str
    state: str = "disabled"

    def _write(self, state):
        tmp = f"{self.channel}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(f"{state} {self.experiment_id}\n")
        os.replace(tmp, self.channel)
        self.state = state

    def enable(self):
        self._write("enabled")

    def disable(self):
        self._write("disabled")


@dataclass
class ScanConfig:
    subsystems: dict = field(default_factory=dict)
    keywords: dict = field(default_factory=dict)
    exceptions: list = field(default_factory=list)
    exceptions_module: str = "errors"

    def subsystem_for(self, relpath):
        relpath = relpath.replace(os.sep, "/")
        best = None
        for name, prefix in self.subsystems.items():
            if relpath.startswith(prefix) and (best is None or len(prefix) > len(self.subsystems[best])):
                best = name
        return best

    def all_keywords(self):
        return sorted({kw for kws in self.keywords.values() for kw in kws})

    def digest(self):
        blob = repr((sorted(self.subsystems.items()), sorted((k, tuple(v)) for k, v in self.keywords.items()), tuple(self.exceptions), self.exceptions_module))
        return hashlib.sha256(blob.encode()).hexdigest()
