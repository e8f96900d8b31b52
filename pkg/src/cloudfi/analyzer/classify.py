"""Failure classes, round propagation and the logged-failure criterion."""

import enum

from cloudfi.minicloud.logs import HIGH_SEVERITY
from cloudfi.workload.events import FAULTY, ApiOutcome, AssertionResult


class FailureClass(enum.Enum):
    NO_FAILURE = "NO_FAILURE"
    API_ERROR_ONLY = "API_ERROR_ONLY"
    ASSERTION_ONLY = "ASSERTION_ONLY"
    ASSERTION_THEN_API = "ASSERTION_THEN_API"


class PropagationRound(enum.Enum):
    FAULTY_ONLY = "FAULTY_ONLY"
    FAULT_FREE_PROPAGATED = "FAULT_FREE_PROPAGATED"


class MalformedTrace(Exception):
    pass


def first_api_error(trace):
    for i, e in enumerate(trace.events):
        if isinstance(e, ApiOutcome) and not e.ok:
            return i, e
    return None, None


def failed_assertions(trace):
    return [e for e in trace.events if isinstance(e, AssertionResult) and not e.passed]


def failed_before(trace, t):
    """Failed assertions strictly earlier than time ``t``."""
    return [a for a in failed_assertions(trace) if a.timestamp < t]


def classify_failure(trace):
    if trace is None or not trace.is_ordered():
        raise MalformedTrace("timestamps out of order" if trace is not None else "trace missing")
    _, err = first_api_error(trace)
    failed = failed_assertions(trace)
    if err is None:
        return FailureClass.ASSERTION_ONLY if failed else FailureClass.NO_FAILURE
    return FailureClass.ASSERTION_THEN_API if failed_before(trace, err.timestamp) else FailureClass.API_ERROR_ONLY


def classify_round(record):
    trace = record.trace_fault_free
    if trace is not None and trace.has_failure():
        return PropagationRound.FAULT_FREE_PROPAGATED
    return PropagationRound.FAULTY_ONLY


def is_logged(record, round_tag=FAULTY):
    return any(t.record.severity >= HIGH_SEVERITY for t in record.logs if t.round == round_tag)
