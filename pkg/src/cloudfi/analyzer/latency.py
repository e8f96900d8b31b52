"""API-error latency and nearest-rank statistics."""

import enum
from dataclasses import dataclass

from cloudfi.workload.events import TriggerExecution

from .classify import first_api_error, failed_before


class LatencyCategory(enum.Enum):
    API_AFTER_ASSERTION = "API_AFTER_ASSERTION"
    API_ONLY = "API_ONLY"


@dataclass(frozen=True)
class Latency:
    seconds: float
    category: LatencyCategory
    error_subsystem: str
    flagged: bool = False


def compute_latency(trace):
    """Time from the last trigger execution before the first API error to that error.

    Returns ``None`` when the trace has no API error.  When no trigger
    execution precedes the error, ``seconds`` is ``None`` and ``flagged`` is set.
    """
    idx, err = first_api_error(trace)
    if err is None:
        return None
    category = LatencyCategory.API_AFTER_ASSERTION if failed_before(trace, err.timestamp) else LatencyCategory.API_ONLY
    triggers = [e for e in trace.events[:idx] if isinstance(e, TriggerExecution)]
    if not triggers:
        return Latency(None, category, err.subsystem, flagged=True)
    return Latency(err.timestamp - triggers[-1].timestamp, category, err.subsystem)


def percentile(values, pct):
    """Nearest-rank percentile for an integer ``pct`` in [1, 100]."""
    if not values:
        raise ValueError("percentile of an empty set")
    ordered = sorted(values)
    rank = max(1, -(-pct * len(ordered) // 100))
    return ordered[rank - 1]


def summarize(values):
    return {"n": len(values), "avg": sum(values) / len(values), "p50": percentile(values, 50), "p90": percentile(values, 90)}
