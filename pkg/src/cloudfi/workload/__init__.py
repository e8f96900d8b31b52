"""Workload generator and assertion checks."""

from .assertions import CHECKS, NAMES, SUBSYSTEMS, AssertionCheck, check_assertion
from .events import (
    FAULT_FREE,
    FAULTY,
    ROUNDS,
    ApiOutcome,
    AssertionResult,
    EventTrace,
    TriggerExecution,
    read_trace,
    write_trace,
)
from .runner import RoundTimeout, WorkloadConfig, round_names, run_workload
from .targets import LocalTarget, Reply, RpcTarget

__all__ = [
    "ApiOutcome",
    "AssertionCheck",
    "AssertionResult",
    "CHECKS",
    "EventTrace",
    "FAULTY",
    "FAULT_FREE",
    "LocalTarget",
    "NAMES",
    "ROUNDS",
    "Reply",
    "RoundTimeout",
    "RpcTarget",
    "SUBSYSTEMS",
    "TriggerExecution",
    "WorkloadConfig",
    "check_assertion",
    "read_trace",
    "round_names",
    "run_workload",
    "write_trace",
]
