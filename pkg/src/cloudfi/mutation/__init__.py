"""Mutation engine: scan, instrument and inject trigger-guarded faults."""

from .catalog import read_catalog, write_catalog
from .config import default_scan_config, load_scan_config
from .corruption import CORRUPTION_RULES, Kind, corrupt, corrupt_value, kind_of
from .rewrite import inject, instrument_coverage, mutate_source, raise_exception_variant, validate_points
from .scanner import scan
from .types import (
    BugType,
    ContractViolation,
    InjectionPoint,
    InjectionRejected,
    MutationError,
    RejectReason,
    ScanConfig,
    ScanError,
    TriggerHandle,
)

__all__ = [
    "BugType",
    "CORRUPTION_RULES",
    "ContractViolation",
    "InjectionPoint",
    "InjectionRejected",
    "Kind",
    "MutationError",
    "RejectReason",
    "ScanConfig",
    "ScanError",
    "TriggerHandle",
    "corrupt",
    "corrupt_value",
    "default_scan_config",
    "inject",
    "instrument_coverage",
    "kind_of",
    "load_scan_config",
    "mutate_source",
    "raise_exception_variant",
    "read_catalog",
    "scan",
    "validate_points",
    "write_catalog",
]
