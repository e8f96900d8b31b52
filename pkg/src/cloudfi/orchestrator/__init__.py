"""Experiment orchestration: coverage phase, two-round experiments, campaigns."""

from .campaign import BaselineFailure, CoverageResult, resume_campaign, run_campaign, run_coverage_phase, run_experiment, select_points
from .config import CampaignConfig, bundled_target, load_campaign_config
from .manifest import Manifest, ManifestMismatch
from .records import COMPLETED, INVALID, ExperimentRecord, TaggedLog, load_dataset, read_record, write_record

__all__ = [
    "BaselineFailure",
    "COMPLETED",
    "CampaignConfig",
    "CoverageResult",
    "ExperimentRecord",
    "INVALID",
    "Manifest",
    "ManifestMismatch",
    "TaggedLog",
    "bundled_target",
    "load_campaign_config",
    "load_dataset",
    "read_record",
    "resume_campaign",
    "run_campaign",
    "run_coverage_phase",
    "run_experiment",
    "select_points",
    "write_record",
]
