"""Campaign configuration (INI).

``[campaign]`` and ``[workload]`` hold run settings; the scan sections
(``[subsystems]``, ``[keywords]``, ``[exceptions]``) may be given inline,
otherwise the bundled scan configuration is used.
"""

import configparser
import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field

import cloudfi
from cloudfi.mutation.config import default_scan_config, parse_scan_config
from cloudfi.mutation.types import ScanConfig
from cloudfi.workload import WorkloadConfig


def bundled_target():
    return os.path.join(os.path.dirname(cloudfi.__file__), "minicloud")


@dataclass
class CampaignConfig:
    target: str = field(default_factory=bundled_target)
    scan: ScanConfig = field(default_factory=default_scan_config)
    seed: int = 0
    jobs: int = 1
    clock: str = "sim"
    readiness_wait: float = 2.0
    timeout_secs: float = 120.0
    startup_timeout: float = 20.0
    workload: WorkloadConfig = field(default_factory=WorkloadConfig)
    out: str = None

    def __post_init__(self):
        self.workload.round_budget = self.timeout_secs

    def with_overrides(self, **kw):
        cfg = dataclasses.replace(self, **{k: v for k, v in kw.items() if v is not None})
        cfg.workload = dataclasses.replace(self.workload)
        cfg.__post_init__()
        return cfg

    def identity(self):
        """Settings that can change campaign results (not jobs or out)."""
        return {
            "target": os.path.abspath(self.target),
            "target_digest": tree_digest(self.target),
            "scan": self.scan.digest(),
            "seed": self.seed,
            "clock": self.clock,
            "readiness_wait": self.readiness_wait,
            "timeout_secs": self.timeout_secs,
            "workload": dataclasses.asdict(self.workload),
        }

    def hash(self):
        return hashlib.sha256(json.dumps(self.identity(), sort_keys=True).encode()).hexdigest()


def tree_digest(root):
    h = hashlib.sha256()
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(d for d in dirnames if d != "__pycache__")
        for fname in sorted(filenames):
            if fname.endswith(".py"):
                path = os.path.join(dirpath, fname)
                h.update(os.path.relpath(path, root).replace(os.sep, "/").encode() + b"\0")
                with open(path, "rb") as fh:
                    h.update(fh.read())
    return h.hexdigest()


def load_campaign_config(path=None):
    if path is None:
        return CampaignConfig()
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    cfg = CampaignConfig()
    if parser.has_section("subsystems"):
        cfg.scan = parse_scan_config(parser)
    if parser.has_section("campaign"):
        sec = parser["campaign"]
        target = sec.get("target")
        if target:
            cfg.target = os.path.join(os.path.dirname(os.path.abspath(path)), target)
        cfg.seed = sec.getint("seed", cfg.seed)
        cfg.jobs = sec.getint("jobs", cfg.jobs)
        cfg.clock = sec.get("clock", cfg.clock)
        cfg.readiness_wait = sec.getfloat("readiness_wait", cfg.readiness_wait)
        cfg.timeout_secs = sec.getfloat("timeout_secs", cfg.timeout_secs)
        cfg.startup_timeout = sec.getfloat("startup_timeout", cfg.startup_timeout)
    if parser.has_section("workload"):
        sec = parser["workload"]
        w = cfg.workload
        w.poll_interval = sec.getfloat("poll_interval", w.poll_interval)
        w.state_timeout = sec.getfloat("state_timeout", w.state_timeout)
        w.ssh_timeout = sec.getfloat("ssh_timeout", w.ssh_timeout)
        w.volume_size = sec.getint("volume_size", w.volume_size)
    if cfg.clock not in ("sim", "wall"):
        raise ValueError(f"clock must be 'sim' or 'wall', not {cfg.clock!r}")
    if cfg.jobs < 1:
        raise ValueError("jobs must be at least 1")
    cfg.__post_init__()
    return cfg
