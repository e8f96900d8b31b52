import importlib
import os
import shutil
import sys

import pytest

from cloudfi.minicloud import Cloud
from cloudfi.mutation import ScanConfig, default_scan_config, runtime, scan
from cloudfi.orchestrator import CampaignConfig, bundled_target

HERE = os.path.dirname(__file__)
FIXTURES = os.path.join(HERE, "fixtures")
SCANTREE = os.path.join(FIXTURES, "scantree")

FIXTURE_SCAN = ScanConfig(
    {"compute": "compute/", "volume": "volume/"},
    {"compute": ["instance", "host", "attach"], "volume": ["volume"]},
)


@pytest.fixture(scope="session")
def minicloud_points():
    return scan(bundled_target(), default_scan_config())


@pytest.fixture(scope="session")
def pristine_snapshot():
    cloud = Cloud()
    try:
        return cloud.snapshot()
    finally:
        cloud.close()


@pytest.fixture
def campaign_config():
    return CampaignConfig(readiness_wait=0.5, timeout_secs=60)


@pytest.fixture(autouse=True)
def _reset_runtime():
    runtime.configure()
    yield
    runtime.configure()


_counter = [0]


def load_package(src_root, tmp_path, module="", prefix="fixpkg"):
    """Copy ``src_root`` to a uniquely named package and import ``module`` from it."""
    _counter[0] += 1
    name = f"{prefix}_{_counter[0]}"
    parent = tmp_path / f"import_{_counter[0]}"
    shutil.copytree(src_root, parent / name, ignore=shutil.ignore_patterns("__pycache__"))
    sys.path.insert(0, str(parent))
    try:
        importlib.invalidate_caches()
        return importlib.import_module(f"{name}.{module}" if module else name)
    finally:
        sys.path.remove(str(parent))


def find_point(points, file, call, bug, operand=None, line=None):
    found = [p for p in points if p.file == file and p.target_call == call and p.bug_type.value == bug
             and p.operand_index == operand and (line is None or p.span[0] == line)]
    assert len(found) == 1, found
    return found[0]


def state_of(host):
    """Datastore tables of a running host, via the admin snapshot."""
    import json

    reply = host.request("admin.snapshot")
    return json.loads(reply["result"])["state"]["tables"]


def by_name(tables, kind, name):
    rows = [r for r in tables[kind].values() if r["name"] == name]
    return rows[0] if rows else None


def run_seeded(point, config, snapshot, sandbox):
    """Run one experiment; returns the record and the datastore after round 1."""
    from cloudfi.orchestrator import run_experiment

    seen = {}

    def hook(host, phase):
        if phase == "between_rounds":
            seen["tables"] = state_of(host)

    record, _ = run_experiment(point, config, snapshot, str(sandbox), hook)
    return record, seen.get("tables")
