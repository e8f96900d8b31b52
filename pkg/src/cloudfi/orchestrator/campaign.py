"""Coverage phase, single experiments and whole campaigns."""

import logging
import os
import queue
import random
import shutil
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from cloudfi.minicloud.logs import read_log_dir
from cloudfi.mutation import TriggerHandle, inject, instrument_coverage, read_catalog, scan, write_catalog
from cloudfi.mutation.runtime import read_records
from cloudfi.mutation.types import MutationError
from cloudfi.testbed import HostProcess, HostStartError, SandboxPaths, TransportError
from cloudfi.workload import FAULT_FREE, FAULTY, RoundTimeout, RpcTarget, run_workload

from .manifest import Manifest
from .records import COMPLETED, INVALID, ExperimentRecord, exp_dir, list_record_dirs, read_record, tag_logs, write_record

log = logging.getLogger(__name__)

POINTS_FILE = "points.jsonl"
COVERED_FILE = "covered.txt"
SNAPSHOT_FILE = "pristine-snapshot.json"


class BaselineFailure(Exception):
    """The unmutated target does not pass the fault-free workload."""


class CampaignError(Exception):
    pass


@dataclass
class CoverageResult:
    covered: list
    snapshot: bytes
    baseline: object


def _admin(host, endpoint, **params):
    reply = host.request(endpoint, params)
    if not reply["ok"]:
        raise TransportError(f"{endpoint} failed: {reply['error']}")
    return reply["result"]


def _ready(host, config):
    """Health ping plus the fixed readiness wait (on the target's clock)."""
    _admin(host, "admin.health")
    if config.readiness_wait > 0:
        _admin(host, "admin.wait", seconds=config.readiness_wait)


def _start_host(paths, config):
    return HostProcess(paths, clock=config.clock, startup_timeout=config.startup_timeout, request_timeout=config.timeout_secs).start()


def run_coverage_phase(config, points, workdir):
    """Run the fault-free workload once on an instrumented copy of the target.

    Returns the covered point ids, the pristine datastore snapshot and the
    baseline trace.  Raises :class:`BaselineFailure` if that run fails.
    """
    paths = SandboxPaths(os.path.join(workdir, "coverage"))
    paths.wipe()
    instrument_coverage(config.target, points, paths.package, config.scan)
    host = _start_host(paths, config)
    try:
        snapshot = _admin(host, "admin.snapshot").encode()
        _ready(host, config)
        baseline = run_workload(RpcTarget(host), FAULTY, config.workload)
    finally:
        host.stop()
    if baseline.has_failure():
        bad = [e for e in baseline.events if e.failed]
        raise BaselineFailure(f"baseline workload failed: {bad[0]}")
    known = {p.id for p in points}
    covered = sorted({pid for pid, _ in read_records(paths.coverage)} & known)
    return CoverageResult(covered, snapshot, baseline)


def run_experiment(point, config, snapshot, sandbox, hook=None):
    """One experiment in ``sandbox``: inject, round 1 enabled, round 2 disabled.

    ``hook(host, phase)``, if given, is called with phase ``"start"``,
    ``"between_rounds"`` and ``"end"`` while the target is up.
    """
    hook = hook or (lambda host, phase: None)
    paths = SandboxPaths(sandbox)
    paths.wipe()
    trigger = TriggerHandle(point.id, paths.control)
    try:
        inject(config.target, point, trigger, out_dir=paths.package, config=config.scan)
    except MutationError as exc:
        return ExperimentRecord(point, INVALID, f"injection rejected: {exc}"), None
    paths.install_snapshot(snapshot)
    try:
        host = _start_host(paths, config)
    except HostStartError as exc:
        return ExperimentRecord(point, INVALID, f"deploy failed: {exc}"), None
    record = ExperimentRecord(point, INVALID)
    try:
        _ready(host, config)
        target = RpcTarget(host)
        record.digest_at_start = _admin(host, "admin.digest")
        hook(host, "start")
        trigger.enable()
        t0 = _admin(host, "admin.now")
        faulty = run_workload(target, FAULTY, config.workload)
        t1 = _admin(host, "admin.now")
        trigger.disable()
        hook(host, "between_rounds")
        fault_free = run_workload(target, FAULT_FREE, config.workload)
        t2 = _admin(host, "admin.now")
        hook(host, "end")
        record.status, record.trace_faulty, record.trace_fault_free = COMPLETED, faulty, fault_free
        record.windows = {FAULTY: (t0, t1), FAULT_FREE: (t1, t2)}
    except (TransportError, RoundTimeout) as exc:
        record.reason = f"{type(exc).__name__}: {exc}"
    finally:
        host.stop()
    if record.completed:
        record.logs = tag_logs(read_log_dir(paths.logs), record.windows)
    return record, paths.logs


def select_points(covered, limit=None, seed=0):
    """Covered ids in id order, optionally a seeded subsample of ``limit``."""
    ids = sorted(covered)
    if limit is not None and limit < len(ids):
        ids = sorted(random.Random(seed).sample(ids, limit))
    return ids


def _experiments(config, points, snapshot, dataset, jobs):
    sandboxes = queue.Queue()
    root = tempfile.mkdtemp(prefix="cloudfi-sandboxes-")
    for k in range(jobs):
        sandboxes.put(os.path.join(root, f"sb-{k}"))

    def work(point):
        sandbox = sandboxes.get()
        try:
            record, raw_logs = run_experiment(point, config, snapshot, sandbox)
            write_record(dataset, record, raw_logs)
            return record.status
        finally:
            sandboxes.put(sandbox)

    try:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(work, points))
    finally:
        shutil.rmtree(root, ignore_errors=True)


def _count(dataset, manifest):
    statuses = [read_record(p).status for p in list_record_dirs(dataset)]
    manifest.set_counts(experiments_completed=statuses.count(COMPLETED), experiments_invalid=statuses.count(INVALID))


def run_campaign(config, dataset, points=None, limit=None, resume=False):
    """Scan, cover and run one experiment per selected covered point.

    ``points`` restricts the campaign to a given list of injection points;
    ``limit`` subsamples the covered set deterministically by ``config.seed``.
    """
    manifest = Manifest.open(dataset, config.hash(), resume=resume)
    workdir = tempfile.mkdtemp(prefix="cloudfi-work-")
    try:
        if resume and os.path.exists(os.path.join(dataset, POINTS_FILE)):
            all_points = read_catalog(os.path.join(dataset, POINTS_FILE))
        else:
            manifest.phase("scan", "started")
            all_points = points if points is not None else scan(config.target, config.scan)
            write_catalog(os.path.join(dataset, POINTS_FILE), all_points)
            manifest.set_counts(points_scanned=len(all_points))
            manifest.phase("scan", "finished")

        cov_path, snap_path = os.path.join(dataset, COVERED_FILE), os.path.join(dataset, SNAPSHOT_FILE)
        if resume and os.path.exists(cov_path) and os.path.exists(snap_path):
            with open(cov_path, encoding="utf-8") as fh:
                covered = [line.strip() for line in fh if line.strip()]
            with open(snap_path, "rb") as fh:
                snapshot = fh.read()
        else:
            manifest.phase("coverage", "started")
            result = run_coverage_phase(config, all_points, workdir)
            covered, snapshot = result.covered, result.snapshot
            with open(cov_path, "w", encoding="utf-8") as fh:
                fh.writelines(f"{pid}\n" for pid in covered)
            with open(snap_path, "wb") as fh:
                fh.write(snapshot)
            manifest.set_counts(points_covered=len(covered))
            manifest.phase("coverage", "finished")

        by_id = {p.id: p for p in all_points}
        selected = select_points(covered, limit, config.seed)
        done = {os.path.basename(p)[4:] for p in list_record_dirs(dataset)} if resume else set()
        todo = [by_id[i] for i in selected if i not in done]
        manifest.phase("experiments", "started")
        _experiments(config, todo, snapshot, dataset, config.jobs)
        _count(dataset, manifest)
        manifest.phase("experiments", "finished")
        return manifest
    finally:
        shutil.rmtree(workdir, ignore_errors=True)


def resume_campaign(config, dataset, limit=None):
    return run_campaign(config, dataset, limit=limit, resume=True)


__all__ = [
    "BaselineFailure",
    "CampaignError",
    "CoverageResult",
    "exp_dir",
    "resume_campaign",
    "run_campaign",
    "run_coverage_phase",
    "run_experiment",
    "select_points",
]
