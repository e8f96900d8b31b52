import json
import os
import shutil

import pytest
from conftest import find_point

from cloudfi.analyzer import aggregate
from cloudfi.mutation import BugType, InjectionPoint
from cloudfi.orchestrator import (
    COMPLETED,
    INVALID,
    ManifestMismatch,
    load_campaign_config,
    load_dataset,
    read_record,
    resume_campaign,
    run_campaign,
    run_experiment,
    select_points,
    write_record,
)
from cloudfi.orchestrator.records import exp_dir, list_record_dirs
from cloudfi.workload import FAULT_FREE, FAULTY


@pytest.fixture(scope="module")
def three(minicloud_points):
    return [
        find_point(minicloud_points, "compute/api.py", "activate_image", "MISSING_FUNC_CALL"),
        find_point(minicloud_points, "network/api.py", "subnet_create", "MISSING_PARAM", 4),
        find_point(minicloud_points, "network/api.py", "floating_ip_update", "MISSING_FUNC_CALL"),
    ]


def _kv(host, key):
    return host.request("admin.kv_get", {"key": key})["result"]


def test_state_survives_between_rounds_but_not_between_experiments(three, campaign_config, pristine_snapshot, tmp_path):
    sandbox = tmp_path / "sb"
    seen = []

    def first(host, phase):
        if phase == "start":
            host.request("admin.kv_put", {"key": "sentinel", "value": "round-1"})
            host.request("admin.kv_put", {"key": "poison", "value": "left behind"})
        seen.append((phase, _kv(host, "sentinel")))

    rec1, _ = run_experiment(three[0], campaign_config, pristine_snapshot, str(sandbox), first)
    assert rec1.status == COMPLETED
    assert seen == [("start", "round-1"), ("between_rounds", "round-1"), ("end", "round-1")]

    later = {}

    def second(host, phase):
        if phase == "start":
            later["poison"] = _kv(host, "poison")
            later["digest"] = host.request("admin.digest")["result"]

    rec2, _ = run_experiment(three[1], campaign_config, pristine_snapshot, str(sandbox), second)
    assert rec2.status == COMPLETED
    assert later["poison"] is None
    assert rec1.digest_at_start == rec2.digest_at_start == later["digest"]


def test_round_one_resources_visible_in_round_two(three, campaign_config, pristine_snapshot, tmp_path):
    record, _ = run_experiment(three[0], campaign_config, pristine_snapshot, str(tmp_path / "sb"))
    names = {t.record.message for t in record.logs if t.round == FAULT_FREE}
    assert record.windows[FAULTY][1] == record.windows[FAULT_FREE][0]
    assert any("fi-faultfree" in m for m in names)
    assert all(t.round in (FAULTY, FAULT_FREE, "setup") for t in record.logs)


def test_trigger_fires_only_in_faulty_round(three, campaign_config, pristine_snapshot, tmp_path):
    record, _ = run_experiment(three[0], campaign_config, pristine_snapshot, str(tmp_path / "sb"))
    assert record.trace_faulty.triggers()
    assert not record.trace_fault_free.triggers()
    assert not record.trace_fault_free.has_failure()


def test_rejected_injection_is_invalid(campaign_config, pristine_snapshot, tmp_path):
    bogus = InjectionPoint.make("compute/api.py", (1, 0, 1, 3), BugType.MISSING_FUNC_CALL, "instance_get", None, "compute")
    record, _ = run_experiment(bogus, campaign_config, pristine_snapshot, str(tmp_path / "sb"))
    assert record.status == INVALID and "injection rejected" in record.reason


def test_tiny_timeout_is_invalid(three, campaign_config, pristine_snapshot, tmp_path):
    cfg = campaign_config.with_overrides(timeout_secs=1e-4)
    record, _ = run_experiment(three[0], cfg, pristine_snapshot, str(tmp_path / "sb"))
    assert record.status == INVALID and record.reason


def test_record_roundtrip(three, campaign_config, pristine_snapshot, tmp_path):
    record, logs = run_experiment(three[2], campaign_config, pristine_snapshot, str(tmp_path / "sb"))
    write_record(str(tmp_path / "ds"), record, logs)
    back = read_record(exp_dir(str(tmp_path / "ds"), record.point.id))
    assert back.point == record.point and back.status == record.status
    assert back.trace_faulty == record.trace_faulty and back.trace_fault_free == record.trace_fault_free
    assert back.logs == record.logs
    assert os.path.isdir(os.path.join(exp_dir(str(tmp_path / "ds"), record.point.id), "logs"))


def test_campaign_over_three_points(three, campaign_config, tmp_path):
    ds = tmp_path / "ds"
    manifest = run_campaign(campaign_config.with_overrides(jobs=2), str(ds), points=three)
    records = load_dataset(str(ds))
    assert sorted(r.point.id for r in records) == sorted(p.id for p in three)
    assert all(r.status == COMPLETED for r in records)
    counts = manifest.data["counts"]
    assert counts == {"points_scanned": 3, "points_covered": 3, "experiments_completed": 3, "experiments_invalid": 0}
    on_disk = json.loads((ds / "manifest.json").read_text())
    assert set(on_disk["phases"]) == {"scan", "coverage", "experiments"}
    assert all("finished" in v for v in on_disk["phases"].values())


def test_resume_reruns_only_missing(three, campaign_config, tmp_path):
    ds = tmp_path / "ds"
    run_campaign(campaign_config, str(ds), points=three)
    dirs = list_record_dirs(str(ds))
    kept = {d: os.stat(os.path.join(d, "record.json")).st_mtime_ns for d in dirs[1:]}
    shutil.rmtree(dirs[0])
    resume_campaign(campaign_config, str(ds))
    assert len(list_record_dirs(str(ds))) == 3
    assert all(os.stat(os.path.join(d, "record.json")).st_mtime_ns == t for d, t in kept.items())


def test_resume_refuses_changed_config(three, campaign_config, tmp_path):
    ds = tmp_path / "ds"
    run_campaign(campaign_config, str(ds), points=three[:1])
    with pytest.raises(ManifestMismatch):
        resume_campaign(campaign_config.with_overrides(seed=99), str(ds))


def test_same_seed_same_outcomes(campaign_config, tmp_path):
    cfg = campaign_config.with_overrides(seed=5)
    verdicts = []
    for name in ("a", "b"):
        run_campaign(cfg, str(tmp_path / name), limit=8)
        report = aggregate(load_dataset(str(tmp_path / name)))
        verdicts.append([(v.point_id, v.failure_class, v.propagation_round, v.logged, v.latency) for v in report.verdicts])
    assert len(verdicts[0]) == 8
    assert verdicts[0] == verdicts[1]


def test_select_points_is_seeded():
    ids = [f"{i:03d}" for i in range(50)]
    assert select_points(ids) == ids
    a, b = select_points(ids, 10, seed=3), select_points(ids, 10, seed=3)
    assert a == b and len(a) == 10 and a == sorted(a)
    assert select_points(ids, 10, seed=4) != a


def test_config_file(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text("[campaign]\nseed = 4\njobs = 3\nclock = sim\ntimeout_secs = 30\n\n[workload]\nssh_timeout = 2\n")
    cfg = load_campaign_config(str(path))
    assert (cfg.seed, cfg.jobs, cfg.timeout_secs, cfg.workload.ssh_timeout, cfg.workload.round_budget) == (4, 3, 30.0, 2.0, 30.0)
    assert cfg.hash() == cfg.with_overrides(jobs=1).hash()
    assert cfg.hash() != cfg.with_overrides(seed=5).hash()
    path.write_text("[campaign]\nclock = lunar\n")
    with pytest.raises(ValueError):
        load_campaign_config(str(path))
