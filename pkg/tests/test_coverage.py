import os
import shutil

import pytest
from conftest import FIXTURE_SCAN, load_package

from cloudfi.mutation import MutationError, default_scan_config, instrument_coverage, runtime, scan
from cloudfi.orchestrator import BaselineFailure, bundled_target, run_coverage_phase

THREE = '''"""Three injection points, one per function."""


def first(db):
    db.instance_ping()


def second(db):
    db.instance_ping()


def third(db):
    db.instance_ping()
'''

COUNTED = '''def run(db, n):
    done = 0
    for i in range(n):
        if i % 3 == 0:
            db.instance_touch()
            done += 1
    return done
'''


class Db:
    def instance_ping(self):
        return None

    def instance_touch(self):
        return None


def _tree(tmp_path, text, name="api.py"):
    root = tmp_path / "src"
    (root / "compute").mkdir(parents=True)
    (root / "__init__.py").write_text("")
    (root / "compute" / "__init__.py").write_text("")
    (root / "compute" / name).write_text(text)
    return root


def test_two_of_three_sites_covered(tmp_path):
    root = _tree(tmp_path, THREE)
    points = scan(str(root), FIXTURE_SCAN)
    assert len(points) == 3
    out = tmp_path / "inst"
    instrument_coverage(str(root), points, str(out), FIXTURE_SCAN)
    markers = tmp_path / "cov.tsv"
    runtime.configure(coverage=str(markers))
    mod = load_package(str(out), tmp_path, "compute.api")
    mod.first(Db())
    mod.third(Db())
    covered = {pid for pid, _ in runtime.read_records(str(markers))}
    assert len(covered) == 2
    assert covered == {points[0].id, points[2].id}


def test_zero_points_is_byte_identical(tmp_path):
    root = _tree(tmp_path, THREE)
    out = tmp_path / "inst"
    instrument_coverage(str(root), [], str(out), FIXTURE_SCAN)
    for dirpath, _, files in os.walk(root):
        for f in files:
            src = os.path.join(dirpath, f)
            dst = os.path.join(out, os.path.relpath(src, root))
            with open(src, "rb") as a, open(dst, "rb") as b:
                assert a.read() == b.read()


@pytest.mark.parametrize("n", [0, 1, 7, 30])
def test_marker_count_equals_executions(tmp_path, n):
    root = _tree(tmp_path, COUNTED)
    points = scan(str(root), FIXTURE_SCAN)
    assert len(points) == 1
    out = tmp_path / "inst"
    instrument_coverage(str(root), points, str(out), FIXTURE_SCAN)
    markers = tmp_path / "cov.tsv"
    runtime.configure(coverage=str(markers))
    mod = load_package(str(out), tmp_path, "compute.api")
    done = mod.run(Db(), n)
    assert len(runtime.read_records(str(markers))) == done


def test_instrumented_code_keeps_behaviour(tmp_path):
    root = _tree(tmp_path, COUNTED)
    points = scan(str(root), FIXTURE_SCAN)
    out = tmp_path / "inst"
    instrument_coverage(str(root), points, str(out), FIXTURE_SCAN)
    plain = load_package(str(root), tmp_path, "compute.api")
    inst = load_package(str(out), tmp_path, "compute.api")
    assert [plain.run(Db(), k) for k in range(10)] == [inst.run(Db(), k) for k in range(10)]


def test_point_for_missing_file_rejected(tmp_path):
    root = _tree(tmp_path, THREE)
    points = scan(str(root), FIXTURE_SCAN)
    os.remove(root / "compute" / "api.py")
    with pytest.raises(MutationError):
        instrument_coverage(str(root), points, str(tmp_path / "inst"), FIXTURE_SCAN)


SITES = '''"""Helpers added to a copy of the target for the reachability fixture."""


def note_image(db, image_id):
    return db.image_get(image_id)


def pick(db, image_id, flag):
    if flag:
        return db.instance_get("i-never")
    return db.image_get(image_id)


def never_called(db):
    return db.host_get("nowhere")
'''
REACHED_LINES = {5, 11}  # traced by hand: the workload registers one image per round


def _reachability_target(tmp_path):
    target = tmp_path / "target"
    shutil.copytree(bundled_target(), target, ignore=shutil.ignore_patterns("__pycache__"))
    (target / "compute" / "sites.py").write_text(SITES)
    api = target / "compute" / "api.py"
    text = api.read_text()
    text = text.replace("from .rpcapi import ComputeRPC\n", "from . import sites\nfrom .rpcapi import ComputeRPC\n")
    anchor = "        self.compute_rpcapi.activate_image(image.id)\n"
    assert anchor in text
    text = text.replace(anchor, anchor + "        sites.note_image(self.db, image.id)\n        sites.pick(self.db, image.id, False)\n")
    api.write_text(text)
    return target


def test_coverage_phase_matches_hand_traced_reachability(tmp_path, campaign_config):
    target = _reachability_target(tmp_path)
    config = campaign_config.with_overrides(target=str(target))
    points = scan(str(target), config.scan)
    result = run_coverage_phase(config, points, str(tmp_path / "work"))
    covered = set(result.covered)
    assert covered <= {p.id for p in points}
    sites = [p for p in points if p.file == "compute/sites.py"]
    assert sites
    expected = {p.id for p in sites if p.span[0] in REACHED_LINES}
    assert {p.id for p in sites if p.id in covered} == expected
    assert not result.baseline.has_failure()
    assert result.snapshot.startswith(b"{")


def test_coverage_phase_refuses_failing_baseline(tmp_path, campaign_config):
    target = tmp_path / "target"
    shutil.copytree(bundled_target(), target, ignore=shutil.ignore_patterns("__pycache__"))
    manager = target / "compute" / "manager.py"
    text = manager.read_text()
    old = 'self.db.image_update(image_id, state="ACTIVE"'
    assert old in text
    manager.write_text(text.replace(old, 'self.db.image_update(image_id, state="QUEUED"'))
    config = campaign_config.with_overrides(target=str(target))
    with pytest.raises(BaselineFailure):
        run_coverage_phase(config, scan(str(target), default_scan_config()), str(tmp_path / "work"))
