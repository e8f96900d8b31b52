import pytest

from cloudfi.mutation import TriggerHandle, runtime


def test_guard_follows_control_file(tmp_path):
    control, log = tmp_path / "control", tmp_path / "triggers.tsv"
    runtime.configure(control=str(control), trigger_log=str(log), clock=lambda: 1.5)
    assert runtime.triggered("abc") is False  # no file yet
    handle = TriggerHandle("abc", str(control))
    handle.enable()
    assert handle.state == "enabled"
    assert runtime.triggered("abc") is True
    assert runtime.triggered("other") is False
    handle.disable()
    assert runtime.triggered("abc") is False
    assert runtime.drain_triggers() == [("abc", 1.5)]
    assert runtime.drain_triggers() == []
    assert runtime.read_records(str(log)) == [("abc", 1.5)]


def test_toggle_is_seen_without_reconfiguring(tmp_path):
    control = tmp_path / "control"
    runtime.configure(control=str(control))
    handle = TriggerHandle("p1", str(control))
    states = []
    for _ in range(3):
        handle.enable()
        states.append(runtime.triggered("p1"))
        handle.disable()
        states.append(runtime.triggered("p1"))
    assert states == [True, False] * 3


def test_unconfigured_runtime_never_triggers():
    assert runtime.control_state("x") == "disabled"
    assert runtime.triggered("x") is False


def test_fail_raises_given_type():
    with pytest.raises(KeyError, match="injected failure at point p9"):
        runtime.fail(KeyError, "p9")


def test_cover_writes_one_line_per_id(tmp_path):
    path = tmp_path / "cov.tsv"
    runtime.configure(coverage=str(path), clock=lambda: 2.0)
    assert runtime.cover("a", "b") is True
    runtime.cover("a")
    assert runtime.read_records(str(path)) == [("a", 2.0), ("b", 2.0), ("a", 2.0)]


def test_read_records_missing_file(tmp_path):
    assert runtime.read_records(str(tmp_path / "none")) == []
    assert runtime.read_records(None) == []
