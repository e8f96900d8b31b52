"""Runtime support imported by mutated and coverage-instrumented code.

Configuration comes from :func:`configure` or, for a freshly started target
process, from the ``CLOUDFI_CONTROL``, ``CLOUDFI_TRIGGER_LOG`` and
``CLOUDFI_COVERAGE`` environment variables.
"""

import os
import threading
import time

from .corruption import corrupt_value  # noqa: F401  (used by generated code)

_lock = threading.Lock()
_settings = {
    "control": os.environ.get("CLOUDFI_CONTROL"),
    "trigger_log": os.environ.get("CLOUDFI_TRIGGER_LOG"),
    "coverage": os.environ.get("CLOUDFI_COVERAGE"),
    "clock": time.monotonic,
}
_pending = []


def configure(control=None, trigger_log=None, coverage=None, clock=None):
    with _lock:
        _settings.update(control=control, trigger_log=trigger_log, coverage=coverage, clock=clock or time.monotonic)
        _pending.clear()


def _append(path, line):
    if path:
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(line)


def control_state(point_id):
    path = _settings["control"]
    if not path:
        return "disabled"
    try:
        with open(path, encoding="utf-8") as fh:
            state, _, pid = fh.read().strip().partition(" ")
    except FileNotFoundError:
        return "disabled"
    return "enabled" if state == "enabled" and pid == point_id else "disabled"


def triggered(point_id):
    """Guard predicate; records a trigger execution when it returns True."""
    if control_state(point_id) != "enabled":
        return False
    ts = round(_settings["clock"](), 6)
    with _lock:
        _pending.append((point_id, ts))
        _append(_settings["trigger_log"], f"{point_id}\t{ts:.6f}\n")
    return True


def drain_triggers():
    with _lock:
        out = list(_pending)
        _pending.clear()
    return out


def fail(exc_type, point_id):
    raise exc_type(f"injected failure at point {point_id}")


def cover(*point_ids):
    ts = round(_settings["clock"](), 6)
    with _lock:
        _append(_settings["coverage"], "".join(f"{pid}\t{ts:.6f}\n" for pid in point_ids))
    return True


def read_records(path):
    """Parse a trigger log or coverage marker file into (point id, ts) pairs."""
    if not path or not os.path.exists(path):
        return []
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                pid, ts = line.split("\t")
                out.append((pid, float(ts)))
    return out
