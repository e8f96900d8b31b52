"""Single-file transactional datastore.

On disk a store directory holds ``snapshot.json`` (a checksummed, canonical
dump of every table) and ``txlog.jsonl`` (one committed transaction per
line).  Opening a store loads the snapshot and replays the log.  Every state
change is validated against :mod:`lifecycle` before it is committed.
"""

import contextlib
import copy
import hashlib
import json
import os
import threading

from . import errors
from .lifecycle import ID_PREFIX, LIFECYCLES, is_legal_initial, is_legal_transition
from .resources import Resource

SNAPSHOT_FORMAT = "minicloud-snapshot/1"
SNAPSHOT_FILE = "snapshot.json"
TXLOG_FILE = "txlog.jsonl"


def _canonical(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


def _empty_state():
    return {"meta": {"seq": {}, "tx": 0}, "tables": {kind: {} for kind in LIFECYCLES}}


def encode_snapshot(state):
    body = _canonical(state)
    doc = {"format": SNAPSHOT_FORMAT, "sha256": hashlib.sha256(body).hexdigest(), "state": state}
    return _canonical(doc)


def decode_snapshot(blob):
    try:
        doc = json.loads(blob)
        state = doc["state"]
        expected = doc["sha256"]
        fmt = doc["format"]
    except (ValueError, KeyError, TypeError) as exc:
        raise errors.CorruptSnapshot(f"unreadable snapshot: {exc}") from exc
    if fmt != SNAPSHOT_FORMAT:
        raise errors.CorruptSnapshot(f"unknown snapshot format {fmt!r}")
    if hashlib.sha256(_canonical(state)).hexdigest() != expected:
        raise errors.CorruptSnapshot("snapshot checksum mismatch")
    return state


class Datastore:
    def __init__(self, directory=None):
        self.directory = directory
        self.owner_round = None
        self._lock = threading.RLock()
        self._state = _empty_state()
        self._pending = None
        self._log_fh = None
        if directory:
            os.makedirs(directory, exist_ok=True)
            self._load()

    # -- persistence -----------------------------------------------------
    def _path(self, name):
        return os.path.join(self.directory, name)

    def _load(self):
        snap = self._path(SNAPSHOT_FILE)
        if os.path.exists(snap):
            with open(snap, "rb") as fh:
                self._state = decode_snapshot(fh.read())
        log = self._path(TXLOG_FILE)
        if os.path.exists(log):
            with open(log, "rb") as fh:
                for lineno, line in enumerate(fh, 1):
                    if not line.strip():
                        continue
                    try:
                        entry = json.loads(line)
                        ops = entry["ops"]
                    except (ValueError, KeyError) as exc:
                        raise errors.DatastoreError(f"corrupt transaction log line {lineno}") from exc
                    if hashlib.sha256(_canonical(ops)).hexdigest()[:16] != entry.get("crc"):
                        raise errors.DatastoreError(f"checksum mismatch in transaction log line {lineno}")
                    self._apply(self._state, ops)
                    self._state["meta"]["tx"] = entry["seq"]
                    if "seqs" in entry:
                        self._state["meta"]["seq"].update(entry["seqs"])

    def _append_log(self, entry):
        if not self.directory:
            return
        if self._log_fh is None:
            self._log_fh = open(self._path(TXLOG_FILE), "ab")
        self._log_fh.write(_canonical(entry) + b"\n")
        self._log_fh.flush()

    def close(self):
        if self._log_fh is not None:
            self._log_fh.close()
            self._log_fh = None

    @staticmethod
    def _apply(state, ops):
        tables = state["tables"]
        for op in ops:
            if op["op"] == "put":
                rec = op["record"]
                tables[rec["kind"]][rec["id"]] = copy.deepcopy(rec)
            elif op["op"] == "del":
                tables[op["kind"]].pop(op["id"], None)

    # -- transactions ----------------------------------------------------
    @contextlib.contextmanager
    def transaction(self):
        """Group several writes into one atomic transaction."""
        with self._lock:
            if self._pending is not None:
                yield
                return
            self._pending = {"ops": [], "seqs": {}}
            try:
                yield
            except BaseException:
                self._pending = None
                raise
            pending, self._pending = self._pending, None
            self._commit(pending)

    def _write(self, op, seq_update=None):
        with self._lock:
            if self._pending is not None:
                self._pending["ops"].append(op)
                if seq_update:
                    self._pending["seqs"].update(seq_update)
                return
            self._commit({"ops": [op], "seqs": seq_update or {}})

    def _commit(self, pending):
        if not pending["ops"]:
            return
        self._apply(self._state, pending["ops"])
        self._state["meta"]["seq"].update(pending["seqs"])
        self._state["meta"]["tx"] += 1
        entry = {"seq": self._state["meta"]["tx"], "ops": pending["ops"], "crc": hashlib.sha256(_canonical(pending["ops"])).hexdigest()[:16]}
        if pending["seqs"]:
            entry["seqs"] = pending["seqs"]
        self._append_log(entry)

    def _view_record(self, kind, rid):
        if self._pending is not None:
            for op in reversed(self._pending["ops"]):
                if op["op"] == "put" and op["record"]["kind"] == kind and op["record"]["id"] == rid:
                    return op["record"]
                if op["op"] == "del" and op["kind"] == kind and op["id"] == rid:
                    return None
        return self._state["tables"][kind].get(rid)

    def _next_id(self, kind):
        seqs = dict(self._state["meta"]["seq"])
        if self._pending is not None:
            seqs.update(self._pending["seqs"])
        n = seqs.get(kind, 0) + 1
        return f"{ID_PREFIX[kind]}-{n:04d}", {kind: n}

    # -- public API --------------------------------------------------------
    def get(self, kind, rid):
        if kind not in LIFECYCLES:
            raise errors.DatastoreError(f"unknown table {kind!r}")
        if not isinstance(rid, str):
            return None
        with self._lock:
            rec = self._view_record(kind, rid)
            return Resource.from_record(rec) if rec is not None else None

    def find(self, kind, **match):
        with self._lock:
            ids = set(self._state["tables"][kind])
            if self._pending is not None:
                ids.update(op["record"]["id"] for op in self._pending["ops"] if op["op"] == "put" and op["record"]["kind"] == kind)
            found = []
            for rid in sorted(ids):
                res = self.get(kind, rid)
                if res is None:
                    continue
                view = res.view()
                if all(view.get(k) == v for k, v in match.items()):
                    found.append(res)
            return found

    def create(self, kind, name, state, attributes=None):
        if kind not in LIFECYCLES:
            raise errors.DatastoreError(f"unknown table {kind!r}")
        if not is_legal_initial(kind, state):
            raise errors.IllegalTransition(f"{kind} cannot be created in state {state!r}")
        with self._lock:
            rid, seq = self._next_id(kind)
            res = Resource(rid, kind, name, state, self.owner_round, dict(attributes or {}))
            self._write({"op": "put", "record": res.to_record()}, seq)
            return res

    def update(self, kind, rid, state=None, **attributes):
        with self._lock:
            current = self.get(kind, rid)
            if current is None:
                raise errors.DatastoreError(f"{kind} {rid!r} does not exist")
            if state is not None:
                if not isinstance(state, str) or not is_legal_transition(kind, current.state, state):
                    raise errors.IllegalTransition(f"{kind} {rid}: {current.state} -> {state!r} is not a declared transition")
                current.state = state
            current.attributes.update(attributes)
            self._write({"op": "put", "record": current.to_record()})
            return current

    def delete(self, kind, rid):
        self._write({"op": "del", "kind": kind, "id": rid})

    # -- snapshot / restore -----------------------------------------------
    def dump(self):
        """Canonical bytes of the committed state."""
        with self._lock:
            return _canonical(self._state)

    def digest(self):
        return hashlib.sha256(self.dump()).hexdigest()

    def snapshot(self):
        with self._lock:
            return encode_snapshot(self._state)

    def restore(self, blob):
        state = decode_snapshot(blob)
        with self._lock:
            self.close()
            if self.directory:
                tmp = self._path(SNAPSHOT_FILE + ".tmp")
                with open(tmp, "wb") as fh:
                    fh.write(blob)
                os.replace(tmp, self._path(SNAPSHOT_FILE))
                with open(self._path(TXLOG_FILE), "wb"):
                    pass
            self._state = state
            self._pending = None

    def table_names(self):
        return sorted(self._state["tables"])
