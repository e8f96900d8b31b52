"""Dataset manifest, rewritten atomically at every phase boundary."""

import datetime as _dt
import json
import os

import cloudfi

MANIFEST = "manifest.json"
MANIFEST_FORMAT = "cloudfi-manifest/1"


class ManifestMismatch(Exception):
    pass


def _now():
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


class Manifest:
    def __init__(self, directory, config_hash, data=None):
        self.directory = directory
        self.data = data or {
            "format": MANIFEST_FORMAT,
            "tool_version": cloudfi.__version__,
            "config_hash": config_hash,
            "phases": {},
            "counts": {"points_scanned": 0, "points_covered": 0, "experiments_completed": 0, "experiments_invalid": 0},
        }

    @property
    def path(self):
        return os.path.join(self.directory, MANIFEST)

    @classmethod
    def load(cls, directory):
        with open(os.path.join(directory, MANIFEST), encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("format") != MANIFEST_FORMAT:
            raise ValueError(f"{directory}: not a campaign dataset")
        return cls(directory, data["config_hash"], data)

    @classmethod
    def open(cls, directory, config_hash, resume=False):
        if resume:
            m = cls.load(directory)
            if m.data["config_hash"] != config_hash:
                raise ManifestMismatch(f"configuration hash {config_hash[:12]} differs from the dataset's {m.data['config_hash'][:12]}")
            return m
        os.makedirs(directory, exist_ok=True)
        return cls(directory, config_hash)

    def phase(self, name, state):
        self.data["phases"].setdefault(name, {})[state] = _now()
        self.save()

    def set_counts(self, **counts):
        self.data["counts"].update(counts)
        self.save()

    def save(self):
        tmp = self.path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(self.data, fh, indent=1, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, self.path)
