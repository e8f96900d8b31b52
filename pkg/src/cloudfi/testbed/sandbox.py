"""Per-experiment sandbox directory layout."""

import os
import shutil
from dataclasses import dataclass


@dataclass(frozen=True)
class SandboxPaths:
    root: str

    @property
    def target(self):
        return os.path.join(self.root, "target")

    @property
    def package(self):
        return os.path.join(self.root, "target", "minicloud")

    @property
    def state(self):
        return os.path.join(self.root, "state")

    @property
    def logs(self):
        return os.path.join(self.root, "logs")

    @property
    def control(self):
        return os.path.join(self.root, "control")

    @property
    def trigger_log(self):
        return os.path.join(self.root, "triggers.tsv")

    @property
    def coverage(self):
        return os.path.join(self.root, "coverage.tsv")

    @property
    def stderr(self):
        return os.path.join(self.root, "host.stderr")

    def wipe(self):
        if os.path.exists(self.root):
            shutil.rmtree(self.root)
        os.makedirs(self.root)

    def install_snapshot(self, blob):
        """Put the datastore files in their pristine state."""
        os.makedirs(self.state, exist_ok=True)
        with open(os.path.join(self.state, "snapshot.json"), "wb") as fh:
            fh.write(blob)
        open(os.path.join(self.state, "txlog.jsonl"), "wb").close()
