"""Points catalog: one JSON record per line."""

import json

from .types import InjectionPoint


def write_catalog(path, points):
    with open(path, "w", encoding="utf-8") as fh:
        for p in points:
            fh.write(json.dumps(p.to_dict(), sort_keys=True) + "\n")


def read_catalog(path):
    with open(path, encoding="utf-8") as fh:
        return [InjectionPoint.from_dict(json.loads(line)) for line in fh if line.strip()]
