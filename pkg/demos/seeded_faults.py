#!/usr/bin/env python3
"""Walk through a handful of hand-picked injection points on minicloud.

For each point this runs one full experiment (faulty round with the
trigger on, fault-free round with it off) and prints what happened: the
failure class, whether the failure reached the second round, whether the
services logged it, and which subsystems it touched.

    python3 demos/seeded_faults.py
"""

import argparse
import tempfile

from cloudfi.analyzer import classify_record
from cloudfi.minicloud import Cloud
from cloudfi.mutation import default_scan_config, scan
from cloudfi.orchestrator import CampaignConfig, bundled_target, run_experiment

# (file, target call, bug type, operand) and what to look for
SEEDED = [
    ("compute/api.py", "activate_image", "MISSING_FUNC_CALL", None,
     "image never leaves QUEUED; boot still succeeds, so only the check notices"),
    ("compute/manager.py", "instance_update", "WRONG_RETURN_VALUE", 0,
     "compute hands back a bad reference; the volume attach is what breaks"),
    ("network/api.py", "subnet_create", "MISSING_PARAM", 4,
     "subnet creation is refused by the datastore"),
    ("network/api.py", "floating_ip_update", "MISSING_FUNC_CALL", None,
     "floating IP stays unbound without any API error"),
    ("network/api.py", "security_group_rule_create", "WRONG_PARAM_VALUE", 3,
     "ssh rule gets a corrupted port range"),
]


def pick(points, file, call, bug, operand):
    for p in points:
        if (p.file, p.target_call, p.bug_type.value, p.operand_index) == (file, call, bug, operand):
            return p
    raise LookupError(f"no {bug} point on {call} in {file}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--readiness-wait", type=float, default=0.5)
    args = ap.parse_args()

    config = CampaignConfig(readiness_wait=args.readiness_wait)
    points = scan(bundled_target(), default_scan_config())
    print(f"scanned {len(points)} injection points in minicloud\n")

    cloud = Cloud()
    snapshot = cloud.snapshot()
    cloud.close()

    with tempfile.TemporaryDirectory(prefix="cloudfi-demo-") as sandbox:
        for file, call, bug, operand, expect in SEEDED:
            point = pick(points, file, call, bug, operand)
            record, _ = run_experiment(point, config, snapshot, sandbox)
            print(f"{point.id}  {bug} on {call}() in {file}")
            print(f"  expected: {expect}")
            if not record.completed:
                print(f"  INVALID: {record.reason}\n")
                continue
            v = classify_record(record)
            first_err = next((e for e in record.trace_faulty.api_outcomes() if e.failed), None)
            failed = sorted({a.name for a in record.trace_faulty.assertions() if a.failed})
            print(f"  class {v.failure_class.value}, round {v.propagation_round.value}, logged {v.logged}")
            print(f"  failed checks {failed or '-'}; first API error {first_err.api_name if first_err else '-'}")
            if v.latency is not None:
                print(f"  latency {v.latency:.3f}s ({v.latency_category.value})")
            print(f"  spatial propagation: {v.spatial}\n")


if __name__ == "__main__":
    main()
