#!/usr/bin/env python3
"""A small seeded campaign followed by the analysis tables.

Scans minicloud, runs the coverage pass, samples ``--limit`` covered points,
runs one experiment per point and then prints the failure distribution, the
propagation graph of the faulty round and where the report files went.

    python3 demos/campaign_report.py --limit 40 --jobs 2 --out /tmp/cf-demo
"""

import argparse
import os

from cloudfi.analyzer import aggregate, summary_text, write_report
from cloudfi.orchestrator import CampaignConfig, load_dataset, run_campaign
from cloudfi.workload import FAULTY


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", required=True)
    ap.add_argument("--limit", type=int, default=40)
    ap.add_argument("--jobs", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    config = CampaignConfig(seed=args.seed, jobs=args.jobs)
    dataset = os.path.join(args.out, "dataset")
    manifest = run_campaign(config, dataset, limit=args.limit)
    counts = manifest.data["counts"]
    print(f"{counts['points_scanned']} points scanned, {counts['points_covered']} covered by the workload, "
          f"{counts['experiments_completed']} experiments completed, {counts['experiments_invalid']} invalid\n")

    report = aggregate(load_dataset(dataset))
    print(summary_text(report))
    print(report.graphs[FAULTY].to_dot())
    out = write_report(report, os.path.join(args.out, "report"))
    print(f"CSV tables and DOT graphs in {out}")


if __name__ == "__main__":
    main()
