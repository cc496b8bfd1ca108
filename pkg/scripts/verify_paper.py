"""Run the reproduction suite and optionally write a JSON report.

    python scripts/verify_paper.py [--jobs N] [--only C03,C07] [--json out.json]
"""
import argparse
import json
import sys

from bipolar_agg.scenarios import verify_paper


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--only", help="comma-separated claim ids")
    ap.add_argument("--json")
    ns = ap.parse_args()
    only = set(ns.only.split(",")) if ns.only else None
    report = verify_paper(jobs=ns.jobs, only=only)
    sys.stdout.write(report.render())
    if ns.json:
        with open(ns.json, "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh, indent=2)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
