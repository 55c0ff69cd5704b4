"""Run a verification campaign and write its report.

    python3 scripts/run_campaign.py [campaign.json] [--out runs/default] [--workers 4]
"""
import argparse
import sys
from pathlib import Path

from nivat2d.verifier import CampaignSpec, emit_report, run_campaign

HERE = Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("campaign", nargs="?", default=str(HERE / "default_campaign.json"))
    ap.add_argument("--out", default="runs/default")
    ap.add_argument("--workers", type=int, default=None, help="defaults to $NIVAT_WORKERS or 1")
    args = ap.parse_args()

    spec = CampaignSpec.load(args.campaign)
    report = run_campaign(spec, workers=args.workers)
    written = emit_report(report, args.out)
    failed = 0
    for e in report.entries:
        if not e.passed:
            failed += 1
        print(f"{'ok  ' if e.passed else 'FAIL'} {e.index:03d} {e.name}"
              + "".join(f"  {c.check}={'ok' if c.passed else 'FAIL'}" for c in e.checks))
    print(f"{len(report.entries)} entries, {failed} failed, {report.wall_time:.1f}s, {len(written)} files in {args.out}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
