#!/usr/bin/env python3
"""Verification report for every bundle; exits 5 if any check fails."""
import argparse
import sys

from flagloop.flagdata import BUNDLE_IDS
from flagloop.verify import verify_bundle

CUTOFFS = {"su3-diagonal": 10, "sp2-diagonal": 10, "g2-diagonal": 12,
           "su3-eval": 12, "sp2-eval": 12, "g2-eval": 14}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quiet", action="store_true", help="only print non-PASS lines")
    args = ap.parse_args()
    ok = True
    for b in BUNDLE_IDS:
        rep = verify_bundle(b, CUTOFFS[b])
        print(f"== {b} (cutoff {rep.cutoff}): {'OK' if rep.ok else 'FAILED'}")
        for c in rep.checks:
            if not args.quiet or c.status != "PASS":
                print("  " + c.line())
        ok = ok and rep.ok
    sys.exit(0 if ok else 5)


if __name__ == "__main__":
    main()
