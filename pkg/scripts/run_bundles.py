#!/usr/bin/env python3
"""Run every named bundle and write its E_infinity table as JSON."""
import argparse
import json
import os
import time

from flagloop.flagdata import BUNDLE_IDS, load_bundle
from flagloop.spectral import run

CUTOFFS = {"su3-diagonal": 10, "sp2-diagonal": 10, "g2-diagonal": 12,
           "su3-eval": 12, "sp2-eval": 12, "g2-eval": 22}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="tables", help="output directory")
    ap.add_argument("--cutoff", type=int, help="override every cutoff")
    ap.add_argument("--mod", type=int, help="coefficients F_p")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for b in BUNDLE_IDS:
        N = args.cutoff or CUTOFFS[b]
        t0 = time.perf_counter()
        table = run(load_bundle(b, N, args.mod).fibration, jobs=args.jobs)
        suffix = f"-F{args.mod}" if args.mod else ""
        path = os.path.join(args.out, f"{b}-{N}{suffix}.json")
        with open(path, "w") as fh:
            json.dump(table.to_dict(), fh, indent=2, sort_keys=True)
        ranks = " ".join(str(r) for r in table.ranks())
        print(f"{b:<13} cutoff {N:<3} {time.perf_counter() - t0:6.2f}s  ranks {ranks}  -> {path}")


if __name__ == "__main__":
    main()
