#!/usr/bin/env python3
"""Write every named bundle as a fibration config file."""
import argparse
import os

from flagloop.config import dumps_spec
from flagloop.flagdata import BUNDLE_IDS, load_bundle


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="bundles", help="output directory")
    ap.add_argument("--cutoff", type=int, default=12)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for b in BUNDLE_IDS:
        path = os.path.join(args.out, f"{b}.ini")
        with open(path, "w") as fh:
            fh.write(dumps_spec(load_bundle(b, args.cutoff).fibration))
        print(path)


if __name__ == "__main__":
    main()
