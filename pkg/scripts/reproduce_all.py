#!/usr/bin/env python3
"""Regenerate every table and figure dataset at full-scale sample counts.

    python scripts/reproduce_all.py --out results --seed 0 --threads 8
"""
import argparse
import sys
import time

from spectpd import cli
from spectpd.config import EXPERIMENTS


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--out", default="results")
    p.add_argument("--seed", default="0")
    p.add_argument("--threads", default="4")
    p.add_argument("--only", nargs="*", choices=EXPERIMENTS)
    args = p.parse_args()
    for name in args.only or EXPERIMENTS:
        t0 = time.perf_counter()
        code = cli.main([name, "--out", args.out, "--seed", args.seed, "--threads", args.threads, "-q"])
        print(f"{name:<13} exit={code} {time.perf_counter() - t0:6.1f}s")
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
