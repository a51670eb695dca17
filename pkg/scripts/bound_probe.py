#!/usr/bin/env python3
"""Smallest field order that makes every t-column subset full rank, per (n, t).

    python scripts/bound_probe.py --n 2-12 --t 1-4 --qmax 64 --out bounds.csv
"""
import argparse
import sys

from npst.cli import _int_list, cmd_verify
from npst.gfield import prime_power


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="2-12")
    ap.add_argument("--t", default="1-4")
    ap.add_argument("--qmax", type=int, default=64)
    ap.add_argument("--convention", default="matrix")
    ap.add_argument("--out")
    args = ap.parse_args(argv)

    qs = [q for q in range(2, args.qmax + 1) if prime_power(q)]
    res = cmd_verify(_int_list(args.n), _int_list(args.t), qs, args.convention)
    _, summary = res.rows
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(res.output)
    for s in summary:
        mark = "  <- above n-t+1" if s["exceeds_bound_lower"] == "true" else ""
        print(f"n={s['n']:2d} t={s['t']} min q={s['min_passing_q']!s:>4} "
              f"bounds=[{s['bound_lower']}, {s['bound_upper']}]{mark}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
