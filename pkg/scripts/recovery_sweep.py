#!/usr/bin/env python3
"""Single-node failure sweep over the built-in fixtures, prime and binary fields.

Writes one CSV row per (fixture, field, relay, seed) and prints a per-field tally.

    python scripts/recovery_sweep.py --seeds 100 --out sweep.csv
"""
import argparse
import csv
import sys
from collections import Counter

from npst.fixtures import chain_network, crossing_network, fig1_network, parallel_network
from npst.gfield import is_prime, make_field
from npst.npsim import CSV_HEADER, inject_node_failure, run_session, schedule_rounds
from npst.protcode import build_coefficient_matrix
from npst.topology import node_relay_degree

FIXTURES = {
    "fig1": (fig1_network(extended=True), 3),
    "chain": (chain_network(), 2),
    "parallel6": (parallel_network(6), 2),
    "cross7": (crossing_network(7, {"h1": [1, 2, 3], "h2": [4, 5, 6], "h3": [2, 5, 7], "h4": [1, 7], "h5": [3, 6]}), 3),
    "cross10": (crossing_network(10, {"h1": [1, 4, 7], "h2": [2, 5, 8], "h3": [3, 6, 9], "h4": [1, 10],
                                      "h5": [2, 3, 10], "h6": [4, 9]}), 3),
}


def fields_for(n):
    p = next(q for q in range(n + 1, 10 ** 4) if is_prime(q))
    return [make_field(p), make_field(2, n.bit_length())]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.DictWriter(fh, fieldnames=("fixture",) + CSV_HEADER)
    writer.writeheader()
    tally = Counter()
    for name, (net, t) in FIXTURES.items():
        plan = schedule_rounds(net.n, t)
        for f in fields_for(net.n):
            m = build_coefficient_matrix(net.n, t, f)
            for u in net.relays:
                d = node_relay_degree(net, u)
                if d > t:
                    continue
                sc = inject_node_failure(net, u, plan)
                for seed in range(args.seeds):
                    rep = run_session(net, plan, m, sc, seed=seed)
                    writer.writerow({"fixture": name, **rep.csv_row(d)})
                    tally[(name, f.q, rep.all_decode_ok)] += 1
    if fh is not sys.stdout:
        fh.close()
    for (name, q, ok), k in sorted(tally.items()):
        print(f"{name:10s} GF({q:2d}) {'recovered' if ok else 'UNRECOVERED':12s} {k}", file=sys.stderr)
    return 0 if all(ok for (_, _, ok) in tally) else 1


if __name__ == "__main__":
    sys.exit(main())
