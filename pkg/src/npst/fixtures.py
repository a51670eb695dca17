"""Small reference networks used by tests, scripts and the example scenarios."""
from __future__ import annotations

from typing import Mapping, Sequence

from .topology import RECEIVER, RELAY, SOURCE, Network, build_network


def _assemble(paths: Sequence[Sequence[str]], extra_relays: Sequence[str] = ()) -> Network:
    nodes = {}
    edges = []
    for seq in paths:
        nodes[seq[0]] = SOURCE
        nodes[seq[-1]] = RECEIVER
        for w in seq[1:-1]:
            nodes[w] = RELAY
        edges.extend(zip(seq, seq[1:]))
    for w in extra_relays:
        nodes.setdefault(w, RELAY)
    return build_network(nodes, edges, paths)


def fig1_network(extended: bool = False) -> Network:
    """Three connections crossing relay n5.

    ``extended`` adds a fourth connection (through n1 and n6, avoiding n5) so
    that a t = 3 protection scheme with t < n is possible.
    """
    paths = [
        ["s1", "n1", "n5", "n6", "r1"],
        ["s2", "n2", "n5", "n7", "r2"],
        ["s3", "n3", "n4", "n5", "n8", "r3"],
    ]
    if extended:
        paths.append(["s4", "n1", "n6", "r4"])
    return _assemble(paths)


def chain_network() -> Network:
    """Five connections; relay c is on L_2 and L_4, relay e on L_1 and L_3, all others on one path."""
    paths = [
        ["s1", "a1", "e", "b1", "r1"],
        ["s2", "a2", "c", "b2", "r2"],
        ["s3", "a3", "e", "b3", "r3"],
        ["s4", "a4", "c", "b4", "r4"],
        ["s5", "a5", "b5", "r5"],
    ]
    return _assemble(paths)


def parallel_network(n: int) -> Network:
    """n connections s_i - w_i - r_i sharing nothing."""
    return _assemble([[f"s{i}", f"w{i}", f"r{i}"] for i in range(1, n + 1)])


def crossing_network(n: int, crossings: Mapping[str, Sequence[int]]) -> Network:
    """n connections where each named relay is shared by the listed paths.

    A private relay separates consecutive hops, so the paths stay link-disjoint
    whatever crossings are requested.  Shared relays are visited in the order
    of ``crossings``.
    """
    paths = []
    for i in range(1, n + 1):
        hubs = [h for h, members in crossings.items() if i in members]
        seq = [f"s{i}"]
        for k, h in enumerate(hubs):
            seq += [f"p{i}_{k}", h]
        seq += [f"p{i}_{len(hubs)}", f"r{i}"]
        paths.append(seq)
    return _assemble(paths, extra_relays=[h for h, m in crossings.items() if not m])
