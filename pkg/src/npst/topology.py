"""Network model: sources, receivers, relays and n link-disjoint connections.

Paths are numbered 1..n in the order given to :func:`build_network`.  Edges are
undirected and stored as frozensets of two node names.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

SOURCE, RECEIVER, RELAY = "source", "receiver", "relay"
ROLES = (SOURCE, RECEIVER, RELAY)


class TopologyError(ValueError):
    pass


def edge(u: str, v: str) -> frozenset:
    return frozenset((u, v))


@dataclass(frozen=True)
class Path:
    index: int
    nodes: tuple[str, ...]

    @property
    def source(self) -> str:
        return self.nodes[0]

    @property
    def receiver(self) -> str:
        return self.nodes[-1]

    @property
    def edges(self) -> tuple[frozenset, ...]:
        return tuple(edge(a, b) for a, b in zip(self.nodes, self.nodes[1:]))


@dataclass(frozen=True)
class Network:
    roles: Mapping[str, str]
    edges: frozenset
    paths: tuple[Path, ...]

    @property
    def n(self) -> int:
        return len(self.paths)

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(p.source for p in self.paths)

    @property
    def receivers(self) -> tuple[str, ...]:
        return tuple(p.receiver for p in self.paths)

    @property
    def relays(self) -> tuple[str, ...]:
        return tuple(sorted(u for u, role in self.roles.items() if role == RELAY))

    def graph_degree(self, u: str) -> int:
        return sum(1 for e in self.edges if u in e)

    def path(self, index: int) -> Path:
        return self.paths[index - 1]


def build_network(
    nodes: Mapping[str, str],
    edges: Iterable[Sequence[str]],
    paths: Sequence[Sequence[str]],
) -> Network:
    """Validate and assemble a :class:`Network`.

    ``nodes`` maps node name to one of ``source``/``receiver``/``relay``;
    ``paths`` are node sequences, each running from a source to a receiver.
    """
    roles = dict(nodes)
    bad = {u: r for u, r in roles.items() if r not in ROLES}
    if bad:
        raise TopologyError(f"unknown node roles: {bad}")

    edge_set = set()
    for pair in edges:
        u, v = pair
        for w in (u, v):
            if w not in roles:
                raise TopologyError(f"edge ({u}, {v}) references unknown node {w!r}")
        if u == v:
            raise TopologyError(f"self-loop at {u!r}")
        edge_set.add(edge(u, v))

    n_src = sum(1 for r in roles.values() if r == SOURCE)
    n_rcv = sum(1 for r in roles.values() if r == RECEIVER)
    if n_src != n_rcv:
        raise TopologyError(f"|S| = {n_src} but |R| = {n_rcv}")
    if len(paths) != n_src:
        raise TopologyError(f"{len(paths)} paths given for {n_src} source/receiver pairs")

    built = []
    seen_edges: dict[frozenset, int] = {}
    for i, seq in enumerate(paths, start=1):
        seq = tuple(seq)
        if len(seq) < 2:
            raise TopologyError(f"path L_{i} has fewer than two nodes")
        for w in seq:
            if w not in roles:
                raise TopologyError(f"path L_{i} references unknown node {w!r}")
        if roles[seq[0]] != SOURCE:
            raise TopologyError(f"path L_{i} starts at {seq[0]!r}, which is not a source")
        if roles[seq[-1]] != RECEIVER:
            raise TopologyError(f"path L_{i} ends at {seq[-1]!r}, which is not a receiver")
        for w in seq[1:-1]:
            if roles[w] != RELAY:
                raise TopologyError(f"path L_{i} passes through non-relay {w!r}")
        p = Path(i, seq)
        for e in p.edges:
            if e not in edge_set:
                a, b = sorted(e)
                raise TopologyError(f"path L_{i} uses ({a}, {b}), which is not an edge")
            if e in seen_edges:
                a, b = sorted(e)
                raise TopologyError(
                    f"paths L_{seen_edges[e]} and L_{i} share edge ({a}, {b}); paths must be link-disjoint")
            seen_edges[e] = i
        built.append(p)

    for label, ends in (("source", [p.source for p in built]), ("receiver", [p.receiver for p in built])):
        dup = [u for u, c in Counter(ends).items() if c > 1]
        if dup:
            raise TopologyError(f"{label} {dup[0]!r} terminates more than one path")

    net = Network(roles, frozenset(edge_set), tuple(built))
    for u in net.relays:
        d, mu = node_relay_degree(net, u), net.graph_degree(u)
        if d > mu // 2:
            raise TopologyError(f"relay {u!r} has relay degree {d} > floor({mu}/2)")
    return net


def _require_relay(net: Network, u: str) -> None:
    if net.roles.get(u) != RELAY:
        raise TopologyError(f"{u!r} is not a relay node")


def paths_through(net: Network, u: str) -> tuple[int, ...]:
    """Indices (1-based, ascending) of the connections with an edge incident to ``u``."""
    _require_relay(net, u)
    return tuple(p.index for p in net.paths if u in p.nodes)


def node_relay_degree(net: Network, u: str) -> int:
    return len(paths_through(net, u))


def max_relay_degree(net: Network) -> tuple[int, frozenset]:
    """``(d0, nodes)`` where nodes is every relay attaining d0."""
    relays = net.relays
    if not relays:
        raise TopologyError("network has no relay nodes")
    degrees = {u: node_relay_degree(net, u) for u in relays}
    d0 = max(degrees.values())
    return d0, frozenset(u for u, d in degrees.items() if d == d0)


@dataclass(frozen=True)
class PathActivity:
    flags: tuple[bool, ...]

    @classmethod
    def all_active(cls, n: int) -> PathActivity:
        return cls((True,) * n)

    @classmethod
    def with_failed(cls, n: int, failed: Iterable[int]) -> PathActivity:
        failed = set(failed)
        return cls(tuple(i not in failed for i in range(1, n + 1)))


def normalized_capacity(activity: PathActivity | Sequence[bool]) -> Fraction:
    flags = activity.flags if isinstance(activity, PathActivity) else tuple(activity)
    if not flags:
        raise ValueError("normalized capacity needs n >= 1")
    return Fraction(sum(1 for c in flags if c), len(flags))
