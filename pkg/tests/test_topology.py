from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from npst.fixtures import chain_network, crossing_network, fig1_network, parallel_network
from npst.topology import (
    PathActivity,
    TopologyError,
    build_network,
    max_relay_degree,
    node_relay_degree,
    normalized_capacity,
    paths_through,
)

from oracles import paths_touching


def test_fig1_relay_n5():
    net = fig1_network()
    assert net.n == 3
    assert node_relay_degree(net, "n5") == 3
    assert paths_through(net, "n5") == (1, 2, 3)
    assert max_relay_degree(net) == (3, frozenset({"n5"}))


def test_single_path():
    net = build_network({"s1": "source", "w": "relay", "r1": "receiver"},
                        [("s1", "w"), ("w", "r1")], [["s1", "w", "r1"]])
    assert net.n == 1
    assert node_relay_degree(net, "w") == 1


def test_shared_edge_rejected():
    nodes = {"s1": "source", "s2": "source", "r1": "receiver", "r2": "receiver", "a": "relay", "b": "relay"}
    edges = [("s1", "a"), ("s2", "a"), ("a", "b"), ("b", "r1"), ("b", "r2")]
    with pytest.raises(TopologyError, match="link-disjoint"):
        build_network(nodes, edges, [["s1", "a", "b", "r1"], ["s2", "a", "b", "r2"]])


@pytest.mark.parametrize("nodes,edges,paths,msg", [
    ({"s1": "source", "r1": "receiver", "r2": "receiver"}, [("s1", "r1")], [["s1", "r1"]], r"\|S\|"),
    ({"s1": "source", "r1": "receiver", "w": "relay"}, [("s1", "w")], [["s1", "w", "r1"]], "not an edge"),
    ({"s1": "source", "r1": "receiver", "w": "relay"}, [("w", "s1"), ("s1", "r1")], [["w", "s1", "r1"]],
     "not a source"),
    ({"s1": "source", "r1": "receiver", "w": "relay"}, [("s1", "w"), ("w", "r1")], [["s1", "w"]],
     "not a receiver"),
    ({"s1": "source", "r1": "receiver"}, [("s1", "x")], [["s1", "r1"]], "unknown node"),
])
def test_invalid_networks(nodes, edges, paths, msg):
    with pytest.raises(TopologyError, match=msg):
        build_network(nodes, edges, paths)


def test_chain_relay_on_two_and_four():
    net = chain_network()
    assert node_relay_degree(net, "c") == 2
    assert paths_through(net, "c") == (2, 4)
    assert max_relay_degree(net) == (2, frozenset({"c", "e"}))
    for u in net.relays:
        expected = paths_touching([p.nodes for p in net.paths], u)
        assert set(paths_through(net, u)) == expected


def test_isolated_relay():
    net = crossing_network(3, {"idle": []})
    assert node_relay_degree(net, "idle") == 0
    assert paths_through(net, "idle") == ()


def test_parallel_paths_degree_one():
    net = parallel_network(4)
    d0, nodes = max_relay_degree(net)
    assert d0 == 1 and nodes == frozenset(net.relays)


def test_not_a_relay():
    net = parallel_network(2)
    with pytest.raises(TopologyError):
        node_relay_degree(net, "s1")
    with pytest.raises(TopologyError):
        paths_through(net, "r2")


def test_no_relays():
    net = build_network({"s1": "source", "r1": "receiver"}, [("s1", "r1")], [["s1", "r1"]])
    with pytest.raises(TopologyError):
        max_relay_degree(net)


def test_capacity_examples():
    assert normalized_capacity(PathActivity.all_active(4)) == 1
    assert normalized_capacity(PathActivity.with_failed(4, [2])) == Fraction(3, 4)
    assert normalized_capacity([False] * 4) == 0


@given(st.lists(st.booleans(), min_size=1, max_size=12), st.integers(0, 11))
def test_capacity_monotone(flags, k):
    c = normalized_capacity(flags)
    assert c == Fraction(sum(flags), len(flags))
    k %= len(flags)
    raised = list(flags)
    raised[k] = True
    assert normalized_capacity(raised) >= c


@st.composite
def crossing_specs(draw):
    n = draw(st.integers(1, 8))
    hubs = draw(st.dictionaries(st.sampled_from([f"h{k}" for k in range(6)]),
                                st.sets(st.integers(1, n), max_size=n).map(sorted), max_size=5))
    return n, hubs


@given(crossing_specs())
def test_network_invariants(spec):
    n, hubs = spec
    net = crossing_network(n, hubs)
    all_edges = [e for p in net.paths for e in p.edges]
    assert len(all_edges) == len(set(all_edges))
    for u in net.relays:
        d = node_relay_degree(net, u)
        assert d == len(paths_through(net, u))
        assert d <= net.graph_degree(u) // 2
    for h, members in hubs.items():
        assert set(paths_through(net, h)) == set(members)
