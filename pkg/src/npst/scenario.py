"""Scenario documents (YAML) and their validated in-memory form.

Schema::

    field: {p: 5, r: 1}            # poly: [c0, c1, ..., cr] little-endian, optional
    t: 1
    convention: matrix             # or shifted
    sessions: 1
    nodes:
      sources: [s1, s2, s3]
      receivers: [r1, r2, r3]
      relays: [w1, w2, w3]
    edges: [[s1, w1], [w1, r1], ...]
    paths: [[s1, w1, r1], ...]     # node sequences; order fixes L_1..L_n
    failure: {node: w2, active_from: 1}   # or null
    data: {seed: 7}                # or {rounds: [{2: 3, 3: 4}, ...]}
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import yaml

from .gfield import FieldError, FieldSpec, make_field
from .npsim import FailureScenario, RoundPlan, inject_node_failure, schedule_rounds
from .protcode import CONVENTIONS, ProtectionMatrix, build_coefficient_matrix
from .topology import RECEIVER, RELAY, SOURCE, Network, TopologyError, build_network


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    field: FieldSpec
    network: Network
    t: int
    failure_node: str | None = None
    active_from: int = 1
    seed: int | None = 0
    rounds: tuple | None = None  # explicit per-round data, as {index: int} dicts
    convention: str = "matrix"
    sessions: int = 1

    def __post_init__(self):
        if self.failure_node is None:
            # onset is meaningless without a failure
            object.__setattr__(self, "active_from", 1)

    @property
    def n(self) -> int:
        return self.network.n

    def plan(self) -> RoundPlan:
        return schedule_rounds(self.n, self.t)

    def matrix(self) -> ProtectionMatrix:
        return build_coefficient_matrix(self.n, self.t, self.field, self.convention)

    def failure(self, node: str | None = None) -> FailureScenario:
        node = self.failure_node if node is None else node
        if node is None:
            return FailureScenario.none()
        return inject_node_failure(self.network, node, self.plan(), self.active_from)

    def with_failure(self, node: str | None, seed: int | None = None) -> Scenario:
        return Scenario(self.field, self.network, self.t, node, self.active_from,
                        self.seed if seed is None else seed, self.rounds, self.convention, self.sessions)


def _require(doc: dict, key: str) -> Any:
    if key not in doc:
        raise ScenarioError(f"missing required key {key!r}")
    return doc[key]


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a mapping")

    fdoc = _require(doc, "field")
    if not isinstance(fdoc, dict) or "p" not in fdoc:
        raise ScenarioError("malformed field spec: expected {p, r, poly?}")
    try:
        field = make_field(int(fdoc["p"]), int(fdoc.get("r", 1)), fdoc.get("poly"))
    except (FieldError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed field spec: {exc}") from exc

    ndoc = _require(doc, "nodes")
    roles = {}
    for key, role in (("sources", SOURCE), ("receivers", RECEIVER), ("relays", RELAY)):
        for name in ndoc.get(key) or []:
            name = str(name)
            if name in roles:
                raise ScenarioError(f"node {name!r} declared twice")
            roles[name] = role
    edges = [tuple(str(x) for x in e) for e in _require(doc, "edges")]
    paths = [[str(x) for x in p] for p in _require(doc, "paths")]
    try:
        net = build_network(roles, edges, paths)
    except TopologyError as exc:
        raise ScenarioError(str(exc)) from exc

    t = int(_require(doc, "t"))
    if t < 1:
        raise ScenarioError("t must be >= 1")
    if t >= net.n:
        raise ScenarioError(f"t must be < n (t={t}, n={net.n})")

    convention = doc.get("convention", "matrix")
    if convention not in CONVENTIONS:
        raise ScenarioError(f"unknown convention {convention!r}")
    sessions = int(doc.get("sessions", 1))
    if sessions < 1:
        raise ScenarioError("sessions must be >= 1")

    failure = doc.get("failure") or {}
    node = failure.get("node")
    node = None if node is None else str(node)
    active_from = int(failure.get("active_from", 1))

    ddoc = doc.get("data") or {"seed": 0}
    seed, rounds = None, None
    if "rounds" in ddoc:
        rounds = tuple({int(k): int(v) for k, v in r.items()} for r in ddoc["rounds"])
    else:
        seed = int(ddoc.get("seed", 0))

    sc = Scenario(field, net, t, node, active_from, seed, rounds, convention, sessions)
    # resolve references now so bad documents fail at parse time
    if node is not None:
        if node not in roles:
            raise ScenarioError(f"failure node {node!r} is not in the network")
        try:
            sc.failure()
        except (TopologyError, ValueError) as exc:
            raise ScenarioError(str(exc)) from exc
    if rounds is not None:
        plan = sc.plan()
        need = plan.session_length * sessions
        if len(rounds) != need:
            raise ScenarioError(f"explicit data has {len(rounds)} rounds, session needs {need}")
        for k, r in enumerate(rounds):
            win = plan.rounds[k % plan.session_length]
            if set(r) != set(win.working):
                raise ScenarioError(f"data round {k + 1} covers {sorted(r)}, working set is {list(win.working)}")
            if any(not 0 <= v < field.q for v in r.values()):
                raise ScenarioError(f"data round {k + 1} has values outside GF({field.q})")
    return sc


def parse_scenario(text: str) -> Scenario:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"not a valid scenario document: {exc}") from exc
    return scenario_from_dict(doc)


def scenario_to_dict(sc: Scenario) -> dict:
    net = sc.network
    by_role = {role: sorted(u for u, r in net.roles.items() if r == role) for role in (SOURCE, RECEIVER, RELAY)}
    doc = {
        "field": sc.field.describe(),
        "t": sc.t,
        "convention": sc.convention,
        "sessions": sc.sessions,
        "nodes": {"sources": by_role[SOURCE], "receivers": by_role[RECEIVER], "relays": by_role[RELAY]},
        "edges": sorted(sorted(e) for e in net.edges),
        "paths": [list(p.nodes) for p in net.paths],
        "failure": None if sc.failure_node is None else {"node": sc.failure_node, "active_from": sc.active_from},
        "data": {"rounds": [dict(r) for r in sc.rounds]} if sc.rounds is not None else {"seed": sc.seed},
    }
    return doc


def dump_scenario(sc: Scenario) -> str:
    return yaml.safe_dump(scenario_to_dict(sc), sort_keys=False, default_flow_style=None)


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        return parse_scenario(fh.read())
