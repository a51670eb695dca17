"""Round scheduling, packets, failure injection and session execution."""
from __future__ import annotations

import logging
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .gfield import FieldElement
from .protcode import (
    DataCorruptionError,
    ProtectionMatrix,
    UnrecoverableError,
    decode,
    encode_round,
    protection_window,
)
from .topology import Network, node_relay_degree, paths_through

log = logging.getLogger(__name__)

WORKING_ONLY = "working-only"
PROTECTION_ONLY = "protection-only"
MIXED = "mixed"
NO_FAILURE = "no-failure"
CASES = (WORKING_ONLY, PROTECTION_ONLY, MIXED, NO_FAILURE)

CSV_HEADER = ("n", "t", "q", "node", "d", "case_counts", "capacity_num", "capacity_den", "recovered_all")


class UnprotectableError(ValueError):
    """A node failure takes down more connections than t protection paths cover."""


@dataclass(frozen=True)
class RoundWindow:
    index: int
    protection: tuple[int, ...]
    working: tuple[int, ...]


@dataclass(frozen=True)
class RoundPlan:
    n: int
    t: int
    rounds: tuple[RoundWindow, ...]

    @property
    def session_length(self) -> int:
        return len(self.rounds)

    def window(self, round_index: int) -> RoundWindow:
        return self.rounds[round_index - 1]


def schedule_rounds(n: int, t: int) -> RoundPlan:
    """Rotate protection duty in blocks of t consecutive paths, wrapping mod n.

    A session lasts lcm(n, t) / t rounds, after which every path has carried
    coded data equally often (exactly once when t divides n).
    """
    if not 1 <= t < n:
        raise ValueError(f"need 1 <= t < n, got n={n}, t={t}")
    length = math.lcm(n, t) // t
    rounds = []
    for j in range(1, length + 1):
        prot = protection_window(n, t, j)
        work = tuple(i for i in range(1, n + 1) if i not in prot)
        rounds.append(RoundWindow(j, prot, work))
    return RoundPlan(n, t, tuple(rounds))


@dataclass(frozen=True)
class Packet:
    source_id: str
    path: int
    kind: str  # "plain" | "coded"
    payload: FieldElement
    round_tag: tuple[int, int]  # (round, session)


def make_packets(
    plan: RoundPlan,
    round_index: int,
    matrix: ProtectionMatrix,
    data: Mapping[int, FieldElement],
    session: int = 1,
    source_ids: Sequence[str] | None = None,
) -> list[Packet]:
    """One packet per connection, ordered by path index.

    Coded payloads assume the sources have already pooled their data units.
    """
    if (matrix.n, matrix.t) != (plan.n, plan.t):
        raise ValueError("matrix and plan disagree on (n, t)")
    win = plan.window(round_index)
    if set(data) != set(win.working):
        raise ValueError(f"round {round_index} data covers {sorted(data)}, working set is {list(win.working)}")
    ids = source_ids or [f"s{i}" for i in range(1, plan.n + 1)]
    ys = dict(zip(win.protection, encode_round(matrix, round_index, data)))
    tag = (round_index, session)
    out = []
    for i in range(1, plan.n + 1):
        if i in ys:
            out.append(Packet(ids[i - 1], i, "coded", ys[i], tag))
        else:
            out.append(Packet(ids[i - 1], i, "plain", data[i], tag))
    return out


@dataclass(frozen=True)
class FailureScenario:
    failed_node: str | None
    failed_paths: frozenset
    active_from: int = 1

    @classmethod
    def none(cls) -> FailureScenario:
        return cls(None, frozenset())

    def active(self, round_number: int) -> bool:
        return bool(self.failed_paths) and round_number >= self.active_from


def inject_node_failure(net: Network, node: str, plan: RoundPlan, active_from: int = 1) -> FailureScenario:
    d = node_relay_degree(net, node)
    if d > plan.t:
        raise UnprotectableError(f"relay {node!r} carries {d} connections but only t={plan.t} are protected")
    if active_from < 1:
        raise ValueError("active_from counts rounds from 1")
    return FailureScenario(node, frozenset(paths_through(net, node)), active_from)


def classify_failure_case(scenario: FailureScenario, plan: RoundPlan, round_index: int,
                          round_number: int | None = None) -> str:
    """Label a round by where the failed connections sit in its schedule.

    ``round_number`` is the running round count used for ``active_from``; it
    defaults to ``round_index``.
    """
    if not scenario.active(round_index if round_number is None else round_number):
        return NO_FAILURE
    prot = set(plan.window(round_index).protection)
    failed = scenario.failed_paths
    if failed <= prot:
        return PROTECTION_ONLY
    if not failed & prot:
        return WORKING_ONLY
    return MIXED


@dataclass
class RoundRecord:
    session: int
    round: int
    case: str
    delivered: frozenset
    lost: frozenset
    recovered: frozenset
    decode_ok: bool
    solver_calls: int = 0
    sent: dict = field(default_factory=dict, repr=False)
    reconstructed: dict = field(default_factory=dict, repr=False)
    error: str | None = None


@dataclass
class SessionReport:
    n: int
    t: int
    q: int
    records: list[RoundRecord]
    offered: int
    delivered: int
    recovered: int
    measured_capacity: Fraction
    failed_node: str | None = None

    @property
    def all_decode_ok(self) -> bool:
        return all(r.decode_ok for r in self.records)

    @property
    def solver_calls(self) -> int:
        return sum(r.solver_calls for r in self.records)

    @property
    def case_counts(self) -> dict[str, int]:
        c = Counter(r.case for r in self.records)
        return {k: c.get(k, 0) for k in CASES}

    @property
    def lost_working(self) -> int:
        return sum(len(r.lost & set(r.sent)) for r in self.records)

    @property
    def recovery_status(self) -> str:
        lost = self.lost_working
        if lost == 0:
            return "none-needed"
        if self.recovered == lost and self.all_decode_ok:
            return "all"
        return "partial" if self.recovered else "none"

    def summary_line(self) -> str:
        return f"capacity={self.measured_capacity} recovered={self.recovery_status}"

    def to_text(self) -> str:
        lines = [f"n={self.n} t={self.t} q={self.q} failed_node={self.failed_node or '-'}"]
        for r in self.records:
            lines.append(
                f"session={r.session} round={r.round} case={r.case} "
                f"delivered={_fmt(r.delivered)} lost={_fmt(r.lost)} recovered={_fmt(r.recovered)} "
                f"decode_ok={str(r.decode_ok).lower()} solver_calls={r.solver_calls}"
                + (f" error={r.error!r}" if r.error else ""))
        lines.append(f"offered={self.offered} delivered={self.delivered} recovered={self.recovered}")
        return "\n".join(lines)

    def csv_row(self, d: int) -> dict:
        counts = ";".join(f"{k}:{v}" for k, v in self.case_counts.items())
        return {
            "n": self.n, "t": self.t, "q": self.q, "node": self.failed_node or "",
            "d": d, "case_counts": counts,
            "capacity_num": self.measured_capacity.numerator,
            "capacity_den": self.measured_capacity.denominator,
            "recovered_all": str(self.all_decode_ok).lower(),
        }


def _fmt(indices) -> str:
    return "{" + ",".join(map(str, sorted(indices))) + "}"


def run_session(
    net: Network,
    plan: RoundPlan,
    matrix: ProtectionMatrix,
    scenario: FailureScenario,
    data: Sequence[Mapping[int, int | FieldElement]] | None = None,
    seed: int | None = None,
    sessions: int = 1,
) -> SessionReport:
    """Execute ``sessions`` full sessions and account every data unit.

    Data is either explicit (one mapping per round, working index to value,
    covering every round of every session) or drawn uniformly from a
    ``random.Random(seed)`` stream.  Receivers pool whatever arrives and
    decode jointly.
    """
    if (matrix.n, matrix.t) != (plan.n, plan.t):
        raise ValueError("matrix and plan disagree on (n, t)")
    if net.n != plan.n:
        raise ValueError(f"network has {net.n} connections, plan expects {plan.n}")
    if not scenario.failed_paths <= set(range(1, plan.n + 1)):
        raise ValueError("scenario names paths outside 1..n")
    if len(scenario.failed_paths) > plan.t:
        raise UnprotectableError(f"{len(scenario.failed_paths)} failed connections exceed t={plan.t}")
    total_rounds = plan.session_length * sessions
    if data is not None and len(data) != total_rounds:
        raise ValueError(f"explicit data covers {len(data)} rounds, session needs {total_rounds}")

    f = matrix.field
    rng = random.Random(seed)
    ids = list(net.sources)
    records: list[RoundRecord] = []
    offered = delivered_units = recovered_units = 0
    step = 0
    for delta in range(1, sessions + 1):
        for win in plan.rounds:
            step += 1
            if data is None:
                sent = {i: FieldElement(rng.randrange(f.q), f) for i in win.working}
            else:
                given = data[step - 1]
                if set(given) != set(win.working):
                    raise ValueError(f"round {step}: data covers {sorted(given)}, working set is {list(win.working)}")
                sent = {i: v if isinstance(v, FieldElement) else FieldElement(v, f) for i, v in given.items()}
            packets = make_packets(plan, win.index, matrix, sent, delta, ids)
            case = classify_failure_case(scenario, plan, win.index, step)
            failed = scenario.failed_paths if case != NO_FAILURE else frozenset()

            arrived = [pk for pk in packets if pk.path not in failed]
            plain = {pk.path: pk.payload for pk in arrived if pk.kind == "plain"}
            coded = {pk.path: pk.payload for pk in arrived if pk.kind == "coded"}
            lost_working = sorted(set(win.working) & failed)

            recovered: dict[int, FieldElement] = {}
            ok, error, calls = True, None, 0
            if lost_working:
                calls = 1
                try:
                    recovered = decode(matrix, win.index, plain, coded, lost_working)
                except (UnrecoverableError, DataCorruptionError) as exc:
                    ok, error = False, str(exc)
                    log.warning("session %d round %d: %s", delta, win.index, exc)
            reconstructed = {**plain, **recovered}
            if ok and reconstructed != sent:
                ok, error = False, "reconstructed data differs from source data"

            offered += len(win.working)
            good_recovered = [i for i, v in recovered.items() if sent[i] == v]
            delivered_units += len(plain) + len(good_recovered)
            recovered_units += len(good_recovered)
            records.append(RoundRecord(
                delta, win.index, case,
                delivered=frozenset(pk.path for pk in arrived),
                lost=frozenset(failed),
                recovered=frozenset(recovered),
                decode_ok=ok,
                solver_calls=calls,
                sent={i: v.value for i, v in sent.items()},
                reconstructed={i: v.value for i, v in reconstructed.items()},
                error=error,
            ))

    capacity = Fraction(delivered_units, plan.n * total_rounds)
    return SessionReport(plan.n, plan.t, f.q, records, offered, delivered_units, recovered_units,
                         capacity, scenario.failed_node)
