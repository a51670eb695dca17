"""Vandermonde-style protection code: coefficients, encoding, erasure decoding.

Row ``j`` (1-based) of the coefficient matrix holds the coefficients used for
the j-th protection path of a round; column ``i`` belongs to connection L_i.
With the default ``matrix`` convention entry[j][i] = alpha^((i-1)(j-1)); the
``shifted`` convention uses alpha^(i(j-1)) instead.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Mapping, Sequence

from .gfield import FieldElement, FieldSpec, SingularMatrixError, _row_reduce, gaussian_solve

CONVENTIONS = ("matrix", "shifted")


class UnrecoverableError(ArithmeticError):
    """Fewer independent equations than lost data units."""


class DataCorruptionError(ArithmeticError):
    """Received equations are mutually inconsistent."""


@dataclass(frozen=True)
class ProtectionMatrix:
    entries: tuple[tuple[FieldElement, ...], ...]
    n: int
    t: int
    field: FieldSpec
    convention: str = "matrix"

    def coeff(self, row: int, col: int) -> FieldElement:
        """1-based access: row = protection slot, col = connection index."""
        return self.entries[row - 1][col - 1]

    def as_ints(self) -> list[list[int]]:
        return [[e.value for e in row] for row in self.entries]


def build_coefficient_matrix(n: int, t: int, field: FieldSpec, convention: str = "matrix") -> ProtectionMatrix:
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if t >= n:
        raise ValueError(f"t must be < n (t={t}, n={n})")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    shift = 0 if convention == "matrix" else 1
    rows = tuple(
        tuple(FieldElement(field.alpha_pow((i - 1 + shift) * (j - 1)), field) for i in range(1, n + 1))
        for j in range(1, t + 1)
    )
    return ProtectionMatrix(rows, n, t, field, convention)


def protection_window(n: int, t: int, round_index: int) -> tuple[int, ...]:
    """Ordered protection paths of a round: t consecutive indices, wrapping mod n."""
    if not 1 <= t < n:
        raise ValueError(f"need 1 <= t < n, got n={n}, t={t}")
    if round_index < 1:
        raise ValueError(f"rounds are numbered from 1, got {round_index}")
    start = (round_index - 1) * t
    return tuple((start + k) % n + 1 for k in range(t))


def encode_round(
    matrix: ProtectionMatrix,
    round_index: int,
    data: Mapping[int, FieldElement],
) -> list[FieldElement]:
    """Coded units for one round, in protection-window order.

    The k-th path of the round's protection window carries the y computed with
    matrix row k.  ``data`` maps every working index to its plain unit.
    """
    protection = protection_window(matrix.n, matrix.t, round_index)
    if overlap := set(protection) & set(data):
        raise ValueError(f"data supplied for protection paths {sorted(overlap)}")
    working = [i for i in range(1, matrix.n + 1) if i not in protection]
    if missing := [i for i in working if i not in data]:
        raise ValueError(f"missing data for working paths {missing}")
    f = matrix.field
    ys = []
    for row in matrix.entries:
        acc = 0
        for i in working:
            acc = f.add_int(acc, f.mul_int(row[i - 1].value, data[i].value))
        ys.append(FieldElement(acc, f))
    return ys


def decode(
    matrix: ProtectionMatrix,
    round_index: int,
    received_plain: Mapping[int, FieldElement],
    received_y: Mapping[int, FieldElement],
    lost_working: Sequence[int],
) -> dict[int, FieldElement]:
    """Recover the lost working units of one round.

    ``received_y`` is keyed by protection path index.  Equations are taken
    lowest protection slot first; any equation dependent on those already
    chosen is skipped.  The solution is
    checked against every received equation before it is returned.
    """
    protection = protection_window(matrix.n, matrix.t, round_index)
    lost = sorted(lost_working)
    if not lost:
        return {}
    if bad := set(lost) & set(protection):
        raise ValueError(f"protection paths {sorted(bad)} listed as lost working units")
    if bad := set(received_y) - set(protection):
        raise ValueError(f"coded units received on non-protection paths {sorted(bad)}")
    if len(lost) > len(received_y):
        raise UnrecoverableError(f"{len(lost)} unknowns but only {len(received_y)} coded units received")
    working = [i for i in range(1, matrix.n + 1) if i not in protection]
    if missing := [i for i in working if i not in lost and i not in received_plain]:
        raise ValueError(f"working units {missing} neither received nor marked lost")

    f = matrix.field
    k = len(lost)
    # each received y gives  sum_{lost} a_i x_i = y - sum_{received} a_i x_i
    system = []
    for slot, path in enumerate(protection, start=1):
        if path not in received_y:
            continue
        row = matrix.entries[slot - 1]
        rhs = received_y[path].value
        for i in working:
            if i in received_plain:
                rhs = f.add_int(rhs, f.neg_int(f.mul_int(row[i - 1].value, received_plain[i].value)))
        system.append(([row[i - 1].value for i in lost], rhs))

    chosen: list[tuple[list[int], int]] = []
    for coeffs, rhs in system:
        trial = [list(c) for c, _ in chosen] + [list(coeffs)]
        if _row_reduce(trial, f, k) == len(trial):
            chosen.append((coeffs, rhs))
        if len(chosen) == k:
            break
    if len(chosen) < k:
        raise UnrecoverableError(
            f"received equations have rank {len(chosen)} in {k} unknowns {lost}")

    A = [[FieldElement(v, f) for v in coeffs] for coeffs, _ in chosen]
    b = [FieldElement(rhs, f) for _, rhs in chosen]
    try:
        x = gaussian_solve(A, b)
    except SingularMatrixError as exc:  # pragma: no cover - chosen rows are independent
        raise UnrecoverableError(str(exc)) from exc

    for coeffs, rhs in system:
        acc = 0
        for c, xi in zip(coeffs, x):
            acc = f.add_int(acc, f.mul_int(c, xi.value))
        if acc != rhs:
            raise DataCorruptionError("recovered values contradict a received coded unit")
    return dict(zip(lost, x))


@dataclass
class RecoverabilityReport:
    n: int
    t: int
    q: int
    all_full_rank: bool
    failing_subsets: list[tuple[int, ...]] = field(default_factory=list)
    subsets_checked: int = 0

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "q": self.q,
            "result": "pass" if self.all_full_rank else "fail",
            "subsets_checked": self.subsets_checked,
            "failing_subsets": [list(s) for s in self.failing_subsets],
        }

    def to_text(self) -> str:
        rec = self.to_record()
        failing = ";".join("{" + ",".join(map(str, s)) + "}" for s in self.failing_subsets)
        return (f"n={rec['n']} t={rec['t']} q={rec['q']} result={rec['result']} "
                f"subsets_checked={rec['subsets_checked']} failing_subsets={failing or '-'}")


def verify_recoverability(matrix: ProtectionMatrix) -> RecoverabilityReport:
    """Brute-force rank check of every t x t column submatrix."""
    f = matrix.field
    cols = [[row[i].value for row in matrix.entries] for i in range(matrix.n)]
    failing, checked = [], 0
    for subset in combinations(range(matrix.n), matrix.t):
        checked += 1
        sub = [[cols[i][j] for i in subset] for j in range(matrix.t)]
        if _row_reduce(sub, f, matrix.t) < matrix.t:
            failing.append(tuple(i + 1 for i in subset))
    return RecoverabilityReport(matrix.n, matrix.t, f.q, not failing, failing, checked)


def undecodable_patterns(matrix: ProtectionMatrix, max_failures: int | None = None) -> list[tuple[int, tuple[int, ...]]]:
    """Every ``(round, failed_paths)`` erasure pattern the decoder cannot solve.

    Covers all failed-path sets of size <= ``max_failures`` (default t) in each
    round of one session.  Unlike :func:`verify_recoverability` this accounts
    for lost protection paths, which leave only a subset of matrix rows.
    """
    n, t, f = matrix.n, matrix.t, matrix.field
    limit = t if max_failures is None else max_failures
    length = n // gcd(n, t)
    bad = []
    for j in range(1, length + 1):
        prot = protection_window(n, t, j)
        for size in range(1, limit + 1):
            for failed in combinations(range(1, n + 1), size):
                lost = [i for i in failed if i not in prot]
                if not lost:
                    continue
                rows = [[matrix.entries[k][i - 1].value for i in lost]
                        for k, path in enumerate(prot) if path not in failed]
                if len(rows) < len(lost) or _row_reduce(rows, f, len(lost)) < len(lost):
                    bad.append((j, failed))
    return bad


def field_size_bounds(n: int, t: int) -> tuple[int, int]:
    """Published field-size bounds ``(n - t + 1, 2^ceil(log2(n + 1)))``.

    These are reported as stated; :func:`verify_recoverability` measures what
    a given field actually achieves.
    """
    if not 1 <= t < n:
        raise ValueError(f"need 1 <= t < n, got n={n}, t={t}")
    return n - t + 1, 1 << n.bit_length()
