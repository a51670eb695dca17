import random
from math import gcd
from itertools import combinations

import pytest

from npst.gfield import make_field
from npst.protcode import (
    DataCorruptionError,
    UnrecoverableError,
    build_coefficient_matrix,
    decode,
    encode_round,
    field_size_bounds,
    protection_window,
    undecodable_patterns,
    verify_recoverability,
)

from oracles import leibniz_det


def test_t1_is_all_ones(gf5):
    m = build_coefficient_matrix(4, 1, gf5)
    assert m.as_ints() == [[1, 1, 1, 1]]


def test_gf5_two_rows(gf5):
    m = build_coefficient_matrix(4, 2, gf5)
    assert m.as_ints() == [[1, 1, 1, 1], [pow(2, k, 5) for k in range(4)]]
    assert m.as_ints()[1] == [1, 2, 4, 3]


@pytest.mark.parametrize("n,t", [(3, 3), (3, 0), (2, 5)])
def test_bad_t(gf5, n, t):
    with pytest.raises(ValueError):
        build_coefficient_matrix(n, t, gf5)


def test_entry_formula_and_structure(small_field):
    f = small_field
    n = min(f.q - 1, 7)
    t = min(3, n - 1)
    m = build_coefficient_matrix(n, t, f)
    for j in range(1, t + 1):
        for i in range(1, n + 1):
            assert m.coeff(j, i) == f.primitive ** ((i - 1) * (j - 1))
    assert all(e == f.one for e in m.entries[0])
    assert all(row[0] == f.one for row in m.entries)
    # row j repeats with period (q-1)/gcd(j-1, q-1); row 2 is injective for n <= q-1
    for j, row in enumerate(m.entries[1:], start=2):
        period = (f.q - 1) // gcd(j - 1, f.q - 1)
        assert len({e.value for e in row}) == min(n, period)


def test_shifted_convention(gf5):
    m = build_coefficient_matrix(4, 2, gf5, convention="shifted")
    assert m.as_ints() == [[1, 1, 1, 1], [2, 4, 3, 1]]


def test_deterministic():
    a = build_coefficient_matrix(6, 3, make_field(2, 3))
    b = build_coefficient_matrix(6, 3, make_field(2, 3))
    assert a.as_ints() == b.as_ints()


def test_protection_window():
    assert protection_window(4, 2, 1) == (1, 2)
    assert protection_window(4, 2, 2) == (3, 4)
    assert protection_window(3, 2, 2) == (3, 1)


class TestEncode:
    def test_t1_sum(self, gf5):
        m = build_coefficient_matrix(3, 1, gf5)
        assert encode_round(m, 1, {2: gf5(3), 3: gf5(4)}) == [gf5(2)]

    def test_zero_data(self, gf8):
        m = build_coefficient_matrix(5, 2, gf8)
        assert encode_round(m, 1, {i: gf8(0) for i in (3, 4, 5)}) == [gf8(0), gf8(0)]

    def test_two_rows(self, gf5):
        m = build_coefficient_matrix(4, 2, gf5)
        assert encode_round(m, 1, {3: gf5(1), 4: gf5(1)}) == [gf5(2), gf5(2)]

    def test_rejects_protection_data(self, gf5):
        m = build_coefficient_matrix(3, 1, gf5)
        with pytest.raises(ValueError, match="protection"):
            encode_round(m, 1, {1: gf5(1), 2: gf5(3), 3: gf5(4)})

    def test_rejects_missing(self, gf5):
        m = build_coefficient_matrix(3, 1, gf5)
        with pytest.raises(ValueError, match="missing"):
            encode_round(m, 1, {2: gf5(3)})


class TestDecode:
    def test_t1(self, gf5):
        m = build_coefficient_matrix(3, 1, gf5)
        got = decode(m, 1, {3: gf5(4)}, {1: gf5(2)}, [2])
        assert got == {2: gf5(3)}
        # re-encode oracle
        assert encode_round(m, 1, {2: got[2], 3: gf5(4)}) == [gf5(2)]

    def test_nothing_lost(self, gf5):
        m = build_coefficient_matrix(3, 1, gf5)
        assert decode(m, 1, {2: gf5(1), 3: gf5(1)}, {}, []) == {}

    def test_two_unknowns(self, gf5):
        m = build_coefficient_matrix(4, 2, gf5)
        got = decode(m, 1, {}, {1: gf5(2), 2: gf5(2)}, [3, 4])
        assert got == {3: gf5(1), 4: gf5(1)}
        # substitution: [[1,1],[4,3]] x = [2,2]
        assert (1 * 1 + 1 * 1) % 5 == 2 and (4 * 1 + 3 * 1) % 5 == 2

    def test_underdetermined(self, gf5):
        m = build_coefficient_matrix(4, 2, gf5)
        with pytest.raises(UnrecoverableError):
            decode(m, 1, {}, {1: gf5(2)}, [3, 4])

    def test_inconsistent(self, gf5):
        m = build_coefficient_matrix(4, 2, gf5)
        # x3 = 1 from y1, but y2 disagrees
        with pytest.raises(DataCorruptionError):
            decode(m, 1, {4: gf5(1)}, {1: gf5(2), 2: gf5(0)}, [3])

    def test_lost_protection_rejected(self, gf5):
        m = build_coefficient_matrix(4, 2, gf5)
        with pytest.raises(ValueError):
            decode(m, 1, {}, {2: gf5(0)}, [1])

    def test_skips_dependent_equation(self):
        # GF(11), n=10, t=4, round 1 with y_2 lost: slots 1 and 3 restricted to
        # columns 5, 10 give [[1, 1], [a^8, a^18]], singular since a^5 = -1
        f = make_field(11)
        m = build_coefficient_matrix(10, 4, f)
        sub = [[m.coeff(1, 5), m.coeff(1, 10)], [m.coeff(3, 5), m.coeff(3, 10)]]
        det = leibniz_det(sub, lambda a, b: a + b, lambda a, b: a * b, lambda a: -a, f.zero, f.one)
        assert det == f.zero
        rng = random.Random(3)
        data = {i: f(rng.randrange(11)) for i in range(5, 11)}
        ys = dict(zip((1, 2, 3, 4), encode_round(m, 1, data)))
        del ys[2]
        plain = {i: v for i, v in data.items() if i not in (5, 10)}
        assert decode(m, 1, plain, ys, [5, 10]) == {5: data[5], 10: data[10]}


def _roundtrip_fields(n):
    q = n + 1
    prime = next(p for p in range(q, 64) if all(p % d for d in range(2, p)))
    binary = 1 << (n).bit_length()
    return [make_field(prime), make_field(2, binary.bit_length() - 1)]


@pytest.mark.parametrize("n", range(2, 11))
@pytest.mark.parametrize("t", [1, 2, 3])
def test_encode_erase_decode_roundtrip(n, t):
    """Every lost-working set of size <= t, every round, 100 seeds."""
    if t >= n:
        pytest.skip("t must be < n")
    for f in _roundtrip_fields(n):
        m = build_coefficient_matrix(n, t, f)
        rng = random.Random(n * 100 + t)
        rounds = n  # covers lcm(n, t) / t
        for j in range(1, rounds + 1):
            prot = protection_window(n, t, j)
            working = [i for i in range(1, n + 1) if i not in prot]
            patterns = [lost for k in range(1, t + 1) for lost in combinations(working, k)]
            for _ in range(100):
                data = {i: f(rng.randrange(f.q)) for i in working}
                ys = dict(zip(prot, encode_round(m, j, data)))
                lost = rng.choice(patterns)
                plain = {i: v for i, v in data.items() if i not in lost}
                got = decode(m, j, plain, ys, lost)
                assert got == {i: data[i] for i in lost}
            # every pattern at least once, fixed data
            for lost in patterns:
                plain = {i: v for i, v in data.items() if i not in lost}
                assert decode(m, j, plain, ys, lost) == {i: data[i] for i in lost}


class TestRecoverability:
    def test_gf5_n4_t2(self, gf5):
        rep = verify_recoverability(build_coefficient_matrix(4, 2, gf5))
        assert rep.all_full_rank and rep.subsets_checked == 6
        assert rep.failing_subsets == []

    def test_gf4_repeats_column(self):
        rep = verify_recoverability(build_coefficient_matrix(4, 2, make_field(2, 2)))
        assert not rep.all_full_rank
        assert rep.failing_subsets == [(1, 4)]

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 8])
    def test_t1_always_full_rank(self, q):
        from npst.gfield import prime_power
        f = make_field(*prime_power(q))
        for n in range(2, 9):
            assert verify_recoverability(build_coefficient_matrix(n, 1, f)).all_full_rank

    def test_matches_determinant_oracle(self, small_field):
        f = small_field
        n = min(f.q, 8)
        t = min(3, n - 1)
        m = build_coefficient_matrix(n, t, f)
        rep = verify_recoverability(m)
        expected = []
        for cols in combinations(range(n), t):
            sub = [[m.entries[j][c] for c in cols] for j in range(t)]
            det = leibniz_det(sub, lambda a, b: a + b, lambda a, b: a * b, lambda a: -a, f.zero, f.one)
            if det == f.zero:
                expected.append(tuple(c + 1 for c in cols))
        assert rep.failing_subsets == expected
        assert rep.all_full_rank == (not expected)

    def test_record(self):
        rep = verify_recoverability(build_coefficient_matrix(4, 2, make_field(2, 2)))
        assert rep.to_record() == {"n": 4, "t": 2, "q": 4, "result": "fail", "subsets_checked": 6,
                                   "failing_subsets": [[1, 4]]}
        assert "failing_subsets={1,4}" in rep.to_text()


def test_undecodable_patterns_odd_characteristic():
    # the two surviving rows are 1 and alpha^2; points alpha^1, alpha^6 = -alpha^1 in GF(11)
    bad = undecodable_patterns(build_coefficient_matrix(7, 3, make_field(11)))
    assert (2, (2, 5, 7)) in bad
    assert undecodable_patterns(build_coefficient_matrix(7, 3, make_field(2, 3))) == []


@pytest.mark.parametrize("n,t,expected", [(10, 3, (8, 16)), (2, 1, (2, 4)), (4, 3, (2, 8))])
def test_field_size_bounds(n, t, expected):
    assert field_size_bounds(n, t) == expected
