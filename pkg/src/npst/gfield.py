"""Exact arithmetic in GF(p^r) and Gaussian elimination over it.

Elements are stored as a canonical integer in ``[0, q)``.  For ``r == 1`` that
is the residue mod ``p``; for ``r > 1`` it is the coefficient vector of a
polynomial of degree ``< r`` packed as base-``p`` digits, constant term in the
lowest digit.  Reduction polynomials use the same packing, low degree first.

Extension-field multiplication goes through log/antilog tables built from the
designated primitive element; the tables are themselves generated with plain
polynomial multiply-and-reduce.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

MAX_ORDER = 2 ** 16


class FieldError(ValueError):
    """Invalid field description or operation."""


class FieldMismatchError(FieldError):
    pass


class SingularMatrixError(ArithmeticError):
    """Raised by :func:`gaussian_solve` when the system has rank < m."""

    def __init__(self, rank: int, size: int):
        super().__init__(f"singular system: rank {rank} < {size}")
        self.rank = rank
        self.size = size


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, r)`` with ``q == p**r`` and p prime, or None."""
    if q < 2:
        return None
    p = 2
    while q % p:
        p += 1
    r, m = 0, q
    while m % p == 0:
        m //= p
        r += 1
    return (p, r) if m == 1 else None


# -- polynomials over GF(p), as little-endian coefficient tuples -------------

def _digits(value: int, p: int, r: int) -> list[int]:
    out = []
    for _ in range(r):
        value, d = divmod(value, p)
        out.append(d)
    return out


def _pack(digits: Sequence[int], p: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * p + d
    return value


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    m = _poly_trim(list(m))
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for k, c in enumerate(m):
            a[shift + k] = (a[shift + k] - coef * c) % p
        _poly_trim(a)
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _poly_mod(prod, m, p)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _poly_trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in range(p ** d):
            divisor = _digits(low, p, d) + [1]
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest (by canonical integer) monic irreducible of degree r."""
    for low in range(p ** r):
        cand = _digits(low, p, r) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {r} over GF({p})")  # unreachable


# -- field -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(p^r) with a fixed reduction polynomial and primitive element ``alpha``.

    Build with :func:`make_field`; the constructor does not validate.
    """

    p: int
    r: int
    reduction_poly: tuple[int, ...] | None
    alpha: int
    _exp: tuple[int, ...] = field(repr=False)
    _log: tuple[int, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return self.p ** self.r

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.r, self.reduction_poly) == (other.p, other.r, other.reduction_poly)

    def __hash__(self):
        return hash((self.p, self.r, self.reduction_poly))

    def __repr__(self):
        if self.r == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.r}, poly={self.reduction_poly})"

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value, self)

    def __iter__(self):
        return (FieldElement(v, self) for v in range(self.q))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self)

    @property
    def primitive(self) -> FieldElement:
        return FieldElement(self.alpha, self)

    def describe(self) -> dict:
        """Scenario-file form ``{p, r, poly?}``."""
        out = {"p": self.p, "r": self.r}
        if self.r > 1:
            out["poly"] = list(self.reduction_poly)
        return out

    # raw integer operations, used by FieldElement and the hot loops

    def add_int(self, a: int, b: int) -> int:
        p = self.p
        if self.r == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        out, scale = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + db) % p) * scale
            scale *= p
        return out

    def neg_int(self, a: int) -> int:
        p = self.p
        if self.r == 1:
            return -a % p
        if p == 2:
            return a
        out, scale = 0, 1
        while a:
            a, d = divmod(a, p)
            out += (-d % p) * scale
            scale *= p
        return out

    def mul_int(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.r == 1:
            return pow(a, -1, self.p)
        return self._exp[-self._log[a] % (self.q - 1)]

    def pow_int(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if k == 0 else 0
        k %= self.q - 1
        if self.r == 1:
            return pow(a, k, self.p)
        return self._exp[self._log[a] * k % (self.q - 1)]

    def alpha_pow(self, k: int) -> int:
        """``alpha**k`` as an integer, exponent taken mod q-1."""
        return self._exp[k % (self.q - 1)]


def _naive_order(g: int, p: int, r: int, poly: Sequence[int] | None) -> int:
    q = p ** r
    if r == 1:
        x, k = g, 1
        while x != 1:
            x = x * g % p
            k += 1
            if k > q:
                return 0
        return k
    gd = _digits(g, p, r)
    x, k = list(gd), 1
    while _pack(x + [0] * (r - len(x)), p) != 1:
        x = _poly_mulmod(x, gd, poly, p)
        k += 1
        if k > q:
            return 0
    return k


def make_field(p: int, r: int = 1, reduction_poly: Sequence[int] | None = None) -> FieldSpec:
    """Construct and validate GF(p^r).

    ``reduction_poly`` is a little-endian coefficient sequence of degree r; when
    omitted for r > 1 the smallest monic irreducible is used.  ``alpha`` is the
    smallest element (by canonical integer) of multiplicative order q-1.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if not isinstance(r, int) or r < 1:
        raise FieldError(f"extension degree must be >= 1, got {r}")
    q = p ** r
    if q > MAX_ORDER:
        raise FieldError(f"field order {q} exceeds {MAX_ORDER}")

    poly = None
    if r > 1:
        if reduction_poly is None:
            poly = smallest_irreducible(p, r)
        else:
            poly = tuple(int(c) % p for c in reduction_poly)
            if len(_poly_trim(list(poly))) != r + 1:
                raise FieldError(f"reduction polynomial {list(reduction_poly)} does not have degree {r}")
            if not is_irreducible(poly, p):
                raise FieldError(f"reduction polynomial {list(reduction_poly)} is reducible over GF({p})")
            # normalise to monic so equal fields compare equal
            lead_inv = pow(poly[-1], -1, p)
            poly = tuple(c * lead_inv % p for c in poly)

    if q == 2:
        alpha = 1
    else:
        alpha = next(g for g in range(2, q) if _naive_order(g, p, r, poly) == q - 1)

    exp = [1] * (q - 1)
    if r == 1:
        for k in range(1, q - 1):
            exp[k] = exp[k - 1] * alpha % p
    else:
        ad = _digits(alpha, p, r)
        cur = [1]
        for k in range(1, q - 1):
            cur = _poly_mulmod(cur, ad, poly, p)
            exp[k] = _pack(cur + [0] * (r - len(cur)), p)
    log = [0] * q
    for k, v in enumerate(exp):
        log[v] = k
    return FieldSpec(p, r, poly, alpha, tuple(exp), tuple(log))


class FieldElement:
    """An element of a :class:`FieldSpec`; immutable and hashable."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: FieldSpec):
        value = int(value)
        if not 0 <= value < field.q:
            raise FieldError(f"{value} is not a canonical element of {field!r}")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _check(self, other) -> FieldElement:
        if isinstance(other, int):
            return FieldElement(other % self.field.q if self.field.r == 1 else other, self.field)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field is not self.field and other.field != self.field:
            raise FieldMismatchError(f"cannot mix {self.field!r} and {other.field!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field.add_int(self.value, other.value), self.field)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field.neg_int(self.value), self.field)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field.mul_int(self.value, other.value), self.field)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        return FieldElement(self.field.inv_int(self.value), self.field)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, k: int):
        return FieldElement(self.field.pow_int(self.value, k), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.field == other.field
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.field!r}({self.value})"


def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def field_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def field_pow(a: FieldElement, k: int) -> FieldElement:
    """``a**k``; negative k goes through the inverse."""
    return a ** k


# -- linear algebra ----------------------------------------------------------

def _row_reduce(rows: list[list[int]], f: FieldSpec, ncols: int) -> int:
    """In-place reduced row echelon form over raw ints; returns the rank.

    Pivot row is the lowest-index row with a nonzero entry in the column.
    """
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = f.inv_int(rows[rank][col])
        rows[rank] = [f.mul_int(inv, v) for v in rows[rank]]
        for i in range(len(rows)):
            c = rows[i][col]
            if i != rank and c:
                neg = f.neg_int(c)
                rows[i] = [f.add_int(v, f.mul_int(neg, pv)) for v, pv in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _common_field(entries) -> FieldSpec:
    fields = {e.field for e in entries}
    if len(fields) != 1:
        raise FieldMismatchError(f"matrix entries span {len(fields)} fields")
    return fields.pop()


def rank(A: Sequence[Sequence[FieldElement]]) -> int:
    if not A or not A[0]:
        return 0
    f = _common_field(e for row in A for e in row)
    rows = [[e.value for e in row] for row in A]
    return _row_reduce(rows, f, len(rows[0]))


def gaussian_solve(A: Sequence[Sequence[FieldElement]], b: Sequence[FieldElement]) -> list[FieldElement]:
    """Solve the square system ``A x = b`` exactly.

    Raises :class:`SingularMatrixError` when A is rank deficient.
    """
    m = len(A)
    if any(len(row) != m for row in A) or len(b) != m:
        raise ValueError("gaussian_solve needs an m x m matrix and a length-m vector")
    if m == 0:
        return []
    f = _common_field([e for row in A for e in row] + list(b))
    rows = [[e.value for e in row] + [bi.value] for row, bi in zip(A, b)]
    rk = _row_reduce(rows, f, m)
    if rk < m:
        raise SingularMatrixError(rk, m)
    return [FieldElement(rows[i][m], f) for i in range(m)]


def mat_vec(A: Sequence[Sequence[FieldElement]], x: Sequence[FieldElement]) -> list[FieldElement]:
    out = []
    for row in A:
        acc = row[0].field.zero
        for a, xi in zip(row, x):
            acc = acc + a * xi
        out.append(acc)
    return out
