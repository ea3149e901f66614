"""Young frames, tableaux and the exact combinatorics around them.

Partitions are stored canonically (no trailing zeros) as tuple subclasses,
so they hash, compare lexicographically and serialize as plain lists.
Dimensions are arbitrary-precision integers throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Iterable, Iterator, Sequence

from .config import SEMISTANDARD_CAP, STANDARD_TABLEAU_CAP
from .errors import DomainError, IntegralityError, ResourceError


class Partition(tuple):
    """Weakly decreasing tuple of positive integers (a Young frame)."""

    def __new__(cls, rows: Iterable[int] = ()):
        rows = [int(r) for r in rows]
        if any(r < 0 for r in rows):
            raise DomainError(f"negative row in {rows}")
        if any(a < b for a, b in zip(rows, rows[1:])):
            raise DomainError(f"rows not weakly decreasing: {rows}")
        while rows and rows[-1] == 0:
            rows.pop()
        return super().__new__(cls, rows)

    def __repr__(self):
        return f"Partition({list(self)})"

    def size(self) -> int:
        return sum(self)

    def depth(self) -> int:
        return len(self)

    def padded(self, n: int) -> tuple[int, ...]:
        if len(self) > n:
            raise DomainError(f"{self} has more than {n} rows")
        return tuple(self) + (0,) * (n - len(self))

    def normalized(self, n: int | None = None) -> tuple[float, ...]:
        """The probability vector lambda / |lambda|."""
        k = self.size()
        if k == 0:
            raise DomainError("empty partition has no normalization")
        rows = self.padded(n) if n is not None else tuple(self)
        return tuple(r / k for r in rows)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for r in self if r > j) for j in range(self[0]))

    def contains(self, other: Sequence[int]) -> bool:
        """True if the frame of `other` fits inside this frame."""
        other = Partition(other)
        if len(other) > len(self):
            return False
        return all(a >= b for a, b in zip(self, other))

    def boxes(self) -> Iterator[tuple[int, int]]:
        """Zero-based (row, col) coordinates in reading order."""
        for i, r in enumerate(self):
            for j in range(r):
                yield i, j


def as_partition(rows) -> Partition:
    return rows if isinstance(rows, Partition) else Partition(rows)


@dataclass(frozen=True)
class Tableau:
    shape: Partition
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if tuple(len(r) for r in self.rows) != tuple(self.shape):
            raise DomainError("tableau rows do not match its shape")

    def entries(self) -> list[int]:
        return [x for row in self.rows for x in row]

    def is_semistandard(self, d: int | None = None) -> bool:
        """Weakly increasing rows, strictly increasing columns; entries in 1..d if d is given."""
        for i, row in enumerate(self.rows):
            if any(x < 1 or (d is not None and x > d) for x in row):
                return False
            if any(a > b for a, b in zip(row, row[1:])):
                return False
            if i and any(row[j] <= self.rows[i - 1][j] for j in range(len(row))):
                return False
        return True

    def is_standard(self) -> bool:
        k = self.shape.size()
        if sorted(self.entries()) != list(range(1, k + 1)):
            return False
        return self.is_semistandard()

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def hook_length(shape, row: int, col: int) -> int:
    """Hook length of the box at 1-based (row, col)."""
    shape = as_partition(shape)
    if not (1 <= row <= len(shape) and 1 <= col <= shape[row - 1]):
        raise DomainError(f"({row}, {col}) is not a box of {list(shape)}")
    arm = shape[row - 1] - col
    leg = sum(1 for r in shape[row:] if r >= col)
    return arm + leg + 1


def dim_symmetric(shape) -> int:
    """f^lambda, the number of standard tableaux, by the hook-length formula."""
    shape = as_partition(shape)
    hooks = prod(hook_length(shape, i + 1, j + 1) for i, j in shape.boxes())
    num = factorial(shape.size())
    if num % hooks:
        raise IntegralityError(f"hook product does not divide k! for {shape}")
    return num // hooks


def dim_unitary(shape, d: int) -> int:
    """t_lambda(d), the dimension of the U(d) irrep, by Weyl's product formula."""
    shape = as_partition(shape)
    if d < 1:
        raise DomainError("d must be at least 1")
    if len(shape) > d:
        return 0
    lam = shape.padded(d)
    value = Fraction(1)
    for i in range(d):
        for j in range(i + 1, d):
            value *= Fraction(lam[i] - lam[j] + j - i, j - i)
    if value.denominator != 1:
        raise IntegralityError(f"Weyl formula not integral for {shape}, d={d}")
    return int(value)


def multinomial(parts: Sequence[int]) -> int:
    """k! / prod(parts!) with k = sum(parts)."""
    return factorial(sum(parts)) // prod(factorial(p) for p in parts)


def enumerate_partitions(k: int, max_depth: int | None = None) -> list[Partition]:
    """Partitions of k with at most max_depth rows, descending lexicographic."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    if max_depth is not None and max_depth < 1:
        raise DomainError("max_depth must be at least 1")
    depth = k if max_depth is None else max_depth
    out: list[Partition] = []

    def rec(remaining, largest, prefix):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if len(prefix) == depth:
            return
        for r in range(min(remaining, largest), 0, -1):
            rec(remaining - r, r, prefix + [r])

    rec(k, k, [])
    return out


def _corners(shape: Partition) -> list[int]:
    """Row indices whose last box can be removed."""
    return [i for i in range(len(shape)) if i + 1 == len(shape) or shape[i] > shape[i + 1]]


def _remove_box(shape: Partition, i: int) -> Partition:
    rows = list(shape)
    rows[i] -= 1
    return Partition(rows)


def enumerate_standard_tableaux(shape, cap: int = STANDARD_TABLEAU_CAP) -> list[Tableau]:
    """All standard tableaux, built by peeling off the box holding the largest entry."""
    shape = as_partition(shape)
    k = shape.size()
    if k > cap:
        raise ResourceError(f"standard tableaux of size {k} exceed cap {cap}")

    def rec(sh: Partition) -> list[list[list[int]]]:
        if sh.size() == 0:
            return [[]]
        n = sh.size()
        result = []
        for i in _corners(sh):
            for rows in rec(_remove_box(sh, i)):
                rows = [list(r) for r in rows] + [[] for _ in range(len(sh) - len(rows))]
                rows[i].append(n)
                result.append(rows)
        return result

    return [Tableau(shape, tuple(tuple(r) for r in rows)) for rows in rec(shape)]


def _interlacing(lam: Sequence[int], max_len: int) -> Iterator[tuple[int, ...]]:
    """Frames mu with lam_{i+1} <= mu_i <= lam_i and at most max_len rows."""
    lam = list(lam)
    n = min(len(lam), max_len)
    if len(lam) > max_len + 1:
        return

    def rec(i, prefix):
        if i == n:
            yield tuple(prefix)
            return
        lo = lam[i + 1] if i + 1 < len(lam) else 0
        for m in range(lam[i], lo - 1, -1):
            yield from rec(i + 1, prefix + [m])

    yield from rec(0, [])


def gelfand_tsetlin_patterns(shape, d: int) -> list[tuple[tuple[int, ...], ...]]:
    """Chains lambda = l^(d) > l^(d-1) > ... > l^(1) of interlacing frames.

    Each pattern is listed top row first; row j has at most d - j entries.
    """
    shape = as_partition(shape)
    if len(shape) > d:
        return []

    def rec(top: tuple[int, ...], level: int):
        if level == 0:
            yield ()
            return
        for sub in _interlacing(top, level):
            for rest in rec(tuple(m for m in sub if m), level - 1):
                yield (sub,) + rest

    return [(tuple(shape),) + rest for rest in rec(tuple(shape), d - 1)]


def pattern_to_tableau(pattern, d: int) -> Tableau:
    """Gelfand-Tsetlin pattern to semistandard tableau: letter j fills l^(j) / l^(j-1)."""
    levels = [tuple(r for r in row if r) for row in pattern]
    shape = Partition(levels[0])
    rows = [[] for _ in shape]
    chain = list(reversed(levels))  # l^(1), ..., l^(d)
    prev: tuple[int, ...] = ()
    for letter, cur in enumerate(chain, start=1):
        for i, r in enumerate(cur):
            p = prev[i] if i < len(prev) else 0
            rows[i].extend([letter] * (r - p))
        prev = cur
    return Tableau(shape, tuple(tuple(r) for r in rows))


def enumerate_semistandard_tableaux(shape, d: int, cap: int = SEMISTANDARD_CAP) -> list[Tableau]:
    """Semistandard tableaux over {1..d}, via Gelfand-Tsetlin patterns."""
    shape = as_partition(shape)
    if shape.size() * d > cap:
        raise ResourceError(f"size*d = {shape.size() * d} exceeds cap {cap}")
    return [pattern_to_tableau(p, d) for p in gelfand_tsetlin_patterns(shape, d)]


def majorizes(dominant: Sequence[float], dominated: Sequence[float], tol: float = 1e-12) -> bool:
    """True if `dominant` majorizes `dominated` (partial sums of sorted vectors)."""
    a = sorted(dominant, reverse=True)
    b = sorted(dominated, reverse=True)
    n = max(len(a), len(b))
    a += [0] * (n - len(a))
    b += [0] * (n - len(b))
    exact = all(isinstance(x, int) for x in a + b)
    slack = 0 if exact else tol * max(1.0, abs(sum(a)))
    if abs(sum(a) - sum(b)) > slack:
        raise DomainError(f"sums differ: {sum(a)} vs {sum(b)}")
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa < sb - slack:
            return False
    return True


def contragredient_triple(mu, nu, lam, m: int, n: int) -> tuple[Partition, Partition, Partition]:
    """Complement a Kronecker triple inside the m x n x mn boxes of width lambda_1."""
    mu, nu, lam = as_partition(mu), as_partition(nu), as_partition(lam)
    if len(mu) > m or len(nu) > n or len(lam) > m * n:
        raise DomainError("depth exceeds the stated dimensions")
    if not (mu.size() == nu.size() == lam.size()):
        raise DomainError("partitions must have equal size")
    width = lam[0] if lam else 0
    mp, nq, lr = mu.padded(m), nu.padded(n), lam.padded(m * n)
    mu2 = [n * width - mp[m - 1 - i] for i in range(m)]
    nu2 = [m * width - nq[n - 1 - i] for i in range(n)]
    lam2 = [width - lr[m * n - 1 - i] for i in range(m * n)]
    return Partition(mu2), Partition(nu2), Partition(lam2)
