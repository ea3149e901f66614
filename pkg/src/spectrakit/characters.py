"""Characters of S_k and the coefficients built from them.

Characters are evaluated with the Murnaghan-Nakayama rule on beta-sets
(first-column hook lengths): removing a border strip of length r is moving
one bead r places down, and the strip's height is the number of beads it
jumps over.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Sequence

from .config import CHARACTER_TABLE_CAP, KRONECKER_CAP
from .errors import DomainError, IntegralityError, ResourceError
from .partitions import Partition, as_partition, enumerate_partitions


def z_constant(cycle_type) -> int:
    """Order of the centralizer: prod_i i^{m_i} m_i!."""
    counts = Counter(cycle_type)
    return prod(i**m * factorial(m) for i, m in counts.items())


@dataclass(frozen=True)
class ConjugacyClass:
    cycle_type: Partition
    class_size: int

    @classmethod
    def of(cls, cycle_type) -> "ConjugacyClass":
        cycle_type = as_partition(cycle_type)
        return cls(cycle_type, factorial(cycle_type.size()) // z_constant(cycle_type))


def conjugacy_classes(k: int) -> list[ConjugacyClass]:
    """Classes of S_k, identity class first."""
    return [ConjugacyClass.of(c) for c in reversed(enumerate_partitions(k))]


def _beta(shape: Sequence[int]) -> tuple[int, ...]:
    n = len(shape)
    return tuple(r + n - 1 - i for i, r in enumerate(shape))


@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], cycles: tuple[int, ...]) -> int:
    if not cycles:
        return 1
    r, rest = cycles[0], cycles[1:]
    occupied = set(beta)
    total = 0
    for b in beta:
        t = b - r
        if t < 0 or t in occupied:
            continue
        height = sum(1 for c in beta if t < c < b)
        moved = tuple(sorted((t if c == b else c for c in beta), reverse=True))
        total += (-1) ** height * _mn(moved, rest)
    return total


def character(shape, cycle_type) -> int:
    """chi_lambda evaluated on the class with the given cycle type."""
    shape, cycle_type = as_partition(shape), as_partition(cycle_type)
    if shape.size() != cycle_type.size():
        raise DomainError(f"{list(shape)} and {list(cycle_type)} have different sizes")
    if shape.size() == 0:
        return 1
    return _mn(_beta(shape), tuple(cycle_type))


@dataclass(frozen=True)
class CharacterTable:
    k: int
    partitions: tuple[Partition, ...]
    classes: tuple[ConjugacyClass, ...]
    values: tuple[tuple[int, ...], ...]  # values[i][j] = chi_{partitions[i]}(classes[j])

    def chi(self, shape, cycle_type) -> int:
        i = self.partitions.index(as_partition(shape))
        j = [c.cycle_type for c in self.classes].index(as_partition(cycle_type))
        return self.values[i][j]

    def row(self, shape) -> tuple[int, ...]:
        return self.values[self.partitions.index(as_partition(shape))]

    def inner(self, a, b) -> Fraction:
        """(1/k!) sum over classes of |C| chi_a chi_b."""
        ra, rb = self.row(a), self.row(b)
        total = sum(c.class_size * x * y for c, x, y in zip(self.classes, ra, rb))
        return Fraction(total, factorial(self.k))

    def to_json(self) -> list[dict]:
        return [
            {"lambda": list(lam), "class": list(c.cycle_type), "chi": v}
            for lam, row in zip(self.partitions, self.values)
            for c, v in zip(self.classes, row)
        ]


@lru_cache(maxsize=8)
def _table(k: int) -> CharacterTable:
    parts = tuple(enumerate_partitions(k))
    classes = tuple(conjugacy_classes(k))
    values = tuple(tuple(character(lam, c.cycle_type) for c in classes) for lam in parts)
    return CharacterTable(k, parts, classes, values)


def character_table(k: int, cap: int = CHARACTER_TABLE_CAP) -> CharacterTable:
    if k < 1:
        raise DomainError("k must be at least 1")
    if k > cap:
        raise ResourceError(f"character table for k={k} exceeds cap {cap}")
    return _table(k)


def _exact_int(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise IntegralityError(f"{what} evaluated to non-integer {value}")
    return int(value)


def kronecker(mu, nu, lam, cap: int = KRONECKER_CAP) -> int:
    """g_{mu nu lambda} = (1/k!) sum_pi chi_mu chi_nu chi_lambda.

    Only the three needed characters are evaluated, so this stays cheap
    well beyond the full-table cap.
    """
    mu, nu, lam = as_partition(mu), as_partition(nu), as_partition(lam)
    k = lam.size()
    if not (mu.size() == nu.size() == k):
        raise DomainError("Kronecker coefficient needs partitions of equal size")
    if k > cap:
        raise ResourceError(f"k={k} exceeds Kronecker cap {cap}")
    if k == 0:
        return 1
    total = Fraction(0)
    for rho in enumerate_partitions(k):
        a = character(mu, rho)
        if a == 0:
            continue
        b = character(nu, rho)
        if b == 0:
            continue
        total += Fraction(a * b * character(lam, rho), z_constant(rho))
    return _exact_int(total, f"g{list(mu), list(nu), list(lam)}")


def littlewood_richardson(mu, nu, lam) -> int:
    """c^lambda_{mu nu}: LR tableaux of shape lambda/mu and content nu.

    Cells are filled row by row, right to left, so the reverse reading
    word is built in order and the lattice condition is checked as we go.
    """
    mu, nu, lam = as_partition(mu), as_partition(nu), as_partition(lam)
    if mu.size() + nu.size() != lam.size():
        raise DomainError("|mu| + |nu| must equal |lambda|")
    if not lam.contains(mu) or not lam.contains(nu):
        return 0
    rows = len(lam)
    inner = mu.padded(rows)
    cells = [(i, j) for i in range(rows) for j in range(lam[i] - 1, inner[i] - 1, -1)]
    filling: dict[tuple[int, int], int] = {}
    counts = [0] * (len(nu) + 1)

    def rec(idx: int) -> int:
        if idx == len(cells):
            return 1
        i, j = cells[idx]
        hi = len(nu)
        right = filling.get((i, j + 1))
        if right is not None:
            hi = min(hi, right)
        above = filling.get((i - 1, j))
        lo = above + 1 if above is not None else 1
        found = 0
        for x in range(lo, min(hi, i + 1) + 1):
            if counts[x] >= nu[x - 1]:
                continue
            if x > 1 and counts[x] + 1 > counts[x - 1]:
                continue
            counts[x] += 1
            filling[(i, j)] = x
            found += rec(idx + 1)
            del filling[(i, j)]
            counts[x] -= 1
        return found

    return rec(0)


def clebsch_gordan_su2(two_j1: int, two_j2: int) -> list[int]:
    """Values 2j in the decomposition D^(j1) x D^(j2)."""
    if two_j1 < 0 or two_j2 < 0:
        raise DomainError("spins must be nonnegative")
    return list(range(abs(two_j1 - two_j2), two_j1 + two_j2 + 1, 2))


def classical_h(mu, nu) -> dict[Partition, int]:
    """Count nonnegative integer matrices with row sums mu, column sums nu,
    grouped by their sorted entries."""
    mu, nu = as_partition(mu), as_partition(nu)
    if mu.size() != nu.size():
        raise DomainError("|mu| must equal |nu|")
    result: Counter = Counter()
    cols = list(nu)

    def rows_of(total: int, bounds: list[int], prefix: list[int]):
        j = len(prefix)
        if j == len(bounds) - 1:
            if total <= bounds[j]:
                yield prefix + [total]
            return
        rest = sum(bounds[j + 1:])
        for x in range(max(0, total - rest), min(total, bounds[j]) + 1):
            yield from rows_of(total - x, bounds, prefix + [x])

    def rec(i: int, remaining: list[int], entries: list[int]):
        if i == len(mu):
            result[Partition(sorted(entries, reverse=True))] += 1
            return
        for row in rows_of(mu[i], remaining, []):
            rec(i + 1, [c - x for c, x in zip(remaining, row)], entries + row)

    if not mu:
        return {Partition(): 1}
    rec(0, cols, [])
    return dict(result)
