"""Schur-Weyl projectors and spectrum-estimation probabilities."""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, log
from typing import Sequence

import numpy as np

from .characters import character, conjugacy_classes
from .config import CHARACTER_TABLE_CAP, DENSE_CAP, PERMUTATION_SUM_CAP, thread_count
from .errors import DomainError, ResourceError
from .partitions import Partition, as_partition, dim_symmetric, enumerate_partitions
from .qstate import DensityMatrix, eigvals_clamped


@dataclass(frozen=True)
class TensorOperator:
    d: int
    k: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.d**self.k, self.d**self.k):
            raise DomainError("matrix size does not match d**k")

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_projector(self, tol: float = 1e-10) -> bool:
        m = self.matrix
        return bool(np.allclose(m @ m, m, atol=tol) and np.allclose(m, m.conj().T, atol=tol))


def _check_dense(d: int, k: int, cap: int):
    if d**k > cap:
        raise ResourceError(f"d**k = {d**k} exceeds dense cap {cap}")


def cycle_type(perm: Sequence[int]) -> Partition:
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        n, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            n += 1
        lengths.append(n)
    return Partition(sorted(lengths, reverse=True))


def _check_perm(perm: Sequence[int]) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(len(perm))):
        raise DomainError(f"{perm} is not a permutation of 0..{len(perm) - 1}")
    return perm


def _source_index(perm: tuple[int, ...], d: int) -> np.ndarray:
    """src[m] = input basis index sent to output index m by V(perm).

    The tensor factor in slot j moves to slot perm[j].
    """
    k = len(perm)
    inverse = [0] * k
    for j, p in enumerate(perm):
        inverse[p] = j
    grid = np.arange(d**k).reshape((d,) * k) if k else np.arange(1)
    return grid.transpose(inverse).reshape(-1) if k else grid


def permutation_operator(perm: Sequence[int], d: int, cap: int = DENSE_CAP) -> TensorOperator:
    """V(pi) on (C^d)^{tensor k}; perm is in 0-based one-line notation."""
    perm = _check_perm(perm)
    k = len(perm)
    _check_dense(d, k, cap)
    n = d**k
    m = np.zeros((n, n))
    m[np.arange(n), _source_index(perm, d)] = 1.0
    return TensorOperator(d, k, m)


def central_young_projector(lam, d: int, k: int, cap: int = DENSE_CAP) -> TensorOperator:
    """P_lambda = (f^lambda / k!) sum_pi chi_lambda(pi) V(pi)."""
    lam = as_partition(lam)
    if lam.size() != k:
        raise DomainError(f"{list(lam)} is not a partition of {k}")
    _check_dense(d, k, cap)
    if k > PERMUTATION_SUM_CAP:
        raise ResourceError(f"summing over S_{k} exceeds cap {PERMUTATION_SUM_CAP}")
    n = d**k
    m = np.zeros((n, n))
    if len(lam) > d:
        return TensorOperator(d, k, m)
    chars = {}
    rows = np.arange(n)
    for perm in itertools.permutations(range(k)):
        ct = cycle_type(perm)
        if ct not in chars:
            chars[ct] = character(lam, ct)
        if chars[ct]:
            m[rows, _source_index(perm, d)] += chars[ct]
    m *= dim_symmetric(lam) / factorial(k)
    return TensorOperator(d, k, m)


@lru_cache(maxsize=64)
def _class_data(k: int) -> tuple[tuple[Partition, int], ...]:
    return tuple((c.cycle_type, c.class_size) for c in conjugacy_classes(k))


def _power_sums(spectrum: Sequence[float], k: int) -> list[Fraction]:
    r = [Fraction(float(x)) for x in spectrum]
    sums, powers = [Fraction(0)], r[:]
    for _ in range(k):
        sums.append(sum(powers, Fraction(0)))
        powers = [p * x for p, x in zip(powers, r)]
    return sums


def _class_traces(spectrum: Sequence[float], k: int) -> list[tuple[Partition, Fraction]]:
    """(cycle type, class_size * prod Tr rho^len) over the classes of S_k, exactly."""
    p = _power_sums(spectrum, k)
    out = []
    for ct, size in _class_data(k):
        t = Fraction(size)
        for length in ct:
            t *= p[length]
        out.append((ct, t))
    return out


def _frame_probability(lam: Partition, traces, k: int) -> float:
    total = sum((character(lam, ct) * t for ct, t in traces), Fraction(0))
    return float(total * dim_symmetric(lam) / factorial(k))


def _check_k(k: int, cap: int):
    if k < 1:
        raise DomainError("k must be at least 1")
    if k > cap:
        raise ResourceError(f"k={k} exceeds the character cap {cap}")


def spectrum_estimation_prob(rho: DensityMatrix, lam, k: int, cap: int = CHARACTER_TABLE_CAP) -> float:
    """Tr P_lambda rho^{tensor k}, via Tr V(pi) rho^{tensor k} = prod_cycles Tr rho^len."""
    lam = as_partition(lam)
    _check_k(k, cap)
    if lam.size() != k:
        raise DomainError(f"{list(lam)} is not a partition of {k}")
    if len(lam) > rho.dim:
        return 0.0
    return _frame_probability(lam, _class_traces(eigvals_clamped(rho.matrix), k), k)


@dataclass(frozen=True)
class SpectrumDistribution:
    k: int
    spectrum: tuple[float, ...]
    probs: dict

    def total(self) -> float:
        return float(sum(self.probs.values()))

    def mass_within(self, eps: float) -> float:
        """Probability that the normalized frame is within total-variation eps of the spectrum."""
        d = len(self.spectrum)
        r = np.array(self.spectrum)
        mass = 0.0
        for lam, p in self.probs.items():
            if tv_distance(lam.normalized(d), r) < eps:
                mass += p
        return mass

    def argmax(self) -> Partition:
        return max(self.probs, key=self.probs.get)

    def to_json(self) -> list[dict]:
        return [{"frame": list(lam), "prob": p} for lam, p in self.probs.items()]


def tv_distance(p, q) -> float:
    return float(np.sum(np.abs(np.asarray(p, float) - np.asarray(q, float))) / 2)


def estimate_spectrum(rho: DensityMatrix, k: int, cap: int = CHARACTER_TABLE_CAP, workers: int | None = None) -> SpectrumDistribution:
    """Distribution of the Young-frame measurement on k copies of rho."""
    _check_k(k, cap)
    spectrum = tuple(float(x) for x in rho.eigenvalues())
    traces = _class_traces(spectrum, k)
    frames = enumerate_partitions(k, rho.dim)
    with ThreadPoolExecutor(max_workers=workers or thread_count()) as pool:
        probs = list(pool.map(lambda lam: _frame_probability(lam, traces, k), frames))
    return SpectrumDistribution(k, spectrum, dict(zip(frames, probs)))


def relative_entropy_nats(p: Sequence[float], q: Sequence[float]) -> float:
    """Classical D(p||q) in nats; +inf when p is not supported inside q."""
    total = 0.0
    for x, y in zip(p, q):
        if x <= 0:
            continue
        if y <= 0:
            return float("inf")
        total += x * log(x / y)
    return total


def keyl_werner_bound(lam, spectrum: Sequence[float], k: int) -> float:
    """(k+1)^{d(d-1)/2} exp(-k D(lambda_bar || r))."""
    lam = as_partition(lam)
    r = sorted(spectrum, reverse=True)
    d = len(r)
    if len(lam) > d:
        return 0.0
    div = relative_entropy_nats(lam.normalized(d), r)
    if div == float("inf"):
        return 0.0
    return (k + 1) ** (d * (d - 1) / 2) * np.exp(-k * div)


def keyl_werner_holds(rho: DensityMatrix, lam, k: int, tol: float = 1e-12) -> bool:
    lam = as_partition(lam)
    spectrum = rho.eigenvalues()
    if len(lam) > len(spectrum):
        return True
    if relative_entropy_nats(lam.normalized(len(spectrum)), spectrum) == float("inf"):
        return True
    return spectrum_estimation_prob(rho, lam, k) <= keyl_werner_bound(lam, spectrum, k) + tol
