"""Density matrices and the information measures defined on them.

All entropies are in bits. Eigenvalues are taken from the symmetrized
matrix and clamped at 1e-12 before logarithms.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .errors import DomainError

EIG_FLOOR = 1e-12
STATE_TOL = 1e-10


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise DomainError("an explicit seed is required")
    return np.random.default_rng(seed)


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def eigvals_clamped(m: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(hermitian_part(m))
    return np.where(w < EIG_FLOOR, 0.0, w)


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > EIG_FLOOR]
    return float(-np.sum(p * np.log2(p)))


def binary_entropy(x: float) -> float:
    return shannon_entropy([x, 1 - x])


def mu_helper(x: float) -> float:
    """min{-x log x, 1/e}, the continuity modulus used in Fannes-type bounds."""
    if x <= 0:
        return 0.0
    return min(-x * np.log2(x), 1 / np.e)


class DensityMatrix:
    """Unit-trace positive matrix on a tensor product of declared subsystems."""

    __slots__ = ("dims", "matrix")

    def __init__(self, matrix, dims: Sequence[int] | None = None, validate: bool = True):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError("density matrix must be square")
        dims = tuple(int(d) for d in (dims if dims is not None else (m.shape[0],)))
        if prod(dims) != m.shape[0]:
            raise DomainError(f"dims {dims} do not match matrix size {m.shape[0]}")
        if validate:
            if np.max(np.abs(m - m.conj().T), initial=0.0) > STATE_TOL:
                raise DomainError("matrix is not Hermitian")
            if abs(np.trace(m).real - 1) > STATE_TOL:
                raise DomainError(f"trace is {np.trace(m).real}, not 1")
            if np.linalg.eigvalsh(hermitian_part(m))[0] < -STATE_TOL:
                raise DomainError("matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vector, dims: Sequence[int] | None = None) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()), dims or (v.size,))

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityMatrix":
        return cls(np.eye(d) / d, (d,))

    def eigenvalues(self) -> np.ndarray:
        """Clamped eigenvalues, descending."""
        return eigvals_clamped(self.matrix)[::-1]

    def with_dims(self, dims: Sequence[int]) -> "DensityMatrix":
        return DensityMatrix(self.matrix, dims, validate=False)

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(np.kron(self.matrix, other.matrix), self.dims + other.dims, validate=False)

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "re": self.matrix.real.tolist(), "im": self.matrix.imag.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "DensityMatrix":
        try:
            m = np.array(data["re"], dtype=float) + 1j * np.array(data.get("im", 0.0), dtype=float)
            dims = data.get("dims")
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed state: {exc}")
        return cls(m, dims)


@dataclass(frozen=True)
class StateVector:
    dims: tuple[int, ...]
    vector: np.ndarray

    def density(self) -> DensityMatrix:
        return DensityMatrix.pure(self.vector, self.dims)


@dataclass(frozen=True)
class Ensemble:
    entries: tuple[tuple[float, DensityMatrix], ...]

    def __post_init__(self):
        if not self.entries:
            raise DomainError("empty ensemble")
        ps = [p for p, _ in self.entries]
        if min(ps) < 0 or abs(sum(ps) - 1) > STATE_TOL:
            raise DomainError("ensemble probabilities must be nonnegative and sum to 1")
        dims = {rho.dims for _, rho in self.entries}
        if len(dims) != 1:
            raise DomainError("ensemble members have different dims")

    @classmethod
    def uniform(cls, states: Sequence[DensityMatrix]) -> "Ensemble":
        return cls(tuple((1 / len(states), s) for s in states))

    def average(self) -> DensityMatrix:
        m = sum(p * rho.matrix for p, rho in self.entries)
        return DensityMatrix(m, self.entries[0][1].dims, validate=False)


def _check_parts(rho: DensityMatrix, count: int):
    if len(rho.dims) != count:
        raise DomainError(f"expected {count} subsystems, got dims {rho.dims}")


def partial_trace_matrix(m: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    n = len(dims)
    keep = sorted(set(keep))
    drop = [i for i in range(n) if i not in keep]
    t = m.reshape(tuple(dims) * 2)
    perm = keep + drop + [n + i for i in keep] + [n + i for i in drop]
    t = t.transpose(perm)
    dk = prod(dims[i] for i in keep)
    dd = prod(dims[i] for i in drop)
    t = t.reshape(dk, dd, dk, dd)
    return np.einsum("ajbj->ab", t)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    keep = list(keep)
    if not keep or any(not 0 <= i < len(rho.dims) for i in keep) or len(set(keep)) != len(keep):
        raise DomainError(f"bad subsystem selection {keep} for dims {rho.dims}")
    keep = sorted(keep)
    m = partial_trace_matrix(rho.matrix, rho.dims, keep)
    return DensityMatrix(m, tuple(rho.dims[i] for i in keep), validate=False)


def purify(rho: DensityMatrix) -> StateVector:
    """Purification with an ancilla of dimension rank(rho), ancilla last."""
    w, v = np.linalg.eigh(hermitian_part(rho.matrix))
    idx = np.flatnonzero(w > EIG_FLOOR)[::-1]
    amps = np.sqrt(w[idx])
    psi = (v[:, idx] * amps).reshape(-1)
    return StateVector(rho.dims + (len(idx),), psi)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return shannon_entropy(eigvals_clamped(rho.matrix))


def entropy_of(rho: DensityMatrix, parts: Sequence[int]) -> float:
    """Entropy of the marginal on the given subsystems."""
    if not parts:
        return 0.0
    return von_neumann_entropy(partial_trace(rho, parts))


def mutual_information(rho: DensityMatrix) -> float:
    _check_parts(rho, 2)
    return entropy_of(rho, [0]) + entropy_of(rho, [1]) - von_neumann_entropy(rho)


def conditional_entropy(rho: DensityMatrix) -> float:
    """S(A|B) = S(AB) - S(B)."""
    _check_parts(rho, 2)
    return von_neumann_entropy(rho) - entropy_of(rho, [1])


def conditional_mutual_information(rho: DensityMatrix) -> float:
    """I(A;B|E) for a state with parts (A, B, E)."""
    _check_parts(rho, 3)
    return (
        entropy_of(rho, [0, 2])
        + entropy_of(rho, [1, 2])
        - von_neumann_entropy(rho)
        - entropy_of(rho, [2])
    )


def _same_dims(rho: DensityMatrix, sigma: DensityMatrix):
    if rho.dim != sigma.dim:
        raise DomainError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    _same_dims(rho, sigma)
    w = np.linalg.eigvalsh(hermitian_part(rho.matrix - sigma.matrix))
    return float(np.sum(np.abs(w)) / 2)


def _sqrtm_psd(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(hermitian_part(m))
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    _same_dims(rho, sigma)
    s = _sqrtm_psd(rho.matrix)
    w = np.linalg.eigvalsh(hermitian_part(s @ sigma.matrix @ s))
    return float(min(1.0, np.sum(np.sqrt(np.clip(w, 0, None))) ** 2))


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """S(rho||sigma) in bits; +inf when supp rho is not inside supp sigma."""
    _same_dims(rho, sigma)
    wr, vr = np.linalg.eigh(hermitian_part(rho.matrix))
    ws, vs = np.linalg.eigh(hermitian_part(sigma.matrix))
    wr = np.where(wr < EIG_FLOOR, 0.0, wr)
    # overlap[i, j] = |<r_i|s_j>|^2
    overlap = np.abs(vr.conj().T @ vs) ** 2
    kernel = ws < EIG_FLOOR
    if np.any((wr[:, None] > 0) & kernel[None, :] & (overlap > 1e-9)):
        return float("inf")
    log_s = np.where(kernel, 0.0, np.log2(np.where(kernel, 1.0, ws)))
    pos = wr > 0
    value = np.sum(wr[pos] * np.log2(wr[pos])) - np.sum(wr[:, None] * overlap * log_s[None, :])
    return float(max(value, 0.0))


def holevo_chi(ensemble: Ensemble) -> float:
    return von_neumann_entropy(ensemble.average()) - sum(
        p * von_neumann_entropy(rho) for p, rho in ensemble.entries
    )


def partial_transpose(rho: DensityMatrix, part: int) -> np.ndarray:
    if not 0 <= part < len(rho.dims):
        raise DomainError(f"no subsystem {part} in dims {rho.dims}")
    n = len(rho.dims)
    t = rho.matrix.reshape(rho.dims * 2)
    axes = list(range(2 * n))
    axes[part], axes[n + part] = axes[n + part], axes[part]
    return t.transpose(axes).reshape(rho.dim, rho.dim)


def random_unitary(d: int, seed) -> np.ndarray:
    """Haar unitary: QR of a complex Gaussian matrix with the phases of R fixed."""
    rng = _as_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_isometry(d_in: int, d_out: int, seed) -> np.ndarray:
    if d_out < d_in:
        raise DomainError("isometry needs d_out >= d_in")
    return random_unitary(d_out, seed)[:, :d_in]


def random_pure(dims: Sequence[int], seed) -> StateVector:
    rng = _as_rng(seed)
    n = prod(dims)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return StateVector(tuple(dims), v / np.linalg.norm(v))


def random_density(d: int | Sequence[int], rank: int | None, seed) -> DensityMatrix:
    """Random state of the given rank: partial trace of a Haar-random purification."""
    dims = (d,) if isinstance(d, (int, np.integer)) else tuple(d)
    n = prod(dims)
    rank = n if rank is None else rank
    if not 1 <= rank <= n:
        raise DomainError(f"rank must lie in [1, {n}]")
    rng = _as_rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    m = g @ g.conj().T
    return DensityMatrix(hermitian_part(m / np.trace(m).real), dims, validate=False)
