"""Entanglement measures and the information-tradeoff checks.

Optimizations (entanglement of formation, squashed entanglement) return
upper bounds together with the witness that attains them; nothing here
certifies an infimum.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from math import prod
from typing import Any, Sequence

import numpy as np

from .errors import DomainError
from .qstate import (
    DensityMatrix,
    EIG_FLOOR,
    Ensemble,
    StateVector,
    binary_entropy,
    entropy_of,
    holevo_chi,
    hermitian_part,
    mu_helper,
    partial_trace,
    partial_transpose,
    purify,
    random_unitary,
    von_neumann_entropy,
    _as_rng,
)
from .search import givens_descent, random_starts

ISOMETRY_TOL = 1e-8


def _require_two_qubits(rho: DensityMatrix):
    if tuple(rho.dims) != (2, 2):
        raise DomainError(f"expected a two-qubit state, got dims {rho.dims}")


def _require_bipartite(rho: DensityMatrix):
    if len(rho.dims) != 2:
        raise DomainError(f"expected a bipartite state, got dims {rho.dims}")


SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4), l_i = sqrt eigenvalues of rho rho~."""
    _require_two_qubits(rho)
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    flipped = yy @ rho.matrix.conj() @ yy
    w = np.sort(np.sqrt(np.clip(np.linalg.eigvals(rho.matrix @ flipped).real, 0, None)))[::-1]
    return float(max(0.0, w[0] - w[1] - w[2] - w[3]))


def eof_from_concurrence(c: float) -> float:
    return binary_entropy((1 + np.sqrt(max(0.0, 1 - c * c))) / 2)


def eof_wootters(rho: DensityMatrix) -> float:
    return eof_from_concurrence(concurrence(rho))


def entanglement_entropy(psi: StateVector) -> float:
    """S(A) of a pure state on two parts."""
    if len(psi.dims) != 2:
        raise DomainError("expected a bipartite pure state")
    s = np.linalg.svd(np.asarray(psi.vector).reshape(psi.dims), compute_uv=False)
    p = s**2 / np.sum(s**2)
    p = p[p > EIG_FLOOR]
    return float(-np.sum(p * np.log2(p)))


def log_negativity(rho: DensityMatrix) -> float:
    _require_bipartite(rho)
    w = np.linalg.eigvalsh(hermitian_part(partial_transpose(rho, 1)))
    return float(max(0.0, np.log2(np.sum(np.abs(w)))))


def _digest(obj: Any) -> str:
    if isinstance(obj, ExtensionChannel):
        arr = obj.isometry
    elif isinstance(obj, PureEnsemble):
        arr = np.concatenate([obj.probs.astype(complex), obj.vectors.ravel()])
    else:
        arr = np.asarray(obj, dtype=complex)
    rounded = np.round(np.ascontiguousarray(arr), 10) + 0.0  # +0.0 folds -0.0
    return hashlib.sha256(rounded.tobytes()).hexdigest()[:16]


@dataclass(frozen=True)
class MeasureReport:
    value: float
    kind: str  # "upper-bound" or "exact"
    witness: Any = None

    def witness_digest(self) -> str:
        return _digest(self.witness) if self.witness is not None else ""

    def to_json(self) -> dict:
        return {"value": self.value, "kind": self.kind, "witness_digest": self.witness_digest()}


# -- entanglement of formation ---------------------------------------------


@dataclass(frozen=True)
class PureEnsemble:
    dims: tuple[int, int]
    probs: np.ndarray
    vectors: np.ndarray  # normalized, one per row

    def average(self) -> np.ndarray:
        return np.einsum("i,ia,ib->ab", self.probs, self.vectors, self.vectors.conj())

    def mean_entropy(self) -> float:
        return float(sum(p * entanglement_entropy(StateVector(self.dims, v)) for p, v in zip(self.probs, self.vectors) if p > 0))


def _reduced_entropies(M: np.ndarray) -> np.ndarray:
    """Entropy of M M^dagger / Tr for a stack of unnormalized dA x dB blocks."""
    if M.shape[-2:] == (2, 2):
        # eigenvalues (1 +/- sqrt(1 - 4|det M|^2 / Tr^2)) / 2
        tr = np.sum(np.abs(M) ** 2, axis=(-1, -2))
        det = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
        ratio = 4 * np.abs(det) ** 2 / np.where(tr > 0, tr, 1.0) ** 2
        low = np.clip((1 - np.sqrt(np.clip(1 - ratio, 0, 1))) / 2, EIG_FLOOR, 0.5)
        return -(low * np.log2(low) + (1 - low) * np.log2(1 - low))
    if M.shape[-2] > M.shape[-1]:
        M = np.swapaxes(M, -1, -2)
    G = M @ np.swapaxes(M, -1, -2).conj()
    tr = np.einsum("...ii->...", G).real
    safe = np.where(tr > 0, tr, 1.0)
    if G.shape[-1] == 2:
        a, d = G[..., 0, 0].real / safe, G[..., 1, 1].real / safe
        det = a * d - np.abs(G[..., 0, 1]) ** 2 / safe**2
        root = np.sqrt(np.clip((a + d) ** 2 / 4 - det, 0, None))
        w = np.stack([(a + d) / 2 + root, (a + d) / 2 - root], axis=-1)
    else:
        w = np.linalg.eigvalsh(G / safe[..., None, None])
    w = np.clip(w, EIG_FLOOR, None)
    return -np.sum(np.where(w > EIG_FLOOR, w * np.log2(w), 0.0), axis=-1)


def _eof_objective(n: int, dims: tuple[int, int]):
    """Row contributions p_i S(psi_i) for rows [W_i | psi_i] of the augmented matrix."""

    def objective(X, idx):
        psi = X[:, :, n:]
        p = np.sum(np.abs(psi) ** 2, axis=-1)
        ent = _reduced_entropies(psi.reshape(psi.shape[:2] + dims))
        return np.where(p > EIG_FLOOR, p * ent, 0.0)

    return objective


def _eigen_amplitudes(rho: DensityMatrix) -> np.ndarray:
    w, v = np.linalg.eigh(hermitian_part(rho.matrix))
    idx = np.flatnonzero(w > EIG_FLOOR)[::-1]
    return v[:, idx] * np.sqrt(w[idx])


def eof_bruteforce_batch(
    states: Sequence[DensityMatrix],
    ensemble_size: int | None = None,
    seed=0,
    restarts: int = 32,
    max_sweeps: int = 200,
    min_step: float = 1e-6,
) -> list[MeasureReport]:
    """Upper bounds on E_F for many states sharing dims and rank.

    Decompositions are rho = sum_i |psi_i><psi_i| with psi_i = sum_j U_ij sqrt(w_j) v_j,
    U the first rank columns of an N x N unitary.
    """
    if not states:
        return []
    dims = tuple(states[0].dims)
    if len(dims) != 2 or any(tuple(s.dims) != dims for s in states):
        raise DomainError("states must be bipartite with identical dims")
    amps = [_eigen_amplitudes(s) for s in states]
    rank = amps[0].shape[1]
    if any(a.shape[1] != rank for a in amps):
        raise DomainError("states must share their rank")
    n = rank if ensemble_size is None else ensemble_size
    if n < rank:
        raise DomainError(f"ensemble size {n} is below rank {rank}")
    A = np.repeat(np.stack(amps), restarts, axis=0)
    starts = _eof_starts(len(states), n, restarts, seed)
    # Givens moves act on rows, so psi = W[:, :rank] A^T rotates along with W
    X = np.concatenate([starts, starts[:, :, :rank] @ np.swapaxes(A, -1, -2)], axis=2)
    X, f = givens_descent(_eof_objective(n, dims), X, min_step=min_step, max_sweeps=max_sweeps, rowwise=True)
    f = f.reshape(len(states), restarts)
    X = X.reshape(len(states), restarts, n, -1)
    reports = []
    for i in range(len(states)):
        j = int(np.argmin(f[i]))
        psi = X[i, j][:, n:]
        p = np.sum(np.abs(psi) ** 2, axis=1)
        vec = psi / np.where(p > 0, np.sqrt(p), 1.0)[:, None]
        ens = PureEnsemble(dims, p, vec)
        reports.append(MeasureReport(float(f[i, j]), "upper-bound", ens))
    return reports


def _eof_starts(count: int, n: int, restarts: int, seed) -> np.ndarray:
    """Identity (eigen-decomposition) plus Haar-random mixings, per state."""
    out = []
    for i in range(count):
        block = [np.eye(n, dtype=complex)]
        if restarts > 1:
            block.extend(random_starts(n, restarts - 1, [int(seed), i]))
        out.append(np.stack(block))
    return np.concatenate(out)


def eof_bruteforce(rho: DensityMatrix, ensemble_size: int | None = None, seed=0, restarts: int = 32) -> MeasureReport:
    return eof_bruteforce_batch([rho], ensemble_size, seed, restarts)[0]


# -- extensions and squashed entanglement ----------------------------------


@dataclass(frozen=True)
class ExtensionChannel:
    """Channel given by an isometry from the input into output (x) environment."""

    input_dim: int
    output_dim: int
    isometry: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.isometry, dtype=complex)
        if V.ndim != 2 or V.shape[1] != self.input_dim or V.shape[0] % self.output_dim:
            raise DomainError(f"isometry shape {V.shape} does not fit {self.input_dim} -> {self.output_dim} x env")
        if np.max(np.abs(V.conj().T @ V - np.eye(self.input_dim))) > ISOMETRY_TOL:
            raise DomainError("matrix is not an isometry")
        object.__setattr__(self, "isometry", V)

    @property
    def env_dim(self) -> int:
        return self.isometry.shape[0] // self.output_dim

    def apply(self, m: np.ndarray) -> np.ndarray:
        V = self.isometry
        full = (V @ m @ V.conj().T).reshape(self.output_dim, self.env_dim, self.output_dim, self.env_dim)
        return np.einsum("aibi->ab", full)

    @classmethod
    def identity(cls, d: int) -> "ExtensionChannel":
        return cls(d, d, np.eye(d))

    @classmethod
    def replacer(cls, d: int, state: int = 0, out: int | None = None) -> "ExtensionChannel":
        """Trace out the input and prepare |state>; the input goes to the environment."""
        out = d if out is None else out
        V = np.zeros((out * d, d))
        for c in range(d):
            V[state * d + c, c] = 1
        return cls(d, out, V)

    @classmethod
    def measurement(cls, povm_rows: np.ndarray) -> "ExtensionChannel":
        """Measure the rank-one POVM {|m_y><m_y|} (rows m_y^dagger of an isometry)
        and output |y><y|."""
        M = np.asarray(povm_rows, dtype=complex)
        n, d = M.shape
        V = np.zeros((n * n, d), dtype=complex)
        for y in range(n):
            V[y * n + y] = M[y]
        return cls(d, n, V)


def random_channel(d_in: int, d_out: int, env_dim: int, seed) -> ExtensionChannel:
    if d_out * env_dim < d_in:
        raise DomainError("output times environment must be at least the input dimension")
    V = random_unitary(d_out * env_dim, seed)[:, :d_in]
    return ExtensionChannel(d_in, d_out, V)


def _pure_entropy(T: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Entropy of the marginal on `keep` for a batch of pure tensors T (batch axis first)."""
    n = T.ndim - 1
    keep = [k + 1 for k in keep]
    rest = [i for i in range(1, n + 1) if i not in keep]
    M = T.transpose([0] + keep + rest)
    dk = prod(T.shape[i] for i in keep)
    M = M.reshape(T.shape[0], dk, -1)
    return _reduced_entropies(M)


def _cmi_from_pure(T: np.ndarray) -> np.ndarray:
    """I(A;B|E) for pure tensors with axes (A, B, E, F)."""
    return (
        _pure_entropy(T, [0, 2])
        + _pure_entropy(T, [1, 2])
        - _pure_entropy(T, [3])  # S(ABE) = S(F)
        - _pure_entropy(T, [2])
    )


def extension_state(purification: StateVector, channel: ExtensionChannel) -> DensityMatrix:
    """rho^{ABE} from a purification on (A, B, C) and a channel C -> E."""
    dA, dB, dC = purification.dims
    if channel.input_dim != dC:
        raise DomainError("channel input does not match the purifying system")
    psi = np.asarray(purification.vector).reshape(dA * dB, dC)
    out = (psi @ channel.isometry.T).reshape(dA * dB * channel.output_dim, channel.env_dim)
    return DensityMatrix(out @ out.conj().T, (dA, dB, channel.output_dim), validate=False)


def squashed_value(purification: StateVector, channel: ExtensionChannel) -> float:
    """(1/2) I(A;B|E) for the extension defined by the channel."""
    dA, dB, dC = purification.dims
    if channel.input_dim != dC:
        raise DomainError("channel input does not match the purifying system")
    psi = np.asarray(purification.vector).reshape(dA, dB, dC)
    T = np.einsum("abc,xc->abx", psi, channel.isometry).reshape(1, dA, dB, channel.output_dim, channel.env_dim)
    return float(_cmi_from_pure(T)[0] / 2)


def _bipartite_purification(rho: DensityMatrix) -> StateVector:
    _require_bipartite(rho)
    return purify(rho)


def _copy_permutation(c: int, e: int, f: int) -> np.ndarray:
    """Unitary whose first c columns send |x> to |x>_E |x>_F."""
    n = e * f
    targets = [x * f + x for x in range(c)]
    others = [r for r in range(n) if r not in targets]
    W = np.zeros((n, n), dtype=complex)
    for col, row in enumerate(targets + others):
        W[row, col] = 1
    return W


def squashed_upper_bound(
    rho: DensityMatrix,
    env_dim: int | None = None,
    seed=0,
    restarts: int = 32,
    kraus_dim: int | None = None,
    max_sweeps: int = 60,
    max_moves: int = 256,
) -> MeasureReport:
    """Upper bound on squashed entanglement: min over channels C -> E of (1/2) I(A;B|E).

    C purifies rho. Channels are isometries C -> E (x) F with F of size
    kraus_dim (default: the rank). The trivial extension and the copy of
    the eigenbasis index are always among the starting points. Large
    searches visit max_moves random rotations per sweep.
    """
    purification = _bipartite_purification(rho)
    dA, dB, c = purification.dims
    e = dA * dB * dA * dB if env_dim is None else env_dim
    if e < 1:
        raise DomainError("env_dim must be at least 1")
    f = c if kraus_dim is None else kraus_dim
    if e * f < c:
        raise DomainError("env_dim * kraus_dim must be at least the rank")
    n = e * f
    psi = np.asarray(purification.vector).reshape(dA, dB, c)

    def objective(W, idx):
        V = W[:, :, :c]
        T = np.einsum("abc,rxc->rabx", psi, V).reshape(W.shape[0], dA, dB, e, f)
        return _cmi_from_pure(T) / 2

    starts = []
    if f >= c:
        starts.append(np.eye(n, dtype=complex))
    if e >= c and f >= c:
        starts.append(_copy_permutation(c, e, f))
    extra = max(restarts - len(starts), 0)
    if extra:
        starts.extend(random_starts(n, extra, seed))
    W, vals = givens_descent(objective, np.stack(starts), max_sweeps=max_sweeps, max_moves=max_moves, seed=seed)
    best = int(np.argmin(vals))
    channel = ExtensionChannel(c, e, W[best][:, :c])
    return MeasureReport(squashed_value(purification, channel), "upper-bound", channel)


def trivial_extension_value(rho: DensityMatrix) -> float:
    """(1/2) I(A;B), the value of the trivial extension."""
    _require_bipartite(rho)
    return (entropy_of(rho, [0]) + entropy_of(rho, [1]) - von_neumann_entropy(rho)) / 2


# -- benchmark states ------------------------------------------------------


def fourier_matrix(d: int, hadamard: bool = False) -> np.ndarray:
    """Discrete Fourier transform on C^d, or H^{(x) l} when d = 2^l and hadamard is set."""
    if hadamard:
        l = int(round(np.log2(d)))
        if 2**l != d:
            raise DomainError("the Hadamard variant needs d to be a power of two")
        H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        U = np.eye(1)
        for _ in range(l):
            U = np.kron(U, H)
        return U.astype(complex)
    j = np.arange(d)
    return np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)


def flower_state(d: int, hadamard: bool = False) -> tuple[DensityMatrix, StateVector]:
    """State on A, A', B, B' (dims d, 2, d, 2) and its purification with C (dim d)."""
    if d < 2:
        raise DomainError("d must be at least 2")
    U = [np.eye(d), fourier_matrix(d, hadamard)]
    psi = np.zeros((d, 2, d, 2, d), dtype=complex)
    for i in range(d):
        for j in range(2):
            psi[i, j, i, j, :] = U[j][:, i]
    psi /= np.sqrt(2 * d)
    vec = StateVector((d, 2, d, 2, d), psi.reshape(-1))
    m = psi.reshape(4 * d * d, d)
    return DensityMatrix(m @ m.conj().T, (d, 2, d, 2), validate=False), vec


def antisymmetric_state(d: int = 3) -> DensityMatrix:
    """Normalized projector onto the antisymmetric subspace of C^d (x) C^d."""
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[j * d + i, i * d + j] = 1
    P = (np.eye(d * d) - swap) / 2
    return DensityMatrix(P / np.trace(P), (d, d))


def werner_state(p: float) -> DensityMatrix:
    """p |Phi+><Phi+| + (1 - p) I/4."""
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return DensityMatrix(p * np.outer(phi, phi) + (1 - p) * np.eye(4) / 4, (2, 2))


# -- channel uncertainty and the gain/disturbance tradeoff ------------------


def _basis_states(d: int, hadamard: bool = False) -> list[list[np.ndarray]]:
    """Rows: computational basis, then its Fourier transform."""
    U = fourier_matrix(d, hadamard)
    eye = np.eye(d, dtype=complex)
    return [[eye[:, i] for i in range(d)], [U @ eye[:, i] for i in range(d)]]


@dataclass(frozen=True)
class UncertaintyReport:
    chi0: float
    chi1: float
    mutual: float

    @property
    def slack(self) -> float:
        return self.mutual - self.chi0 - self.chi1

    def holds(self, tol: float = 1e-8) -> bool:
        return self.slack >= -tol


def channel_mutual_information(channel: ExtensionChannel) -> float:
    """I(tau; Lambda) = S(tau) + S(Lambda(tau)) - S((id x Lambda) Phi_d)."""
    d = channel.input_dim
    tau = np.eye(d) / d
    out = channel.apply(tau)
    phi = np.eye(d).reshape(-1) / np.sqrt(d)
    V = channel.isometry
    vec = (phi.reshape(d, d) @ V.T).reshape(d * channel.output_dim, channel.env_dim)
    joint = vec @ vec.conj().T
    return float(
        np.log2(d)
        + von_neumann_entropy(DensityMatrix(out, validate=False))
        - von_neumann_entropy(DensityMatrix(joint, validate=False))
    )


def channel_uncertainty_check(channel: ExtensionChannel, d: int, hadamard: bool = False) -> UncertaintyReport:
    """chi(Lambda(E0)) + chi(Lambda(E1)) against I(tau; Lambda)."""
    if channel.input_dim != d:
        raise DomainError(f"channel input dimension {channel.input_dim} is not {d}")
    chis = []
    for basis in _basis_states(d, hadamard):
        outs = [DensityMatrix(channel.apply(np.outer(v, v.conj())), validate=False) for v in basis]
        chis.append(holevo_chi(Ensemble.uniform(outs)))
    return UncertaintyReport(chis[0], chis[1], channel_mutual_information(channel))


def measured_mutual_information(channel: ExtensionChannel, d: int, hadamard: bool = False) -> float:
    """Classical I(X;Y) for the uniform mixture of both bases, Y read off the
    (diagonal) channel output."""
    states = [v for basis in _basis_states(d, hadamard) for v in basis]
    joint = np.array([np.real(np.diag(channel.apply(np.outer(v, v.conj())))) for v in states])
    joint = np.clip(joint, 0, None) / len(states)
    py = joint.sum(axis=0)
    px = joint.sum(axis=1)
    mask = joint > EIG_FLOOR
    ratio = joint[mask] / (px[:, None] * py[None, :])[mask]
    return float(np.sum(joint[mask] * np.log2(ratio)))


@dataclass(frozen=True)
class TradeoffReport:
    epsilon: float
    info: float  # I(A;E)
    holevo_e: float  # chi of Eve's ensemble
    bound_info: float
    bound_holevo: float

    def holds(self, tol: float = 1e-8) -> bool:
        return self.info <= self.bound_info + tol and self.holevo_e <= self.bound_holevo + tol


def tradeoff_bounds(epsilon: float, d: int) -> tuple[float, float]:
    r = np.sqrt(max(epsilon, 0.0))
    return (
        8 * r * np.log2(d) + 4 * mu_helper(2 * r),
        4 * r * np.log2(d) + 2 * mu_helper(2 * r),
    )


def tradeoff_check(isometry: np.ndarray, d: int, hadamard: bool = False) -> TradeoffReport:
    """Eve applies an isometry S -> S~ (x) E and forwards S~.

    Disturbance is averaged over the 2d states of both bases.
    """
    V = np.asarray(isometry, dtype=complex)
    if V.ndim != 2 or V.shape[1] != d or V.shape[0] % d:
        raise DomainError(f"isometry of shape {V.shape} does not map C^{d} into C^{d} x E")
    channel_s = ExtensionChannel(d, d, V)  # keeps S~
    e = channel_s.env_dim
    # Channel to E: reorder output factors so E comes first.
    V_e = V.reshape(d, e, d).transpose(1, 0, 2).reshape(e * d, d)
    channel_e = ExtensionChannel(d, e, V_e)
    states = [v for basis in _basis_states(d, hadamard) for v in basis]
    fid = []
    eve = []
    for v in states:
        proj = np.outer(v, v.conj())
        sigma = channel_s.apply(proj)
        fid.append(np.real(v.conj() @ sigma @ v))
        eve.append(DensityMatrix(channel_e.apply(proj), validate=False))
    epsilon = float(max(0.0, 1 - np.mean(fid)))
    holevo_e = holevo_chi(Ensemble.uniform(eve))
    phi = np.eye(d).reshape(-1) / np.sqrt(d)
    joint = (phi.reshape(d, d) @ V.T).reshape(d, d, e)  # A, S~, E
    rho_ase = DensityMatrix.pure(joint.reshape(-1), (d, d, e))
    rho_ae = partial_trace(rho_ase, [0, 2])
    info = entropy_of(rho_ae, [0]) + entropy_of(rho_ae, [1]) - von_neumann_entropy(rho_ae)
    bi, bh = tradeoff_bounds(epsilon, d)
    return TradeoffReport(epsilon, float(info), float(holevo_e), float(bi), float(bh))


def identity_forwarding(d: int, env_dim: int = 1) -> np.ndarray:
    V = np.zeros((d * env_dim, d))
    for i in range(d):
        V[i * env_dim, i] = 1
    return V


def full_interception(d: int) -> np.ndarray:
    """Keep the input in E and forward half of a fresh maximally entangled pair."""
    # output order: S~, then E = (E1 = input copy, E2 = partner of S~)
    V = np.zeros((d, d, d, d), dtype=complex)  # S~, E1, E2, input
    for x in range(d):
        for j in range(d):
            V[j, x, j, x] = 1 / np.sqrt(d)
    return V.reshape(d * d * d, d)


def partial_interception(d: int, env_dim: int, strength: float, seed) -> np.ndarray:
    """exp(-i t H) on S (x) E applied to |psi>|0>, H a random Hermitian matrix."""
    rng = _as_rng(seed)
    n = d * env_dim
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = (G + G.conj().T) / 2
    w, v = np.linalg.eigh(H)
    U = (v * np.exp(-1j * strength * w)) @ v.conj().T
    return U @ identity_forwarding(d, env_dim)
