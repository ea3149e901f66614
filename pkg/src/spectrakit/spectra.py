"""Admissible spectral triples: two-qubit inequalities, vertex states,
Kronecker-lattice scans and the Horn problem."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .characters import kronecker, littlewood_richardson
from .config import CHARACTER_TABLE_CAP, thread_count
from .errors import DomainError, ResourceError
from .partitions import Partition, as_partition, enumerate_partitions
from .qstate import DensityMatrix, partial_trace
from .search import givens_descent, random_starts

SLACK_TOL = 1e-9
SUM_TOL = 1e-10


def _probability_vector(r: Sequence[float], name: str) -> tuple[float, ...]:
    r = tuple(sorted((float(x) for x in r), reverse=True))
    if not r or abs(sum(r) - 1) > SUM_TOL or r[-1] < -SUM_TOL:
        raise DomainError(f"{name} is not a probability vector: {r}")
    return r


@dataclass(frozen=True)
class SpectralTriple:
    """Sorted spectra of rho^A, rho^B and rho^AB."""

    rA: tuple[float, ...]
    rB: tuple[float, ...]
    rAB: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "rA", _probability_vector(self.rA, "rA"))
        object.__setattr__(self, "rB", _probability_vector(self.rB, "rB"))
        object.__setattr__(self, "rAB", _probability_vector(self.rAB, "rAB"))
        if len(self.rAB) > len(self.rA) * len(self.rB):
            raise DomainError("rAB has more entries than dim A * dim B")

    @classmethod
    def from_frames(cls, mu, nu, lam) -> "SpectralTriple":
        mu, nu, lam = as_partition(mu), as_partition(nu), as_partition(lam)
        return cls(mu.normalized(2), nu.normalized(2), lam.normalized(4))


@dataclass(frozen=True)
class BravyiReport:
    a: float
    b: float
    slacks: dict = field(default_factory=dict)

    @property
    def admissible(self) -> bool:
        return all(v >= -SLACK_TOL for v in self.slacks.values())

    def __bool__(self):
        return self.admissible


def bravyi_inequalities(a: float, b: float, rAB: Sequence[float]) -> BravyiReport:
    """Slack of each two-qubit inequality; a, b are mapped to the smaller local eigenvalue."""
    r = sorted((float(x) for x in rAB), reverse=True)
    if len(r) > 4:
        raise DomainError("rAB must have at most 4 entries")
    r1, r2, r3, r4 = r + [0.0] * (4 - len(r))
    a, b = min(a, 1 - a), min(b, 1 - b)
    slacks = {
        "a>=r3+r4": a - (r3 + r4),
        "b>=r3+r4": b - (r3 + r4),
        "a+b>=r2+r3+2r4": a + b - (r2 + r3 + 2 * r4),
        "|a-b|<=min(r1-r3,r2-r4)": min(r1 - r3, r2 - r4) - abs(a - b),
    }
    return BravyiReport(a, b, slacks)


def bravyi_check(triple: SpectralTriple) -> BravyiReport:
    if len(triple.rA) != 2 or len(triple.rB) != 2:
        raise DomainError("two-qubit check needs local spectra of length 2")
    return bravyi_inequalities(triple.rA[1], triple.rB[1], triple.rAB)


def local_spectra(rho: DensityMatrix) -> SpectralTriple:
    if len(rho.dims) != 2:
        raise DomainError(f"expected a bipartite state, got dims {rho.dims}")
    return SpectralTriple(
        partial_trace(rho, [0]).eigenvalues(),
        partial_trace(rho, [1]).eigenvalues(),
        rho.eigenvalues(),
    )


def _ket(*bits: int) -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[2 * bits[0] + bits[1]] = 1
    return v


def _mix(weights, vectors) -> DensityMatrix:
    m = sum(w * np.outer(v, v.conj()) for w, v in zip(weights, vectors))
    return DensityMatrix(m, (2, 2), validate=False)


def bravyi_vertex_state(vertex: str, rAB: Sequence[float]) -> DensityMatrix:
    """A two-qubit state with spectrum rAB whose local spectra sit on a vertex
    of the admissible polygon.

    A: a = b = 1/2 (Bell-diagonal state).
    B: a = 1/2 and a - b = min(r2, r1 - r3).
    C: b = r3 and a - b = min(r2, r1 - r3).
    D: b = r3 and a + b = r2 + r3.
    B, C and D need r4 = 0.
    """
    vertex = str(vertex).upper()
    if vertex not in "ABCD" or len(vertex) != 1:
        raise DomainError(f"unknown vertex {vertex!r}")
    r = list(_probability_vector(rAB, "rAB"))
    if len(r) > 4:
        raise DomainError("rAB must have at most 4 entries")
    r1, r2, r3, r4 = r + [0.0] * (4 - len(r))
    if vertex == "A":
        s = 1 / np.sqrt(2)
        bell = [
            s * (_ket(0, 0) + _ket(1, 1)),
            s * (_ket(0, 0) - _ket(1, 1)),
            s * (_ket(0, 1) + _ket(1, 0)),
            s * (_ket(0, 1) - _ket(1, 0)),
        ]
        return _mix([r1, r2, r3, r4], bell)
    if r4 > SUM_TOL:
        raise DomainError(f"vertex {vertex} needs r4 = 0")
    if vertex == "B":
        if r2 <= r1 - r3:
            alpha2 = (0.5 - r2 - r3) / (r1 - r3)
            beta2 = 1.0
        else:
            alpha2 = 0.0
            beta2 = (0.5 - r3) / r2
        alpha2, beta2 = min(max(alpha2, 0.0), 1.0), min(max(beta2, 0.0), 1.0)
        al, al_c = np.sqrt(alpha2), np.sqrt(1 - alpha2)
        be, be_c = np.sqrt(beta2), np.sqrt(1 - beta2)
        psi1 = al * _ket(0, 0) + al_c * _ket(1, 1)
        psi2 = be * _ket(0, 1) + be_c * _ket(1, 0)
        psi3 = al_c * _ket(0, 0) - al * _ket(1, 1)
        return _mix([r1, r2, r3], [psi1, psi2, psi3])
    if vertex == "C":
        if r2 <= r1 - r3:
            return _mix([r1, r2, r3], [_ket(0, 0), _ket(1, 0), _ket(1, 1)])
        return _mix([r1, r2, r3], [_ket(1, 0), _ket(0, 0), _ket(0, 1)])
    return _mix([r1, r2, r3], [_ket(0, 0), _ket(1, 0), _ket(0, 1)])


def vertex_equalities(vertex: str, triple: SpectralTriple) -> dict[str, float]:
    """Residuals of the equalities that define each vertex."""
    r1, r2, r3, r4 = list(triple.rAB) + [0.0] * (4 - len(triple.rAB))
    a, b = triple.rA[1], triple.rB[1]
    gap = min(r1 - r3, r2 - r4)
    table = {
        "A": {"a=1/2": a - 0.5, "b=1/2": b - 0.5},
        "B": {"a=1/2": max(a, b) - 0.5, "|a-b|=gap": abs(a - b) - gap},
        "C": {"b=r3+r4": b - (r3 + r4), "a-b=gap": a - b - gap},
        "D": {"b=r3+r4": b - (r3 + r4), "a+b=r2+r3+2r4": a + b - (r2 + r3 + 2 * r4)},
    }
    return table[vertex.upper()]


@dataclass(frozen=True)
class ScanCell:
    mu: Partition
    nu: Partition
    g: int
    admissible: bool

    @property
    def red(self) -> bool:
        return self.g != 0

    def row(self) -> list:
        mu, nu = self.mu.padded(2), self.nu.padded(2)
        return [mu[0], mu[1], nu[0], nu[1], self.g, int(self.admissible)]

    def to_json(self) -> dict:
        return {"mu": list(self.mu), "nu": list(self.nu), "g": self.g, "admissible": self.admissible}


SCAN_COLUMNS = ["mu1", "mu2", "nu1", "nu2", "g", "admissible"]


def kron_scan(lam, workers: int | None = None, cap: int = CHARACTER_TABLE_CAP) -> list[ScanCell]:
    """Kronecker coefficient and two-qubit admissibility for every pair of
    two-row frames mu, nu of |lambda|, ordered by (mu1-mu2, nu1-nu2)."""
    lam = as_partition(lam)
    if len(lam) > 4:
        raise DomainError("scan frames must have at most 4 rows")
    k = lam.size()
    if k > cap:
        raise ResourceError(f"k={k} exceeds the character cap {cap}")
    frames = sorted(enumerate_partitions(k, 2), key=lambda p: p.padded(2)[0] - p.padded(2)[1])
    pairs = [(mu, nu) for mu in frames for nu in frames]

    def cell(pair):
        mu, nu = pair
        report = bravyi_check(SpectralTriple.from_frames(mu, nu, lam))
        return ScanCell(mu, nu, kronecker(mu, nu, lam), report.admissible)

    with ThreadPoolExecutor(max_workers=workers or thread_count()) as pool:
        return list(pool.map(cell, pairs))


def scan_csv(cells: Sequence[ScanCell]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for c in cells:
        writer.writerow(c.row())
    return buf.getvalue()


@dataclass(frozen=True)
class HornResult:
    residual: float
    A: np.ndarray
    B: np.ndarray
    p: float

    def spectrum(self) -> np.ndarray:
        c = self.p * self.A + (1 - self.p) * self.B
        return np.linalg.eigvalsh((c + c.conj().T) / 2)[::-1]


def _pad(v: Sequence[float], n: int) -> np.ndarray:
    v = sorted((float(x) for x in v), reverse=True)
    return np.array(v + [0.0] * (n - len(v)))


def horn_oracle(mu, nu, lam, p: float, restarts: int = 64, seed=0) -> HornResult:
    """Search for A, B with spectra mu, nu such that pA + (1-p)B has spectrum lambda.

    A is fixed diagonal; B = V diag(nu) V^dagger with V found by Givens descent.
    The residual is the Euclidean distance between sorted spectra.
    """
    if not 0 <= p <= 1:
        raise DomainError("p must lie in [0, 1]")
    n = max(len(mu), len(nu), len(lam))
    m, v, target = _pad(mu, n), _pad(nu, n), _pad(lam, n)
    A = np.diag(m).astype(complex)

    def objective(V, idx):
        B = np.einsum("bij,j,bkj->bik", V, v, V.conj())
        w = np.linalg.eigvalsh(p * A + (1 - p) * B)[:, ::-1]
        return np.linalg.norm(w - target, axis=1)

    V, f = givens_descent(objective, random_starts(n, restarts, seed), min_step=1e-9, phases=True)
    best = int(np.argmin(f))
    B = V[best] @ np.diag(v) @ V[best].conj().T
    return HornResult(float(f[best]), A, B, p)


@dataclass(frozen=True)
class HornInstance:
    """Positive, unit-trace version of a Hermitian Horn instance.

    A' = A + R, B' = B + S, A'' = A'/Tr A', B'' = B'/Tr B' and
    p = Tr A' / (Tr A' + Tr B'), so that pA'' + (1-p)B'' = C'/Tr C'.
    """

    mu: tuple[float, ...]
    nu: tuple[float, ...]
    p: float
    shift_mu: float
    shift_nu: float
    trace_a: float
    trace_b: float

    @property
    def trace_c(self) -> float:
        return self.trace_a + self.trace_b

    def inverse_spectrum(self, lam_state: Sequence[float]) -> np.ndarray:
        """Map a spectrum of pA'' + (1-p)B'' back to a spectrum of A + B."""
        return np.asarray(lam_state, float) * self.trace_c - (self.shift_mu + self.shift_nu)

    def inverse_operators(self, A2: np.ndarray, B2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Map state witnesses A'', B'' back to Hermitian operators A, B."""
        eye = np.eye(A2.shape[0])
        return A2 * self.trace_a - self.shift_mu * eye, B2 * self.trace_b - self.shift_nu * eye


def horn_shift_rescale(muH: Sequence[float], nuH: Sequence[float]) -> HornInstance:
    mu = np.asarray(sorted(muH, reverse=True), float)
    nu = np.asarray(sorted(nuH, reverse=True), float)
    if mu.size == 0 or nu.size == 0 or not (np.all(np.isfinite(mu)) and np.all(np.isfinite(nu))):
        raise DomainError("spectra must be finite and nonempty")
    if mu.size != nu.size:
        raise DomainError("A and B must act on the same space")
    R = max(0.0, -float(mu.min()))
    S = max(0.0, -float(nu.min()))
    mu1, nu1 = mu + R, nu + S
    ta, tb = float(mu1.sum()), float(nu1.sum())
    if ta + tb <= 0:
        raise DomainError("shifted operators have zero total trace")
    uniform = np.full(mu.size, 1 / mu.size)
    mu2 = mu1 / ta if ta > 0 else uniform
    nu2 = nu1 / tb if tb > 0 else uniform
    return HornInstance(tuple(float(x) for x in mu2), tuple(float(x) for x in nu2), ta / (ta + tb), R, S, ta, tb)


def nearest_lr_triple(spec_a, spec_b, spec_c, k: int, a: int) -> tuple[float, tuple[Partition, Partition, Partition] | None]:
    """Closest (mu, nu, lambda) with c^lambda_{mu nu} != 0, mu |- a, nu |- k - a.

    Distance is the largest L1 gap among mu - a r^A, nu - (k-a) r^B and
    lambda - k r^C, divided by k, so the three spectra are compared on the
    scale of the joint frame.
    """
    if not 0 < a < k:
        raise DomainError("need 0 < a < k")
    d = max(len(spec_a), len(spec_b), len(spec_c))
    ra, rb, rc = _pad(spec_a, d), _pad(spec_b, d), _pad(spec_c, d)
    best, arg = float("inf"), None
    for mu in enumerate_partitions(a, d):
        da = np.abs(_pad(mu, d) - a * ra).sum()
        for nu in enumerate_partitions(k - a, d):
            db = np.abs(_pad(nu, d) - (k - a) * rb).sum()
            for lam in enumerate_partitions(k, d):
                dist = max(da, db, np.abs(_pad(lam, d) - k * rc).sum()) / k
                if dist < best and littlewood_richardson(mu, nu, lam):
                    best, arg = dist, (mu, nu, lam)
    return best, arg
