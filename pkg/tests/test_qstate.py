import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectrakit.errors import DomainError
from spectrakit.qstate import (
    DensityMatrix,
    Ensemble,
    binary_entropy,
    conditional_entropy,
    conditional_mutual_information,
    entropy_of,
    fidelity,
    holevo_chi,
    mu_helper,
    mutual_information,
    partial_trace,
    partial_transpose,
    purify,
    random_density,
    random_pure,
    random_unitary,
    relative_entropy,
    trace_distance,
    von_neumann_entropy,
)

BELL = DensityMatrix.pure(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))
seeds = st.integers(0, 2**32 - 1)


def close_pair(d, seed, dims=None):
    """rho and a state within a random fraction of the way to another state."""
    rng = np.random.default_rng(seed)
    rho = random_density(dims or d, None, rng)
    tau = random_density(dims or d, None, rng)
    t = rng.uniform(0, 0.5) ** 2
    return rho, DensityMatrix((1 - t) * rho.matrix + t * tau.matrix, rho.dims)


def test_density_validation():
    with pytest.raises(DomainError):
        DensityMatrix(np.diag([0.5, 0.6]))
    with pytest.raises(DomainError):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(DomainError):
        DensityMatrix(np.array([[0.5, 0.5], [0, 0.5]]))
    with pytest.raises(DomainError):
        DensityMatrix(np.eye(4) / 4, (2, 3))


def test_density_is_immutable():
    rho = DensityMatrix.maximally_mixed(2)
    with pytest.raises(AttributeError):
        rho.dims = (1,)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_json_round_trip():
    rho = random_density((2, 3), None, seed=5)
    data = json.loads(json.dumps(rho.to_json()))
    back = DensityMatrix.from_json(data)
    assert back.dims == (2, 3)
    assert np.allclose(back.matrix, rho.matrix)
    with pytest.raises(DomainError):
        DensityMatrix.from_json({"dims": [2]})


def test_partial_trace_examples():
    rho, sigma = random_density(2, None, seed=1), random_density(3, None, seed=2)
    joint = rho.tensor(sigma)
    assert np.allclose(partial_trace(joint, [0]).matrix, rho.matrix)
    assert np.allclose(partial_trace(joint, [1]).matrix, sigma.matrix)
    assert np.allclose(partial_trace(BELL, [0]).matrix, np.eye(2) / 2)
    r1, r2, r3 = 0.5, 0.3, 0.2
    point_d = DensityMatrix(np.diag([r1, r3, r2, 0.0]), (2, 2))  # r1|00> + r3|01> + r2|10>
    assert np.allclose(partial_trace(point_d, [0]).matrix, np.diag([r1 + r3, r2]))
    assert np.allclose(partial_trace(point_d, [1]).matrix, np.diag([r1 + r2, r3]))


def test_partial_trace_errors():
    for keep in ([], [2], [0, 0]):
        with pytest.raises(DomainError):
            partial_trace(BELL, keep)


@settings(max_examples=30)
@given(seeds)
def test_partial_trace_keeps_trace(seed):
    rho = random_density((2, 3, 2), None, seed=seed)
    for keep in ([0], [1, 2], [0, 2]):
        assert np.trace(partial_trace(rho, keep).matrix).real == pytest.approx(1)


def test_purify_examples():
    pure = DensityMatrix.pure([0.6, 0.8j])
    psi = purify(pure)
    assert psi.dims == (2, 1)
    assert np.allclose(np.outer(psi.vector, psi.vector.conj()), pure.matrix)
    bell = purify(DensityMatrix.maximally_mixed(2))
    assert bell.dims == (2, 2)
    # maximally entangled up to a unitary on the ancilla
    assert np.allclose(partial_trace(bell.density(), [1]).matrix, np.eye(2) / 2)
    assert entropy_of(bell.density(), [0]) == pytest.approx(1)
    rho = random_density(3, 3, seed=4)
    psi = purify(rho)
    assert psi.dims == (3, 3)
    back = partial_trace(psi.density(), [0])
    assert np.max(np.abs(back.matrix - rho.matrix)) < 1e-10


def test_entropy_examples():
    assert von_neumann_entropy(BELL) == pytest.approx(0, abs=1e-12)
    assert von_neumann_entropy(DensityMatrix.maximally_mixed(5)) == pytest.approx(np.log2(5))
    assert von_neumann_entropy(DensityMatrix(np.diag([0.75, 0.25]))) == pytest.approx(0.8112781244591328)
    assert binary_entropy(0.25) == pytest.approx(0.8112781244591328)


def test_cmi_examples():
    rho_ab = random_density((2, 2), None, seed=3)
    product_e = rho_ab.tensor(random_density(3, None, seed=4))
    assert conditional_mutual_information(product_e) == pytest.approx(mutual_information(rho_ab))
    bell_e = BELL.tensor(DensityMatrix.pure([1, 0]))
    assert conditional_mutual_information(bell_e) == pytest.approx(2)
    # separable state with its flag register
    rng = np.random.default_rng(8)
    p = rng.dirichlet(np.ones(3))
    flagged = sum(
        p[i] * np.kron(np.kron(random_density(2, 1, rng).matrix, random_density(2, 1, rng).matrix), np.diag(np.eye(3)[i]))
        for i in range(3)
    )
    assert conditional_mutual_information(DensityMatrix(flagged, (2, 2, 3))) == pytest.approx(0, abs=1e-9)
    with pytest.raises(DomainError):
        conditional_mutual_information(BELL)


def test_distance_examples():
    rho = random_density(3, None, seed=9)
    assert trace_distance(rho, rho) == pytest.approx(0, abs=1e-12)
    assert fidelity(rho, rho) == pytest.approx(1)
    zero, one = DensityMatrix.pure([1, 0]), DensityMatrix.pure([0, 1])
    assert trace_distance(zero, one) == pytest.approx(1)
    assert fidelity(zero, one) == pytest.approx(0, abs=1e-12)
    half = DensityMatrix.maximally_mixed(2)
    assert trace_distance(zero, half) == pytest.approx(0.5)
    assert fidelity(zero, half) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        trace_distance(zero, rho)


@settings(max_examples=50)
@given(st.integers(2, 4), seeds)
def test_fuchs_van_de_graaf(d, seed):
    rng = np.random.default_rng(seed)
    rho, sigma = random_density(d, None, rng), random_density(d, None, rng)
    delta, f = trace_distance(rho, sigma), fidelity(rho, sigma)
    assert delta == pytest.approx(trace_distance(sigma, rho))
    assert f == pytest.approx(fidelity(sigma, rho), abs=1e-9)
    assert 1 - np.sqrt(f) <= delta + 1e-8
    assert delta <= np.sqrt(1 - f) + 1e-8


def test_holevo_examples():
    rho = random_density(2, None, seed=1)
    assert holevo_chi(Ensemble(((1.0, rho),))) == pytest.approx(0, abs=1e-12)
    basis = [DensityMatrix.pure(np.eye(4)[i]) for i in range(4)]
    assert holevo_chi(Ensemble.uniform(basis)) == pytest.approx(2)
    plus = DensityMatrix.pure([1, 1])
    # average of |0><0| and |+><+| has eigenvalues cos^2(pi/8), sin^2(pi/8)
    expected = binary_entropy(np.cos(np.pi / 8) ** 2)
    assert holevo_chi(Ensemble.uniform([basis[0].__class__.pure([1, 0]), plus])) == pytest.approx(expected)
    assert expected == pytest.approx(0.6008760366928562)


def test_ensemble_validation():
    rho = DensityMatrix.maximally_mixed(2)
    with pytest.raises(DomainError):
        Ensemble(((0.5, rho), (0.6, rho)))
    with pytest.raises(DomainError):
        Ensemble(((0.5, rho), (0.5, DensityMatrix.maximally_mixed(3))))


def test_relative_entropy_examples():
    rho = random_density(3, None, seed=2)
    assert relative_entropy(rho, rho) == pytest.approx(0, abs=1e-10)
    assert relative_entropy(DensityMatrix(np.diag([1.0, 0.0])), DensityMatrix.maximally_mixed(2)) == pytest.approx(1)
    assert relative_entropy(DensityMatrix.maximally_mixed(2), DensityMatrix(np.diag([1.0, 0.0]))) == float("inf")


def test_partial_transpose_bell():
    w = np.linalg.eigvalsh(partial_transpose(BELL, 1))
    assert np.allclose(sorted(w), [-0.5, 0.5, 0.5, 0.5])
    with pytest.raises(DomainError):
        partial_transpose(BELL, 2)


@settings(max_examples=30)
@given(seeds, st.integers(0, 1))
def test_partial_transpose_preserves_trace_and_hermiticity(seed, part):
    pt = partial_transpose(random_density((2, 3), None, seed=seed), part)
    assert np.trace(pt).real == pytest.approx(1)
    assert np.allclose(pt, pt.conj().T)


def test_random_generators_are_seeded():
    assert np.array_equal(random_unitary(4, 7), random_unitary(4, 7))
    assert not np.array_equal(random_unitary(4, 7), random_unitary(4, 8))
    u = random_unitary(5, 1)
    assert np.allclose(u @ u.conj().T, np.eye(5))
    assert np.array_equal(random_pure((2, 2), 3).vector, random_pure((2, 2), 3).vector)
    assert np.linalg.matrix_rank(random_density(4, 2, seed=1).matrix, tol=1e-10) == 2
    with pytest.raises(DomainError):
        random_unitary(3, None)
    with pytest.raises(DomainError):
        random_density(2, 3, seed=0)


def test_haar_first_moment():
    # E|U_00|^2 = 1/d for Haar unitaries
    rng = np.random.default_rng(0)
    vals = [abs(random_unitary(3, rng)[0, 0]) ** 2 for _ in range(4000)]
    assert np.mean(vals) == pytest.approx(1 / 3, abs=0.02)


@settings(max_examples=100)
@given(seeds)
def test_strong_subadditivity(seed):
    rng = np.random.default_rng(seed)
    dims = tuple(int(x) for x in rng.integers(2, 4, size=3))
    rho = random_density(dims, int(rng.integers(1, 5)), rng)
    assert conditional_mutual_information(rho) >= -1e-8


@settings(max_examples=100)
@given(st.integers(2, 4), seeds)
def test_pinsker(d, seed):
    rng = np.random.default_rng(seed)
    rho, sigma = random_density(d, None, rng), random_density(d, None, rng)
    assert trace_distance(rho, sigma) ** 2 <= np.log(2) / 2 * relative_entropy(rho, sigma) + 1e-12


@settings(max_examples=100)
@given(st.integers(2, 5), seeds)
def test_fannes(d, seed):
    rho, sigma = close_pair(d, seed)
    eps = trace_distance(rho, sigma)
    gap = abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma))
    assert gap <= 2 * eps * np.log2(d) + mu_helper(eps) + 1e-12


@settings(max_examples=100)
@given(st.integers(2, 3), st.integers(2, 3), seeds)
def test_conditional_fannes(da, db, seed):
    rho, sigma = close_pair(None, seed, dims=(da, db))
    eps = 2 * trace_distance(rho, sigma)
    gap = abs(conditional_entropy(rho) - conditional_entropy(sigma))
    assert gap <= 4 * eps * np.log2(da) + 2 * binary_entropy(eps) + 1e-12


@settings(max_examples=50)
@given(seeds)
def test_monotonicity_under_partial_trace(seed):
    rng = np.random.default_rng(seed)
    rho, sigma = random_density((2, 3), None, rng), random_density((2, 3), None, rng)
    for keep in ([0], [1]):
        r, s = partial_trace(rho, keep), partial_trace(sigma, keep)
        assert trace_distance(r, s) <= trace_distance(rho, sigma) + 1e-10
        assert relative_entropy(r, s) <= relative_entropy(rho, sigma) + 1e-9


@settings(max_examples=50)
@given(st.integers(2, 4), st.integers(2, 5), seeds)
def test_holevo_bounds_measured_information(d, n, seed):
    rng = np.random.default_rng(seed)
    probs = rng.dirichlet(np.ones(n))
    states = [random_density(d, None, rng) for _ in range(n)]
    ens = Ensemble(tuple(zip(probs, states)))
    basis = random_unitary(d, rng)
    joint = np.array([[p * np.real(basis[:, y].conj() @ s.matrix @ basis[:, y]) for y in range(d)] for p, s in zip(probs, states)])
    px, py = joint.sum(1), joint.sum(0)
    mask = joint > 1e-15
    info = np.sum(joint[mask] * np.log2(joint[mask] / np.outer(px, py)[mask]))
    chi = holevo_chi(ens)
    assert info <= chi + 1e-8
    assert -1e-10 <= chi <= von_neumann_entropy(ens.average()) + 1e-10


@settings(max_examples=50)
@given(st.integers(2, 3), st.integers(2, 3), seeds)
def test_subadditivity_and_triangle(da, db, seed):
    rho = random_density((da, db), None, seed=seed)
    sa, sb, sab = entropy_of(rho, [0]), entropy_of(rho, [1]), von_neumann_entropy(rho)
    assert abs(sa - sb) <= sab + 1e-9
    assert sab <= sa + sb + 1e-9
