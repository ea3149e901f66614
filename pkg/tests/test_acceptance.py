"""The eleven acceptance criteria, one test each, at their stated tolerances.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines
as they finish; the terminal summary repeats them.
"""
from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from spectrakit.characters import classical_h, kronecker
from spectrakit.entanglement import (
    ExtensionChannel,
    antisymmetric_state,
    channel_uncertainty_check,
    eof_bruteforce_batch,
    eof_wootters,
    entanglement_entropy,
    flower_state,
    identity_forwarding,
    partial_interception,
    random_channel,
    squashed_upper_bound,
    squashed_value,
    tradeoff_check,
    trivial_extension_value,
)
from spectrakit.partitions import (
    Partition,
    dim_symmetric,
    dim_unitary,
    enumerate_partitions,
    enumerate_semistandard_tableaux,
    enumerate_standard_tableaux,
    multinomial,
)
from spectrakit.qstate import (
    DensityMatrix,
    StateVector,
    binary_entropy,
    conditional_entropy,
    conditional_mutual_information,
    mu_helper,
    random_density,
    random_pure,
    relative_entropy,
    trace_distance,
    von_neumann_entropy,
)
from spectrakit.schurweyl import estimate_spectrum, keyl_werner_holds
from spectrakit.spectra import bravyi_check, bravyi_vertex_state, kron_scan, local_spectra, vertex_equalities

BELL = DensityMatrix.pure(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))


def report(number, ok, detail):
    print(f"\ncriterion {number:2d} {'PASS' if ok else 'FAIL'}: {detail}")


@pytest.mark.acceptance(1, "Kronecker holes")
def test_criterion_01_kronecker_holes():
    values = {
        "g(86,77,842)": kronecker((8, 6), (7, 7), (8, 4, 2)),
        "g(77,86,842)": kronecker((7, 7), (8, 6), (8, 4, 2)),
        "g(77,77,842)": kronecker((7, 7), (7, 7), (8, 4, 2)),
        "g(95,77,842)": kronecker((9, 5), (7, 7), (8, 4, 2)),
        "g(16 12,14 14,16 8 4)": kronecker((16, 12), (14, 14), (16, 8, 4)),
    }
    zeros = ["g(86,77,842)", "g(77,86,842)"]
    ok = all(values[k] == 0 for k in zeros) and all(v != 0 for k, v in values.items() if k not in zeros)
    report(1, ok, values)
    assert ok


@pytest.mark.acceptance(2, "Figure reproduction")
def test_criterion_02_figure_reproduction():
    ok = True
    for lam, holes in [((4, 2, 1), set()), ((8, 4, 2), {((8, 6), (7, 7)), ((7, 7), (8, 6))})]:
        cells = kron_scan(lam)
        red_not_black = [c for c in cells if c.red and not c.admissible]
        black_not_red = {(tuple(c.mu), tuple(c.nu)) for c in cells if c.admissible and not c.red}
        ok &= not red_not_black and black_not_red == holes
        report(2, ok, f"lambda={lam}: {len(cells)} cells, red outside black {len(red_not_black)}, g=0 admissible {sorted(black_not_red)}")
    assert ok


@pytest.mark.acceptance(3, "Dimension identities")
def test_criterion_03_dimension_identities():
    completeness = all(
        sum(dim_unitary(lam, d) * dim_symmetric(lam) for lam in enumerate_partitions(k, d)) == d**k
        for k in range(1, 9)
        for d in range(1, 4)
    )
    figure = dim_symmetric((3, 2)) == 5 and dim_unitary((3, 2), 2) == 2
    oracles = all(
        len(enumerate_standard_tableaux(lam)) == dim_symmetric(lam)
        and all(len(enumerate_semistandard_tableaux(lam, d)) == dim_unitary(lam, d) for d in range(1, 4))
        for k in range(1, 7)
        for lam in enumerate_partitions(k)
    )
    ok = completeness and figure and oracles
    report(3, ok, f"completeness {completeness}, f and t for (3,2) {figure}, enumeration {oracles}")
    assert ok


@pytest.mark.acceptance(4, "Classical analogue")
def test_criterion_04_classical_analogue():
    h = classical_h((3, 3), (4, 2))
    lhs = Fraction(factorial(6), factorial(3) * factorial(3)) * Fraction(factorial(6), factorial(4) * factorial(2))
    rhs = 2 * Fraction(factorial(6), factorial(3) * factorial(2)) + Fraction(factorial(6), 2 * 2)
    ok = h == {Partition([3, 2, 1]): 2, Partition([2, 2, 1, 1]): 1} and lhs == rhs
    ok &= multinomial((3, 3)) * multinomial((4, 2)) == lhs
    report(4, ok, f"h={ {tuple(k): v for k, v in h.items()} }, {lhs} = {rhs}")
    assert ok


@pytest.mark.acceptance(5, "Spectrum estimation")
def test_criterion_05_spectrum_estimation():
    rng = np.random.default_rng(5)
    bound_ok, sum_err = True, 0.0
    for i in range(100):
        rho = random_density(2 + i % 2, None, rng)
        for k in range(1, 13):
            dist = estimate_spectrum(rho, k)
            sum_err = max(sum_err, abs(dist.total() - 1))
            bound_ok &= all(keyl_werner_holds(rho, lam, k) for lam in dist.probs)
    mass = estimate_spectrum(DensityMatrix(np.diag([0.75, 0.25])), 20).mass_within(0.15)
    ok = bound_ok and sum_err <= 1e-8 and mass > 0.8
    report(5, ok, f"bound {bound_ok}, max |sum-1| {sum_err:.2e}, mass within 0.15 = {mass:.4f}")
    assert ok


@pytest.mark.acceptance(6, "Two-qubit inequalities")
def test_criterion_06_two_qubit_inequalities():
    rng = np.random.default_rng(6)
    worst = min(
        min(bravyi_check(local_spectra(random_density((2, 2), int(rng.integers(1, 5)), rng))).slacks.values())
        for _ in range(2000)
    )
    vertex_err = 0.0
    for _ in range(200):
        w = np.sort(rng.dirichlet(np.ones(3)))[::-1]
        rab = list(w) + [0.0]
        for vertex in "ABCD":
            eq = vertex_equalities(vertex, local_spectra(bravyi_vertex_state(vertex, rab)))
            vertex_err = max(vertex_err, max(abs(v) for v in eq.values()))
    ok = worst >= -1e-9 and vertex_err < 1e-9
    report(6, ok, f"worst slack {worst:.3e}, worst vertex equality {vertex_err:.2e}")
    assert ok


@pytest.mark.acceptance(7, "Wootters cross-check")
def test_criterion_07_wootters_cross_check():
    rng = np.random.default_rng(7)
    states = [random_density((2, 2), None, rng) for _ in range(2000)]
    reports = eof_bruteforce_batch(states, ensemble_size=4, seed=7, restarts=32)
    gaps = np.array([abs(eof_wootters(s) - r.value) for s, r in zip(states, reports)])
    bell = eof_wootters(BELL)
    ok = gaps.max() <= 1e-3 and abs(bell - 1) < 1e-12
    report(7, ok, f"max gap {gaps.max():.2e} over {len(states)} states, Bell {bell:.12f}")
    assert ok


def _separable(terms, rng):
    p = rng.dirichlet(np.ones(terms))
    m = sum(p[i] * np.kron(random_density(2, 1, rng).matrix, random_density(2, 1, rng).matrix) for i in range(terms))
    return DensityMatrix(m, (2, 2))


@pytest.mark.acceptance(8, "Squashed entanglement benchmarks")
def test_criterion_08_squashed_benchmarks():
    rng = np.random.default_rng(8)
    pure_err = 0.0
    for i in range(5):
        psi = random_pure((2, 2 + i % 2), rng)
        value = squashed_upper_bound(psi.density(), env_dim=2, restarts=2, seed=i).value
        pure_err = max(pure_err, abs(value - entanglement_entropy(psi)))
    separable = [
        squashed_upper_bound(_separable(t, rng), env_dim=t, restarts=8, seed=t).value for t in (2, 3)
    ]
    rho, psi = flower_state(2, hadamard=True)
    flower_trivial = trivial_extension_value(rho.with_dims((4, 4)))
    purification = StateVector((4, 4, 2), psi.vector)
    flower_min = min(squashed_value(purification, random_channel(2, 4, 2, seed=s)) for s in range(50))
    anti = trivial_extension_value(antisymmetric_state(3))
    ok = (
        pure_err <= 1e-8
        and max(separable) <= 1e-3
        and abs(flower_trivial - 1.5) <= 1e-10
        and flower_min >= 1.5 - 1e-6
        and abs(anti - 0.7925) <= 1e-4
    )
    report(
        8,
        ok,
        f"pure err {pure_err:.1e}, separable {max(separable):.1e}, flower {flower_trivial:.6f} "
        f"(min random {flower_min:.4f}), antisymmetric {anti:.6f}",
    )
    assert ok


@pytest.mark.acceptance(9, "Channel uncertainty")
def test_criterion_09_channel_uncertainty():
    rng = np.random.default_rng(9)
    worst = np.inf
    for d in (2, 3, 4, 8):
        for _ in range(500):
            d_out = int(rng.integers(1, d + 2))
            env = max(int(rng.integers(1, d + 1)), -(-d // d_out))
            worst = min(worst, channel_uncertainty_check(random_channel(d, d_out, env, rng), d).slack)
    equality = max(abs(channel_uncertainty_check(ExtensionChannel.identity(d), d).slack) for d in (2, 3, 4, 8))
    ok = worst >= -1e-8 and equality <= 1e-8
    report(9, ok, f"worst slack {worst:.2e} over 2000 channels, identity gap {equality:.1e}")
    assert ok


@pytest.mark.acceptance(10, "Gain/disturbance")
def test_criterion_10_gain_disturbance():
    rng = np.random.default_rng(10)
    failures, margin = 0, np.inf
    for d in (2, 4):
        for _ in range(100):
            iso = partial_interception(d, int(rng.integers(1, 4)), float(rng.uniform(0, 2)), rng)
            rep = tradeoff_check(iso, d)
            failures += not rep.holds()
            margin = min(margin, rep.bound_info - rep.info, rep.bound_holevo - rep.holevo_e)
    honest = tradeoff_check(identity_forwarding(4, 2), 4).info
    ok = failures == 0 and honest <= 1e-8
    report(10, ok, f"failures {failures}/200, smallest margin {margin:.3f}, honest I(A;E) {honest:.1e}")
    assert ok


@pytest.mark.acceptance(11, "Entropy properties")
def test_criterion_11_entropy_properties():
    rng = np.random.default_rng(11)
    ssa = pinsker = fannes = cond = 0
    for _ in range(500):
        dims = tuple(int(x) for x in rng.integers(2, 4, size=3))
        ssa += conditional_mutual_information(random_density(dims, int(rng.integers(1, 5)), rng)) >= -1e-8

        d = int(rng.integers(2, 5))
        rho, sigma = random_density(d, None, rng), random_density(d, None, rng)
        pinsker += trace_distance(rho, sigma) ** 2 <= np.log(2) / 2 * relative_entropy(rho, sigma) + 1e-12

        t = rng.uniform(0, 0.5) ** 2
        sigma = DensityMatrix((1 - t) * rho.matrix + t * sigma.matrix)
        eps = trace_distance(rho, sigma)
        gap = abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma))
        fannes += gap <= 2 * eps * np.log2(d) + mu_helper(eps) + 1e-12

        da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        rho, tau = random_density((da, db), None, rng), random_density((da, db), None, rng)
        sigma = DensityMatrix((1 - t) * rho.matrix + t * tau.matrix, (da, db))
        eps = 2 * trace_distance(rho, sigma)
        gap = abs(conditional_entropy(rho) - conditional_entropy(sigma))
        cond += gap <= 4 * eps * np.log2(da) + 2 * binary_entropy(eps) + 1e-12
    ok = ssa == pinsker == fannes == cond == 500
    report(11, ok, f"SSA {ssa}/500, Pinsker {pinsker}/500, Fannes {fannes}/500, conditional Fannes {cond}/500")
    assert ok
