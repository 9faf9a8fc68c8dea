import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from coltomo import collective_recon as cr
from coltomo import dicke_tomo as dt
from coltomo import phase_space as ps
from coltomo.binary_pauli import canonical_pair, enumerate_triples
from coltomo.errors import DimensionError, DomainError, IncompleteDataError, UnsupportedFiducialError, ValidationError

XI = oracles.XI_DEFAULT


def embedded_psi(n, t):
    """Symmetric projection of a fiber representative, by permutation averaging."""
    a, b = canonical_pair(n, t)
    return oracles.symmetrizer_by_averaging(n) @ oracles.coherent(n, a, b)


def random_sym(rng, n):
    return dt.SymmetricDensity(n, oracles.random_density(rng, n + 1))


# ------------------------------------------------------------- embedding


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_embedding_and_symmetrizer(n, rng):
    e = dt.dicke_embedding(n)
    for l in range(n + 1):
        np.testing.assert_allclose(e[:, l], oracles.dicke(n, l), atol=1e-15)
    np.testing.assert_allclose(dt.symmetrizer(n), oracles.symmetrizer_by_averaging(n), atol=1e-12)
    c = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    v = dt.DickeVector(n, c)
    assert np.linalg.norm(v.embed()) ** 2 == pytest.approx(v.norm2, abs=1e-12)


def test_symmetric_density_validation(rng):
    with pytest.raises(DimensionError):
        dt.SymmetricDensity(2, np.eye(2))
    with pytest.raises(DimensionError):
        dt.DickeVector(2, np.ones(2))
    with pytest.raises(ValidationError):
        dt.SymmetricDensity(1, np.diag([1.2, -0.2])).validate()
    with pytest.raises(ValidationError):
        dt.SymmetricDensity(1, np.eye(2)).validate()
    with pytest.raises(ValidationError):
        dt.SymmetricDensity(1, np.array([[0.5, 0.2], [0.1, 0.5]])).validate()
    rho = random_sym(rng, 3)
    back = dt.SymmetricDensity.from_full(rho.embed())
    np.testing.assert_allclose(back.matrix, rho.matrix, atol=1e-12)


# ----------------------------------------------------------------- POVM


@pytest.mark.parametrize("n", [1, 2, 3])
def test_psi_is_projected_coherent_state(n):
    for t in enumerate_triples(n):
        for closed in (False, True):
            np.testing.assert_allclose(dt.build_psi(n, t, closed_form=closed).embed(), embedded_psi(n, t), atol=1e-10)


def test_psi_examples():
    np.testing.assert_allclose(dt.build_psi(3, (0, 0, 0)).embed(), oracles.fiducial(3), atol=1e-12)
    sym = oracles.symmetrizer_by_averaging(2)
    for a, b in itertools.product(range(4), repeat=2):
        if oracles.triple_of(a, b) == (1, 1, 0):
            np.testing.assert_allclose(dt.build_psi(2, (1, 1, 0)).embed(), sym @ oracles.coherent(2, a, b), atol=1e-10)
    with pytest.raises(DomainError):
        dt.build_psi(2, (2, 0, 0))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_povm_completeness(n):
    povm = dt.build_povm(n)
    np.testing.assert_allclose(povm.completeness(), 2 ** n * np.eye(n + 1), atol=1e-10)
    if n <= 3:
        for i, t in enumerate(povm.triples):
            assert povm.norms2[i] == pytest.approx(np.linalg.norm(embedded_psi(n, t)) ** 2, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_at_most_n_distinct_norms_for_small_n(n):
    assert len(dt.build_povm(n).distinct_norms()) <= n


@pytest.mark.parametrize("n,count", [(4, 5), (5, 6)])
def test_distinct_norm_count_beyond_three_qubits(n, count):
    """The count exceeds N from four qubits on; cross-checked on embedded vectors."""
    norms = sorted({round(float(np.linalg.norm(embedded_psi(n, t)) ** 2), 9) for t in enumerate_triples(n)})
    assert len(norms) == count
    assert len(dt.build_povm(n).distinct_norms()) == count


def test_single_qubit_povm_is_the_sic():
    u = dt.build_povm(1).unit_states
    gram = np.abs(u.conj() @ u.T) ** 2
    np.testing.assert_allclose(gram, np.where(np.eye(4, dtype=bool), 1, 1 / 3), atol=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_rank_one_identity(n):
    fid = ps.FiducialState(n)
    sym = dt.symmetrizer(n)
    for a, b in itertools.product(range(1 << n), repeat=2):
        psi = dt.build_psi(n, oracles.triple_of(a, b)).embed()
        np.testing.assert_allclose(sym @ ps.kernel(-1, a, b, fid) @ sym, np.outer(psi, psi.conj()), atol=1e-10)


# ---------------------------------------------------------------- A and K


def test_A_trivial():
    np.testing.assert_allclose(dt.build_A(1, (0, 0, 0)), np.eye(2))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_A_is_projected_monomial(n):
    e = dt.dicke_embedding(n)
    for a, b in itertools.product(range(1 << n), repeat=2):
        projected = e.T @ oracles.monomial(n, a, b) @ e
        np.testing.assert_allclose(dt.build_A(n, oracles.triple_of(a, b)), projected, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_K_is_projected_dual_kernel(n):
    fid = ps.FiducialState(n)
    e = dt.dicke_embedding(n)
    for t in enumerate_triples(n):
        a, b = canonical_pair(n, t)
        k = dt.build_K(n, t)
        np.testing.assert_allclose(k, e.T @ ps.kernel(1, a, b, fid) @ e, atol=1e-9)
        np.testing.assert_allclose(k, k.conj().T, atol=1e-10)


def test_K_fiber_average():
    n = 2
    e = dt.dicke_embedding(n)
    fiber = cr.fiber_kernel_sum(1, (0, 0, 0), ps.FiducialState(n))
    np.testing.assert_allclose(dt.build_K(n, (0, 0, 0)), e.T @ fiber @ e, atol=1e-9)


def test_K_rejects_other_fiducials():
    with pytest.raises(UnsupportedFiducialError):
        dt.build_K(2, (0, 0, 0), xi=0.2 + 0.9j)
    with pytest.raises(UnsupportedFiducialError):
        dt.build_omega(2, xi=0.2 + 0.9j)


# --------------------------------------------------------- measurement


def test_probability_examples():
    n = 3
    povm = dt.build_povm(n)
    xi_state = dt.build_psi(n, (0, 0, 0))
    rho = dt.SymmetricDensity(n, np.outer(xi_state.amplitudes, xi_state.amplitudes.conj()) / xi_state.norm2)
    assert dt.measure_probabilities(rho, povm)[(0, 0, 0)] == pytest.approx(1, abs=1e-12)
    p = dt.measure_probabilities(dt.SymmetricDensity(n, np.eye(n + 1) / (n + 1)), povm)
    np.testing.assert_allclose(list(p.values()), 1 / (n + 1), atol=1e-12)
    with pytest.raises(DimensionError):
        dt.measure_probabilities(dt.SymmetricDensity(2, np.eye(3) / 3), povm)


def test_weighted_sum_rule(rng):
    n = 3
    povm = dt.build_povm(n)
    for _ in range(10):
        p = dt.measure_probabilities(random_sym(rng, n), povm)
        values = np.array([p[t] for t in povm.triples])
        assert np.all((values >= -1e-12) & (values <= 1 + 1e-12))
        assert np.sum(values * povm.norms2 * povm.weights) == pytest.approx(2 ** n, abs=1e-9)


# ------------------------------------------------------ reconstruction


@given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_symmetric_roundtrip(n, seed):
    rho = random_sym(np.random.default_rng(seed), n)
    out = dt.reconstruct_symmetric(dt.measure_probabilities(rho, dt.build_povm(n)), n)
    np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-9)


def test_roundtrip_examples():
    d = np.zeros(5)
    d[2] = 1
    rho = dt.SymmetricDensity(4, np.outer(d, d))
    out = dt.reconstruct_symmetric(dt.measure_probabilities(rho, dt.build_povm(4)), 4)
    np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-10)
    ghz = (np.eye(8)[0] + np.eye(8)[7]) / math.sqrt(2)
    rho = dt.SymmetricDensity.from_full(np.outer(ghz, ghz))
    out = dt.reconstruct_symmetric(dt.measure_probabilities(rho, dt.build_povm(3)), 3)
    np.testing.assert_allclose(out.embed(), np.outer(ghz, ghz), atol=1e-9)


def test_reconstruction_needs_every_triple():
    p = dt.measure_probabilities(dt.SymmetricDensity(2, np.eye(3) / 3), dt.build_povm(2))
    del p[(1, 1, 0)]
    with pytest.raises(IncompleteDataError):
        dt.reconstruct_symmetric(p, 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_agrees_with_collective_reconstruction(n, rng):
    psi = oracles.random_symmetric_state(rng, n)
    full = cr.reconstruct_collective(cr.collective_expectations(np.outer(psi, psi.conj())))
    sym = dt.SymmetricDensity.from_full(np.outer(psi, psi.conj()))
    out = dt.reconstruct_symmetric(dt.measure_probabilities(sym, dt.build_povm(n)), n)
    np.testing.assert_allclose(out.embed(), full, atol=1e-9)


# ----------------------------------------------------------------- Omega


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_omega(n, rng):
    omega = dt.build_omega(n)
    povm = dt.build_povm(n)
    for _ in range(5):
        p = dt.measure_probabilities(random_sym(rng, n), povm)
        vec = np.array([p[t] for t in povm.triples])
        np.testing.assert_allclose(omega.matrix @ vec, vec, atol=1e-9)
        np.testing.assert_allclose(omega.constraint_basis() @ vec, 0, atol=1e-9)
    assert omega.rank() == dt.expected_constraint_rank(n) == n * (n * n - 1) // 6
    assert omega.independent_count() == n * n + 2 * n
    # the rank is stable across a wide band of thresholds
    assert omega.rank(1e-6) == omega.rank(1e-11) == omega.rank()
