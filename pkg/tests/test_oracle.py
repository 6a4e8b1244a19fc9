import math

import numpy as np
import pytest

from bethe_mps import oracle
from bethe_mps.bethe import ChainParams, ground_state
from bethe_mps.errors import PreconditionError
from bethe_mps.wavefunction import amplitudes, antisymmetrize, state_vector


def ground(N, U):
    p = ChainParams(N, U)
    return amplitudes(ground_state(p), p)


def apply_h_by_hand(m1, m2, N, J, U):
    """H c^dag_m1 c^dag_m2 |0> written out term by term (1-based, m1 < m2)."""
    out = {}

    def add(a, b, c):
        if a == b:
            return
        sign = 1.0 if a < b else -1.0
        key = (min(a, b), max(a, b))
        out[key] = out.get(key, 0.0) + sign * c

    for j in range(1, N + 1):
        nxt = j % N + 1
        for src, dst in ((nxt, j), (j, nxt)):
            # c^dag_dst c_src moves a fermion from src to dst
            if src == m1 and dst != m2:
                add(dst, m2, J)
            elif src == m2 and dst != m1:
                add(m1, dst, J)
        if {j, nxt} == {m1, m2}:
            out[(m1, m2)] = out.get((m1, m2), 0.0) + U
    return out


@pytest.mark.parametrize("N,J,U", [(3, 1.0, 0.0), (4, 0.7, -1.3), (6, 1.0, 2.0)])
def test_hamiltonian_matches_operator_algebra(N, J, U):
    H = oracle.dense_hamiltonian(ChainParams(N, U, J))
    m1, m2 = oracle.pair_basis(N)
    for col, (a, b) in enumerate(zip(m1, m2)):
        ref = np.zeros(H.shape[0])
        for (x, y), c in apply_h_by_hand(a, b, N, J, U).items():
            ref[oracle.pair_index(x, y, N)] += c
        assert np.allclose(H[:, col], ref)
    assert np.array_equal(H, H.T)


def test_interaction_only_is_adjacency():
    H = oracle.dense_hamiltonian(ChainParams(3, -1.0, 0.0))
    # on a ring of three every pair is adjacent
    assert np.array_equal(H, -np.eye(3))


def test_exact_ground_examples():
    E0, E1, v = oracle.exact_ground(ChainParams(5, 0.0))
    assert E0 == pytest.approx(-1 - math.sqrt(5), abs=1e-12)
    p = ChainParams(5, -2.0)
    assert oracle.exact_ground(p)[0] == pytest.approx(ground_state(p).E, abs=1e-10)
    w = np.linalg.eigvalsh(oracle.dense_hamiltonian(ChainParams(6, 1.0)))
    assert np.min(np.abs(w - 1.0)) < 1e-12


def test_sparse_route_residual():
    p = ChainParams(101, -2.0)
    E0, E1, v = oracle.exact_ground(p)
    H = oracle.sparse_hamiltonian(p)
    assert np.linalg.norm(H @ v - E0 * v) <= 1e-9
    assert E1 > E0


def test_sector_schmidt_hand_cases():
    A = np.zeros((5, 5))
    A[0, 1], A[1, 0] = 1.0, -1.0
    assert np.allclose(oracle.sector_schmidt(A, 2).schmidt, [1.0])
    A = np.zeros((5, 5))
    A[1, 2], A[2, 1] = 1.0, -1.0
    s = oracle.sector_schmidt(A, 2)
    assert np.allclose(s.schmidt, [1.0]) and s.sv_11.max() == 1.0 and s.w_20 == 0 and s.w_02 == 0
    with pytest.raises(PreconditionError):
        oracle.sector_schmidt(A, 5)


@pytest.mark.parametrize("N,U", [(10, -2.0), (8, -2.0), (9, 1.0)])
def test_sector_spectra_match_partial_trace(N, U):
    p = ChainParams(N, U)
    E0, _, v = oracle.exact_ground(p)
    a = np.zeros((N, N))
    i, j = np.triu_indices(N, 1)
    a[i, j] = v
    A = a - a.T
    for L in range(1, N):
        sec = oracle.sector_schmidt(A, L)
        w, S = oracle.partial_trace_entropy(v, L, N)
        ours = np.zeros(w.size)
        ours[: sec.schmidt.size] = np.sort(sec.schmidt**2)[::-1]
        assert np.max(np.abs(ours - np.sort(w)[::-1])) <= 1e-10
        assert sec.entropy == pytest.approx(S, abs=1e-10)
        assert np.sum(sec.schmidt**2) == pytest.approx(1.0, abs=1e-10)


def test_partial_trace_trivial_cases():
    v = np.zeros(10)
    v[oracle.pair_index(1, 2, 5)] = 1.0
    assert oracle.partial_trace_entropy(v, 2, 5)[1] == pytest.approx(0.0, abs=1e-15)
    assert oracle.partial_trace_entropy(v, 5, 5)[1] == 0.0


@pytest.mark.parametrize("N,U", [(11, -2.0), (15, 3.0)])
def test_profile_reflection_symmetry(N, U):
    S = oracle.sector_entropy_profile(antisymmetrize(ground(N, U)).A)
    assert np.max(np.abs(S - S[::-1])) <= 1e-9


def test_fermionic_simulator_signs():
    c = oracle.annihilators(4)
    vac = np.zeros(16)
    vac[0] = 1.0
    # c^dag_1 c^dag_3 |0> has bits for sites 1 and 3 set with sign +1
    psi = c[0].T @ (c[2].T @ vac)
    assert psi[0b1010] == 1.0
    psi = c[2].T @ (c[0].T @ vac)
    assert psi[0b1010] == -1.0
    for a in range(4):
        for b in range(4):
            anti = c[a] @ c[b].T + c[b].T @ c[a]
            assert np.allclose(anti.toarray(), np.eye(16) * (a == b))


def test_fock_embedding_matches_simulator():
    N = 6
    v = np.random.default_rng(0).normal(size=15)
    c = oracle.annihilators(N)
    vac = np.zeros(2**N)
    vac[0] = 1.0
    ref = np.zeros(2**N)
    m1, m2 = oracle.pair_basis(N)
    for amp, a, b in zip(v, m1, m2):
        ref += amp * (c[a - 1].T @ (c[b - 1].T @ vac))
    assert np.allclose(oracle.fock_vector(v, N), ref)


# ---------------------------------------------------------------- relative coordinate


@pytest.mark.parametrize("N", range(3, 14))
@pytest.mark.parametrize("U", [-3.0, -2.0, 0.0, 1.0, 10.0])
def test_relative_levels_match_dense(N, U):
    p = ChainParams(N, U)
    E = np.sort(np.concatenate([oracle.relative_levels(p, n)[0] for n in range(N)]))
    ref = np.linalg.eigvalsh(oracle.dense_hamiltonian(p))
    assert E.size == ref.size
    assert np.max(np.abs(E - ref)) <= 1e-12
    e0, gap, _ = oracle.relative_ground(p)
    assert e0 == pytest.approx(ref[0], abs=1e-12)
    assert gap == pytest.approx(ref[1] - ref[0], abs=1e-12)


@pytest.mark.parametrize("N", [5, 9, 15, 31])
def test_relative_amplitudes_match_eigenvector(N):
    p = ChainParams(N, -2.0)
    _, _, v = oracle.exact_ground(p)
    a = oracle.relative_amplitudes(p)
    i, j = np.triu_indices(N, k=1)
    assert np.max(np.abs(a[i, j] - v)) <= 1e-10


def test_relative_levels_partial_selection():
    p = ChainParams(41, 1.0)
    for n in (0, 1, 20):
        full, _ = oracle.relative_levels(p, n)
        low, phi = oracle.relative_levels(p, n, count=2)
        assert np.allclose(low, full[:2], atol=1e-12)
        assert phi.shape == (40, 2)
