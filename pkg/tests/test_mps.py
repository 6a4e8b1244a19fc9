import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bethe_mps import oracle
from bethe_mps.bethe import ChainParams
from bethe_mps.circuits import GivensGate, GivensSchedule, PairRotation, pair_cascade, rotate_rows
from bethe_mps.errors import CapacityError, NumericalError, PreconditionError
from bethe_mps.mps import (
    CanonicalMps,
    TwoSiteGate,
    apply_four_site,
    apply_givens,
    apply_pair_rotations,
    apply_two_site,
    block_entropy_profile,
    canonical_residual,
    contract_to_vector,
    gate_from_givens,
    load_snapshot,
    pair_fock_occupations,
    particle_number,
    product_state_mps,
    reduced_state_mps,
    save_snapshot,
    unfold_to_eigenstate,
)
from bethe_mps.pipeline import decompose, eigenstate_fock, eigenstate_mps
from bethe_mps.wavefunction import state_vector


def random_ladder(N, seed):
    a = np.random.default_rng(seed).normal(size=N // 2)
    return a / np.linalg.norm(a)


def check_canonical(m):
    for lam in m.lambdas:
        assert np.all(lam >= 0) and np.all(np.diff(lam) <= 1e-15)
        assert np.sum(lam**2) == pytest.approx(1.0, abs=1e-10)
    assert canonical_residual(m) <= 1e-8
    if m.N <= 14:
        assert np.linalg.norm(contract_to_vector(m)) == pytest.approx(1.0, abs=1e-10)


# ---------------------------------------------------------------- ladder state


def test_single_pair_ladder():
    v = contract_to_vector(reduced_state_mps([1.0], 3))
    assert np.array_equal(v, np.eye(8)[0b110])


def test_two_pair_ladder():
    v = contract_to_vector(reduced_state_mps([0.6, 0.8], 5))
    ref = np.zeros(32)
    ref[0b11000], ref[0b00110] = 0.6, 0.8
    assert np.max(np.abs(v - ref)) <= 1e-12


def test_boundary_connection_tensors():
    a = [0.6, 0.8]
    m = reduced_state_mps(a, 5)
    lam = m.lambdas[1]
    straddle = int(np.argmin(np.abs(lam - 0.6)))  # pair 1 split by the cut after site 1
    empty = 1 - straddle
    assert lam[straddle] == pytest.approx(a[0])
    assert m.gammas[0][1, 0, straddle] == 1.0
    assert m.gammas[0][0, 0, empty] == 1.0


def test_ladder_preconditions():
    with pytest.raises(PreconditionError):
        reduced_state_mps([0.6, 0.6], 5)
    with pytest.raises(PreconditionError):
        reduced_state_mps([1.0], 4)


@given(st.sampled_from([3, 5, 7, 9, 11]), st.integers(0, 2**32 - 1))
def test_ladder_is_canonical_and_exact(N, seed):
    a = random_ladder(N, seed)
    m = reduced_state_mps(a, N)
    check_canonical(m)
    assert np.max(np.abs(contract_to_vector(m) - oracle.ladder_fock(a, N))) <= 1e-12


# ---------------------------------------------------------------- gates


def test_givens_gate_examples():
    assert np.array_equal(gate_from_givens(GivensGate(1, 0.0)).u, np.eye(4))
    u = gate_from_givens(GivensGate(1, math.pi)).u
    # c^dag_j -> -c^dag_{j+1}: |10> maps to -|01>
    assert np.allclose(u[:, 2], [0, -1, 0, 0])
    assert np.allclose(u[:, 1], [0, 0, 1, 0])
    u = gate_from_givens(GivensGate(1, math.pi / 2)).u
    # state c^dag_{j+1}|0>: coefficient cos on c^dag_{j+1}, sin on c^dag_j
    assert np.allclose(u[:, 1], [0, math.cos(math.pi / 4), math.sin(math.pi / 4), 0])


@given(st.floats(-math.pi, math.pi), st.floats(-2, 2), st.floats(-2, 2))
def test_givens_gate_matches_mode_update(theta, uj, uj1):
    g = GivensGate(1, theta)
    u = gate_from_givens(g).u
    assert np.allclose(u.T @ u, np.eye(4), atol=1e-12)
    assert u[0, 0] == 1 and u[3, 3] == 1
    state = np.array([0.0, uj1, uj, 0.0])  # |01> carries c^dag_{j+1}, |10> carries c^dag_j
    out = u @ state
    ref = np.array([[uj], [uj1]])
    rotate_rows(ref, g)
    assert out[2] == pytest.approx(ref[0, 0], abs=1e-12)
    assert out[1] == pytest.approx(ref[1, 0], abs=1e-12)


def test_two_site_gate_validation():
    with pytest.raises(PreconditionError):
        TwoSiteGate(2 * np.eye(4))


def test_identity_gate_leaves_state():
    m = reduced_state_mps(random_ladder(7, 1), 7)
    m2 = apply_two_site(m, 3, TwoSiteGate(np.eye(4)))
    for a, b in zip(m.lambdas, m2.lambdas):
        assert np.max(np.abs(a - b)) <= 1e-12


@given(st.sampled_from([5, 7, 9]), st.integers(0, 2**32 - 1))
def test_gates_match_dense_simulator(N, seed):
    rng = np.random.default_rng(seed)
    a = random_ladder(N, seed)
    m = reduced_state_mps(a, N, trunc_tol=0.0)  # exact comparison, nothing discarded
    c = oracle.annihilators(N)
    ref = oracle.ladder_fock(a, N)
    for _ in range(8):
        g = GivensGate(int(rng.integers(1, N)), float(rng.uniform(-math.pi, math.pi)))
        m = apply_givens(m, g)
        ref = oracle.evolve_givens(ref, g.j, g.theta, c)
        assert particle_number(m) == pytest.approx(2.0, abs=1e-8)
        assert canonical_residual(m) <= 1e-8
    assert np.max(np.abs(contract_to_vector(m) - ref)) <= 1e-10
    for _ in range(3):
        r = PairRotation(int(rng.integers(1, N // 2)), float(rng.uniform(-2 * math.pi, 2 * math.pi)))
        m = apply_four_site(m, r)
        ref = oracle.evolve_pair(ref, r.l, r.phi, c)
        assert particle_number(m) == pytest.approx(2.0, abs=1e-8)
    assert np.max(np.abs(contract_to_vector(m) - ref)) <= 1e-10
    check_canonical(m)


def test_gate_then_inverse_restores_state():
    a = random_ladder(7, 4)
    m = reduced_state_mps(a, 7)
    g = GivensGate(3, 1.1)
    back = apply_givens(apply_givens(m, g), g.inverse())
    assert abs(contract_to_vector(back) @ contract_to_vector(m)) >= 1 - 1e-12


def test_bond_overflow_reports_required_chi():
    m = reduced_state_mps(random_ladder(9, 2), 9, chi_max=3)
    with pytest.raises(CapacityError) as err:
        for j in range(1, 9):
            m = apply_givens(m, GivensGate(j, 0.9))
            m = apply_givens(m, GivensGate(9 - j, -0.7))
    assert err.value.required > 3


def test_zero_truncation_is_exact():
    N = 11
    dec = decompose(ChainParams(N, -2.0))
    m = eigenstate_mps(dec, chi_max=2**6, trunc_tol=0.0)
    assert abs(contract_to_vector(m) @ eigenstate_fock(dec)) >= 1 - 1e-10


# ---------------------------------------------------------------- pair rotations


def test_zero_angle_pair_rotation():
    m = reduced_state_mps(random_ladder(7, 3), 7)
    v = contract_to_vector(apply_four_site(m, PairRotation(1, 0.0)))
    assert np.max(np.abs(v - contract_to_vector(m))) <= 1e-12


def test_single_pair_rotation_mixes_coefficients():
    a1, a2, phi = 0.6, 0.8, 0.7
    m = apply_four_site(reduced_state_mps([a1, a2], 5), PairRotation(1, phi))
    v = contract_to_vector(m)
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    assert v[0b11000] == pytest.approx(a1 * c - a2 * s, abs=1e-12)
    assert v[0b00110] == pytest.approx(a2 * c + a1 * s, abs=1e-12)


def test_cascade_rebuilds_ladder_from_fock_state():
    N = 7
    a = random_ladder(N, 9)
    rots = pair_cascade(a)
    start = product_state_mps(pair_fock_occupations(len(a), N))
    m = apply_pair_rotations(start, [r.inverse() for r in reversed(rots)])
    assert abs(contract_to_vector(m) @ oracle.ladder_fock(a, N)) >= 1 - 1e-10


def test_pair_rotation_must_fit():
    with pytest.raises(PreconditionError):
        apply_four_site(reduced_state_mps([1.0], 5), PairRotation(2, 0.3))


# ---------------------------------------------------------------- readout


def test_empty_unfolding_is_identity():
    m = reduced_state_mps(random_ladder(5, 0), 5)
    assert unfold_to_eigenstate(m, GivensSchedule((), "unfolding")) is m
    with pytest.raises(PreconditionError):
        unfold_to_eigenstate(m, GivensSchedule((), "folding"))


def test_unfolded_state_matches_bethe_vector():
    dec = decompose(ChainParams(5, -2.0))
    assert abs(contract_to_vector(eigenstate_mps(dec)) @ eigenstate_fock(dec)) >= 1 - 1e-8


def test_entropy_examples():
    assert np.array_equal(block_entropy_profile(product_state_mps([1, 1, 0, 0, 0])), np.zeros(4))
    S = block_entropy_profile(reduced_state_mps([1 / math.sqrt(2)] * 2, 5))
    assert S[1] == pytest.approx(math.log(2), abs=1e-12)


def test_entropy_matches_partial_trace_at_31_sites():
    N = 31
    dec = decompose(ChainParams(N, -2.0))
    S = block_entropy_profile(eigenstate_mps(dec))
    v = state_vector(dec.amplitudes)
    ref = np.array([oracle.partial_trace_entropy(v, L, N)[1] for L in range(1, N)])
    assert np.max(np.abs(S - ref)) <= 1e-8
    ranks = np.array([lam.size for lam in eigenstate_mps(dec).lambdas[1:-1]])
    L = np.arange(1, N)
    assert np.all(ranks <= 2 + np.minimum(L, N - L))


def test_half_chain_entropy_at_51_sites():
    dec = decompose(ChainParams(51, -2.0))
    S = block_entropy_profile(eigenstate_mps(dec))
    assert S[24] == pytest.approx(oracle.sector_schmidt(dec.A.A, 25).entropy, abs=1e-6)


def test_non_canonical_state_refused():
    m = reduced_state_mps([0.6, 0.8], 5)
    bad = CanonicalMps(m.gammas, (m.lambdas[0], m.lambdas[1] * 1.5) + m.lambdas[2:], m.chi_max)
    with pytest.raises(NumericalError):
        block_entropy_profile(bad)


def test_contraction_capacity():
    with pytest.raises(CapacityError):
        contract_to_vector(product_state_mps([0] * 21))


def test_snapshot_round_trip(tmp_path):
    dec = decompose(ChainParams(9, -2.0))
    m = eigenstate_mps(dec)
    save_snapshot(m, tmp_path / "state.npz")
    back = load_snapshot(tmp_path / "state.npz")
    assert back.chi_max == m.chi_max and back.trunc_tol == m.trunc_tol
    assert back.discarded_weight == m.discarded_weight
    for a, b in zip(m.gammas + m.lambdas, back.gammas + back.lambdas):
        assert np.array_equal(a, b)


def test_long_unfolding_stays_canonical():
    # thousands of gates with weights near the cutoff; a scheme that divides
    # by small bond values during the sweep loses orthonormality here
    dec = decompose(ChainParams(101, -2.0))
    m = eigenstate_mps(dec)
    assert canonical_residual(m) <= 1e-8
    S = block_entropy_profile(m)
    assert np.max(np.abs(S - oracle.sector_entropy_profile(dec.A.A))) <= 1e-6
