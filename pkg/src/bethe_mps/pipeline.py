"""End-to-end compilation of a Bethe eigenstate into gates and an MPS."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import oracle
from .bethe import BetheSolution, ChainParams, ground_state
from .circuits import (
    GivensSchedule,
    PairRotation,
    fold_schedule,
    ladder_signs,
    pair_cascade,
    unfold_sequence,
)
from .measures import two_body_entropy
from .mps import (
    CanonicalMps,
    TRUNC_TOL,
    apply_pair_rotations,
    pair_fock_occupations,
    product_state_mps,
    reduced_state_mps,
    unfold_to_eigenstate,
)
from .skewspec import YoulaFactors, youla
from .wavefunction import AntisymMatrix, UpperAmplitudes, amplitudes, antisymmetrize

log = logging.getLogger(__name__)

ACTIVE_ALPHA_TOL = 1e-10


@dataclass(frozen=True)
class Decomposition:
    """Everything needed to rebuild an eigenstate from a Fock state."""

    params: ChainParams
    solution: BetheSolution
    amplitudes: UpperAmplitudes
    A: AntisymMatrix
    factors: YoulaFactors
    folding: GivensSchedule
    diagonal: np.ndarray
    ladder: np.ndarray
    cascade: tuple[PairRotation, ...]

    @property
    def unfolding(self) -> GivensSchedule:
        return unfold_sequence(self.folding)

    @property
    def alphas(self) -> np.ndarray:
        return self.factors.alphas

    @property
    def active_pairs(self) -> int:
        return int(np.sum(self.alphas > ACTIVE_ALPHA_TOL))

    @property
    def terminal_pair(self) -> int:
        """Index ``K`` of the Fock state ``|omega_K>`` the cascade ends on."""
        return int(np.flatnonzero(np.abs(self.ladder) > ACTIVE_ALPHA_TOL)[-1]) + 1

    def two_body(self) -> tuple[float, float]:
        return two_body_entropy(np.clip(self.alphas, 0.0, None))


def pairing_spectrum(params: ChainParams, solution: BetheSolution) -> tuple[AntisymMatrix, YoulaFactors]:
    """Amplitude matrix and pairing factors without compiling any gates."""
    A = antisymmetrize(amplitudes(solution, params))
    return A, youla(A)


def decompose(params: ChainParams, solution: BetheSolution | None = None, *,
              heuristic: bool = False) -> Decomposition:
    """Amplitudes, pairing factors, folding schedule and pair cascade of a state.

    ``solution`` defaults to the ground state of ``params``.
    """
    sol = solution if solution is not None else ground_state(params, heuristic=heuristic)
    amp = amplitudes(sol, params)
    A = antisymmetrize(amp)
    fac = youla(A)
    sched, diag = fold_schedule(fac.Q)
    ladder = ladder_signs(fac.alphas, diag)
    cascade = tuple(pair_cascade(ladder))
    log.debug("N=%d U=%g: %d active pairs, %d givens gates, %d pair rotations",
              params.N, params.U, int(np.sum(fac.alphas > ACTIVE_ALPHA_TOL)), len(sched), len(cascade))
    return Decomposition(params, sol, amp, A, fac, sched, diag, ladder, cascade)


def ladder_mps(dec: Decomposition, *, chi_max: int | None = None,
               trunc_tol: float = TRUNC_TOL) -> CanonicalMps:
    return reduced_state_mps(dec.ladder, dec.params.N, chi_max=chi_max, trunc_tol=trunc_tol)


def eigenstate_mps(dec: Decomposition, *, chi_max: int | None = None,
                   trunc_tol: float = TRUNC_TOL) -> CanonicalMps:
    """Ladder MPS followed by the unfolding schedule."""
    return unfold_to_eigenstate(ladder_mps(dec, chi_max=chi_max, trunc_tol=trunc_tol), dec.unfolding)


def ladder_from_fock_mps(dec: Decomposition, *, chi_max: int | None = None,
                         trunc_tol: float = TRUNC_TOL) -> CanonicalMps:
    """Rebuild the ladder state from ``|omega_K>`` with the inverted cascade."""
    N = dec.params.N
    start = product_state_mps(pair_fock_occupations(dec.terminal_pair, N), chi_max=chi_max,
                              trunc_tol=trunc_tol)
    return apply_pair_rotations(start, [r.inverse() for r in reversed(dec.cascade)])


def eigenstate_fock(dec: Decomposition) -> np.ndarray:
    """The eigenstate in the full Fock space (small ``N``)."""
    i, j = np.triu_indices(dec.params.N, k=1)
    return oracle.fock_vector(dec.amplitudes.a[i, j], dec.params.N)


def half_chain_cut(N: int) -> int:
    return (N - 1) // 2
