"""Canonical (Vidal form) matrix product states for few-fermion chains.

A state on ``N`` sites is stored as site tensors ``Gamma[t]`` with shape
``(2, chi_{t}, chi_{t+1})`` (physical index first) and bond vectors
``lambda[b]`` for bonds ``b = 0..N`` (the boundary bonds are ``[1.0]``).
The right-normalised tensor of site ``t`` is ``B_t = Gamma_t lambda_{t+1}``.

Gates are applied on a mixed-canonical working copy with a moving
orthogonality center (QR to move, SVD to split), and the Vidal form is
rebuilt once at the end of a gate sequence by a right-to-left SVD sweep.
Recovering ``Gamma`` divides by each final bond value exactly once.

``trunc_tol`` is a cutoff on Schmidt *weights* ``lambda^2``.  Left
orthonormality of ``lambda_t Gamma_t`` amplifies rounding noise by
``1 / lambda_{t+1}``; dropping weights below ``1e-12`` (values below
``1e-6``) keeps the canonical residual near ``1e-10`` while discarding at
most ``1e-12`` of norm per cut.  Weights at or below ``1e-24`` are
rounding noise and are dropped even when ``trunc_tol`` is zero.

All gates used here conserve particle number and act on neighbouring
sites, so Jordan-Wigner strings cancel and the local matrices can be
applied as if the sites were qubits.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .circuits import GivensGate, GivensSchedule, PairRotation
from .errors import CapacityError, NumericalError, PreconditionError

log = logging.getLogger(__name__)

TRUNC_TOL = 1e-12
CANONICAL_TOL = 1e-8
NORM_DRIFT_TOL = 1e-10
CONTRACT_LIMIT = 20
#: Schmidt weights at or below this are rounding noise
ZERO_WEIGHT = 1e-24


def default_chi_max(N: int) -> int:
    return 2 + math.ceil(N / 2)


@dataclass(frozen=True)
class TwoSiteGate:
    """Real unitary on ``{|00>, |01>, |10>, |11>}`` of sites ``j, j+1``."""

    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.shape != (4, 4):
            raise PreconditionError(f"two-site gate must be 4x4, got {u.shape}")
        if np.max(np.abs(u.T @ u - np.eye(4))) > 1e-12:
            raise PreconditionError("two-site gate is not orthogonal")
        object.__setattr__(self, "u", u)


@dataclass(frozen=True)
class CanonicalMps:
    """Vidal-form MPS; operations return new instances."""

    gammas: tuple[np.ndarray, ...]
    lambdas: tuple[np.ndarray, ...]
    chi_max: int
    trunc_tol: float = TRUNC_TOL
    discarded_weight: float = 0.0
    norm_drift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(self.gammas))
        object.__setattr__(self, "lambdas", tuple(self.lambdas))
        if len(self.lambdas) != len(self.gammas) + 1:
            raise PreconditionError("need N+1 bond vectors for N sites")

    @property
    def N(self) -> int:
        return len(self.gammas)

    @property
    def bond_dims(self) -> tuple[int, ...]:
        return tuple(lam.size for lam in self.lambdas)

    def right_tensor(self, t: int) -> np.ndarray:
        """``B_t = Gamma_t lambda_{t+1}`` for 0-based site ``t``."""
        return self.gammas[t] * self.lambdas[t + 1][None, None, :]


# --------------------------------------------------------------------------
# Construction
# --------------------------------------------------------------------------


def product_state_mps(occupations: Sequence[int], *, chi_max: int | None = None,
                      trunc_tol: float = TRUNC_TOL) -> CanonicalMps:
    """Fock state with the given 0/1 occupations (site 1 first)."""
    occ = [int(o) for o in occupations]
    if any(o not in (0, 1) for o in occ):
        raise PreconditionError("occupations must be 0 or 1")
    gammas = []
    for o in occ:
        g = np.zeros((2, 1, 1))
        g[o, 0, 0] = 1.0
        gammas.append(g)
    lambdas = [np.ones(1) for _ in range(len(occ) + 1)]
    return CanonicalMps(gammas, lambdas, chi_max or default_chi_max(len(occ)), trunc_tol)


def pair_fock_occupations(l: int, N: int) -> list[int]:
    """Occupations of ``|omega_l>``: sites ``2l-1, 2l`` filled."""
    occ = [0] * N
    occ[2 * l - 2] = occ[2 * l - 1] = 1
    return occ


def reduced_state_mps(alphas: Sequence[float], N: int, *, chi_max: int | None = None,
                      trunc_tol: float = TRUNC_TOL) -> CanonicalMps:
    """Canonical MPS of the ladder state ``sum_j alpha_j |omega_j>``.

    Every bond carries at most three Schmidt sectors: both particles to
    the left (weight ``P``), a pair straddling the cut (weight
    ``alpha_p^2``, odd cuts only) and both particles to the right (weight
    ``R``).  The site tensors are the connection coefficients between
    consecutive sector bases, so the construction is exact; bond vectors
    come out normalised and sorted.
    """
    a = np.asarray(alphas, dtype=float)
    if N % 2 == 0:
        raise PreconditionError(f"odd N required, got {N}")
    if 2 * a.size > N:
        raise PreconditionError(f"{a.size} pairs do not fit on {N} sites")
    if abs(np.sum(a**2) - 1) > 1e-10:
        raise PreconditionError(f"alphas not normalised (sum of squares {np.sum(a**2):.12g})")
    a = a / np.linalg.norm(a)
    w = a**2
    K = a.size

    def sectors(L):
        # label -> Schmidt value at bond L
        full = float(np.sum(w[: min(L // 2, K)]))
        right = float(np.sum(w[min((L + 1) // 2, K):]))
        out = {}
        if full > 0:
            out["F"] = math.sqrt(full)
        if L % 2 and (L + 1) // 2 <= K and w[(L - 1) // 2] > 0:
            out["H"] = abs(a[(L - 1) // 2])
        if right > 0:
            out["E"] = math.sqrt(right)
        ordered = sorted(out, key=lambda s: -out[s])
        if trunc_tol > 0:
            ordered = [s for s in ordered if out[s] ** 2 > trunc_tol]
        return ordered, np.array([out[s] for s in ordered])

    bonds = [sectors(L) for L in range(N + 1)]
    lambdas = []
    for labels, lam in bonds:
        lambdas.append(lam / np.linalg.norm(lam))
    gammas = []
    for L in range(1, N + 1):
        (lab_l, lam_l), (lab_r, _) = bonds[L - 1], bonds[L]
        il = {s: i for i, s in enumerate(lab_l)}
        ir = {s: i for i, s in enumerate(lab_r)}
        g = np.zeros((2, len(lab_l), len(lab_r)))
        for s, nu in ir.items():
            if s == "E" and "E" in il:
                g[0, il["E"], nu] = 1.0 / lam_l[il["E"]]
            elif s == "H" and "E" in il:
                g[1, il["E"], nu] = 1.0 / lam_l[il["E"]]
            elif s == "F":
                norm_f = bonds[L][1][nu]
                if "F" in il:
                    g[0, il["F"], nu] = 1.0 / norm_f
                if L % 2 == 0 and "H" in il:
                    g[1, il["H"], nu] = np.sign(a[L // 2 - 1]) / norm_f
        gammas.append(g)
    return CanonicalMps(gammas, lambdas, chi_max or default_chi_max(N), trunc_tol)


# --------------------------------------------------------------------------
# Gates
# --------------------------------------------------------------------------


def gate_from_givens(g: GivensGate) -> TwoSiteGate:
    """Occupation-basis matrix of the mode rotation ``g``.

    ``c^dag_j -> cos c^dag_j - sin c^dag_{j+1}`` and
    ``c^dag_{j+1} -> cos c^dag_{j+1} + sin c^dag_j`` (half angle); the
    empty and doubly occupied configurations are untouched.
    """
    c, s = math.cos(g.theta / 2), math.sin(g.theta / 2)
    u = np.eye(4)
    # index = 2 n_j + n_{j+1}: |01> = c^dag_{j+1}, |10> = c^dag_j
    u[2, 2] = c
    u[1, 2] = -s
    u[1, 1] = c
    u[2, 1] = s
    return TwoSiteGate(u)


class _Sweeper:
    """Mixed-canonical working copy used while gates are applied.

    Tensors have shape ``(chi_l, 2, chi_r)``.  Sites left of ``center`` are
    left-orthonormal, sites right of it right-orthonormal, and the center
    carries the norm.  Moving the center costs one QR per site; a gate
    costs one SVD per internal bond of its support.  No step divides by a
    Schmidt value, so small weights do not amplify rounding noise.
    """

    def __init__(self, mps: CanonicalMps):
        self.T = [np.transpose(mps.right_tensor(t), (1, 0, 2)) for t in range(mps.N)]
        self.T[0] = mps.lambdas[0][:, None, None] * self.T[0]
        self.center = 0
        self.chi_max = mps.chi_max
        self.trunc_tol = mps.trunc_tol
        self.discarded = 0.0
        self.drift = 0.0

    def move_to(self, c: int) -> None:
        T = self.T
        while self.center < c:
            t = self.center
            chi_l, _, chi_r = T[t].shape
            Q, R = np.linalg.qr(T[t].reshape(2 * chi_l, chi_r))
            T[t] = Q.reshape(chi_l, 2, -1)
            T[t + 1] = np.tensordot(R, T[t + 1], axes=([1], [0]))
            self.center += 1
        while self.center > c:
            t = self.center
            chi_l, _, chi_r = T[t].shape
            Q, R = np.linalg.qr(T[t].reshape(chi_l, 2 * chi_r).T)
            T[t] = Q.T.reshape(-1, 2, chi_r)
            T[t - 1] = np.tensordot(T[t - 1], R.T, axes=([2], [0]))
            self.center -= 1

    def _split(self, mat: np.ndarray, bond: int, cutoff: float | None = None):
        X, S, Yt = np.linalg.svd(mat, full_matrices=False)
        keep = S**2 > (max(self.trunc_tol, ZERO_WEIGHT) if cutoff is None else cutoff)
        keep[0] = True
        if keep.sum() > self.chi_max:
            raise CapacityError(
                f"bond {bond} needs chi={int(keep.sum())} > chi_max={self.chi_max}", required=int(keep.sum())
            )
        self.discarded += float(np.sum(S[~keep] ** 2))
        S = S[keep]
        return X[:, keep], S / np.linalg.norm(S), Yt[keep]

    def apply(self, first: int, u: np.ndarray, width: int) -> None:
        """Apply a ``2^width`` unitary to 0-based sites ``first .. first+width-1``."""
        N = len(self.T)
        if first < 0 or first + width > N:
            raise PreconditionError(f"gate support {first + 1}..{first + width} outside 1..{N}")
        self.move_to(first)
        theta = self.T[first]
        for t in range(first + 1, first + width):
            theta = np.tensordot(theta, self.T[t], axes=([-1], [0]))
        chi_l, chi_r = theta.shape[0], theta.shape[-1]
        theta = np.einsum("pq,aqb->apb", u, theta.reshape(chi_l, 2**width, chi_r))
        drift = abs(float(np.linalg.norm(theta)) - 1.0)
        if drift > NORM_DRIFT_TOL:
            log.warning("norm drift %.3e before gate on sites %d..%d", drift, first + 1, first + width)
        self.drift += drift
        chi = chi_l
        for t in range(first, first + width - 1):
            X, S, Yt = self._split(theta.reshape(2 * chi, -1), t + 1)
            self.T[t] = X.reshape(chi, 2, S.size)
            chi = S.size
            theta = S[:, None] * Yt
        self.T[first + width - 1] = theta.reshape(chi, 2, chi_r)
        self.center = first + width - 1

    def finish(self, template: CanonicalMps) -> CanonicalMps:
        """Vidal form by one right-to-left SVD sweep from a left-orthonormal chain."""
        N = len(self.T)
        self.move_to(N - 1)
        lambdas: list[np.ndarray] = [np.ones(1)] * (N + 1)
        gammas: list[np.ndarray] = [np.empty(0)] * N
        C = self.T[N - 1]
        for t in range(N - 1, 0, -1):
            chi_l, _, chi_r = C.shape
            # truncating here would leave the bond values already fixed to the
            # right inconsistent with the state, so only rounding-level
            # weights are dropped (also when trunc_tol is zero)
            X, S, Yt = self._split(C.reshape(chi_l, 2 * chi_r), t, ZERO_WEIGHT)
            B = Yt.reshape(S.size, 2, chi_r)
            gammas[t] = np.transpose(B / lambdas[t + 1][None, None, :], (1, 0, 2))
            lambdas[t] = S
            C = np.tensordot(self.T[t - 1], X * S[None, :], axes=([2], [0]))
        C = C / np.linalg.norm(C)
        gammas[0] = np.transpose(C / lambdas[1][None, None, :], (1, 0, 2))
        return replace(
            template,
            gammas=tuple(gammas),
            lambdas=tuple(lambdas),
            discarded_weight=template.discarded_weight + self.discarded,
            norm_drift=template.norm_drift + self.drift,
        )


def _apply_blocks(mps: CanonicalMps, blocks: Iterable[tuple[int, np.ndarray, int]]) -> CanonicalMps:
    sw = _Sweeper(mps)
    for first, u, width in blocks:
        sw.apply(first, u, width)
    return sw.finish(mps)


def apply_two_site(mps: CanonicalMps, j: int, gate: TwoSiteGate) -> CanonicalMps:
    """Apply ``gate`` to sites ``j, j+1`` (1-based).

    Raises
    ------
    CapacityError
        If the new bond would exceed ``chi_max``.
    """
    return _apply_blocks(mps, [(j - 1, gate.u, 2)])


def apply_givens(mps: CanonicalMps, g: GivensGate) -> CanonicalMps:
    return apply_two_site(mps, g.j, gate_from_givens(g))


def apply_four_site(mps: CanonicalMps, r: PairRotation) -> CanonicalMps:
    """Apply a pair rotation on sites ``2l-1 .. 2l+2``.

    The two site pairs are merged into four-dimensional local spaces, the
    16x16 matrix acts as a nearest-neighbour gate on the blocked chain,
    and the block is split back into single sites by successive SVDs.
    """
    return _apply_blocks(mps, [_pair_block(r, mps.N)])


def _pair_block(r: PairRotation, N: int) -> tuple[int, np.ndarray, int]:
    first = 2 * r.l - 2
    if first + 4 > N:
        raise PreconditionError(f"pair rotation l={r.l} needs sites up to {2 * r.l + 2} > N={N}")
    return first, r.matrix(), 4


def unfold_to_eigenstate(mps: CanonicalMps, s: GivensSchedule) -> CanonicalMps:
    """Apply an unfolding schedule gate by gate."""
    if s.direction != "unfolding":
        raise PreconditionError("unfold_to_eigenstate expects an unfolding schedule")
    if not s.gates:
        return mps
    return _apply_blocks(mps, ((g.j - 1, gate_from_givens(g).u, 2) for g in s.gates))


def apply_pair_rotations(mps: CanonicalMps, rotations: Iterable[PairRotation]) -> CanonicalMps:
    rotations = list(rotations)
    if not rotations:
        return mps
    return _apply_blocks(mps, (_pair_block(r, mps.N) for r in rotations))


# --------------------------------------------------------------------------
# Readout
# --------------------------------------------------------------------------


def canonical_residual(mps: CanonicalMps) -> float:
    """Largest deviation from left and right orthonormality over all sites."""
    worst = 0.0
    for t in range(mps.N):
        A = mps.lambdas[t][None, :, None] * mps.gammas[t]
        B = mps.right_tensor(t)
        left = np.einsum("kab,kac->bc", A, A)
        right = np.einsum("kab,kcb->ac", B, B)
        worst = max(worst, np.max(np.abs(left - np.eye(left.shape[0]))),
                    np.max(np.abs(right - np.eye(right.shape[0]))))
    for lam in mps.lambdas:
        worst = max(worst, abs(float(np.sum(lam**2)) - 1.0))
    return float(worst)


def block_entropy_profile(mps: CanonicalMps, *, check: bool = True) -> np.ndarray:
    """``S_L = -sum p ln p`` with ``p = lambda^2`` for cuts ``L = 1..N-1`` (nats).

    Raises
    ------
    NumericalError
        If ``check`` and the canonical residual exceeds ``1e-8``.
    """
    from .measures import von_neumann

    if check:
        res = canonical_residual(mps)
        if res > CANONICAL_TOL:
            raise NumericalError(f"state is not canonical (residual {res:.3e})", residual=res)
    return np.array([von_neumann(lam**2) for lam in mps.lambdas[1:-1]])


def contract_to_vector(mps: CanonicalMps, limit: int = CONTRACT_LIMIT) -> np.ndarray:
    """Full ``2**N`` amplitude vector, site 1 most significant."""
    if mps.N > limit:
        raise CapacityError(f"dense contraction limited to N <= {limit}", required=mps.N)
    psi = mps.lambdas[0].reshape(1, -1)
    for t in range(mps.N):
        B = np.transpose(mps.right_tensor(t), (1, 0, 2))
        psi = np.tensordot(psi, B, axes=([-1], [0])).reshape(-1, B.shape[-1])
    return psi.reshape(-1)


def particle_number(mps: CanonicalMps) -> float:
    """Expectation of the total particle number from local densities."""
    total = 0.0
    for t in range(mps.N):
        theta = mps.lambdas[t][None, :, None] * mps.right_tensor(t)
        total += float(np.sum(theta[1] ** 2))
    return total


# --------------------------------------------------------------------------
# Snapshots
# --------------------------------------------------------------------------


def save_snapshot(mps: CanonicalMps, path: str | Path) -> None:
    """Write an ``.npz`` container holding every tensor and the truncation metadata."""
    arrays = {f"gamma_{t}": g for t, g in enumerate(mps.gammas)}
    arrays.update({f"lambda_{b}": lam for b, lam in enumerate(mps.lambdas)})
    np.savez(
        path,
        N=mps.N,
        bond_dims=np.array(mps.bond_dims),
        chi_max=mps.chi_max,
        trunc_tol=mps.trunc_tol,
        discarded_weight=mps.discarded_weight,
        norm_drift=mps.norm_drift,
        **arrays,
    )


def load_snapshot(path: str | Path) -> CanonicalMps:
    with np.load(path) as z:
        N = int(z["N"])
        return CanonicalMps(
            tuple(z[f"gamma_{t}"] for t in range(N)),
            tuple(z[f"lambda_{b}"] for b in range(N + 1)),
            int(z["chi_max"]),
            float(z["trunc_tol"]),
            float(z["discarded_weight"]),
            float(z["norm_drift"]),
        )
