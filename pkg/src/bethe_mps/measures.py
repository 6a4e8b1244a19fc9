"""Entanglement and many-body measures (natural logarithms throughout)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .skewspec import youla
from .wavefunction import AntisymMatrix

NEG_SLACK = 1e-14
SUM_SLACK = 1e-8
ALPHA_NORM_TOL = 1e-10


def von_neumann(p) -> float:
    """``-sum p ln p`` in nats, with ``0 ln 0 = 0``.

    Entries down to ``-1e-14`` are clipped to zero and a total within
    ``1e-8`` of one is renormalised; anything further off is rejected.
    """
    p = np.asarray(p, dtype=float).ravel()
    if p.size and p.min() < -NEG_SLACK:
        raise PreconditionError(f"negative probability {p.min():.3e}")
    total = p.sum()
    if abs(total - 1) > SUM_SLACK:
        raise PreconditionError(f"probabilities sum to {total:.12g}")
    p = np.clip(p, 0.0, None) / total
    nz = p[p > 0]
    return max(float(-np.sum(nz * np.log(nz))), 0.0)


def two_body_entropy(alphas) -> tuple[float, float]:
    """Many-body measures of a pairing spectrum.

    Returns
    -------
    as_written, variant
        ``-sum alpha ln alpha`` and ``-sum alpha^2 ln alpha^2``.  Both vanish
        exactly for a single pair.
    """
    a = np.asarray(alphas, dtype=float).ravel()
    if np.any(a < 0):
        raise PreconditionError("alphas must be nonnegative")
    if abs(np.sum(a**2) - 1) > ALPHA_NORM_TOL:
        raise PreconditionError(f"alphas not normalised (sum of squares {np.sum(a**2):.12g})")
    nz = a[a > 0]
    as_written = float(-np.sum(nz * np.log(nz)))
    sq = nz[nz**2 > 0] ** 2  # subnormal alphas square to zero
    variant = float(-np.sum(sq * np.log(sq)))
    return max(as_written, 0.0), max(variant, 0.0)


def random_orthogonal(N: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix (QR with sign correction)."""
    Z = rng.standard_normal((N, N))
    Q, R = np.linalg.qr(Z)
    return Q * np.sign(np.diag(R))[None, :]


def single_body_invariance_check(A, trials: int = 20, seed: int = 0) -> float:
    """Largest change of the pairing spectrum under random ``A -> V A V^T``."""
    M = np.asarray(A.A if isinstance(A, AntisymMatrix) else A, dtype=float)
    ref = youla(M).alphas
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        V = random_orthogonal(M.shape[0], rng)
        B = V @ M @ V.T
        B = 0.5 * (B - B.T)
        worst = max(worst, float(np.max(np.abs(youla(B).alphas - ref), initial=0.0)))
    return worst


@dataclass
class EntropyReport:
    block_profile: np.ndarray
    half_chain: float
    two_body: float
    two_body_variant: float
    schmidt_spectra: list = field(default_factory=list)

    def __post_init__(self):
        vals = [*np.atleast_1d(self.block_profile), self.half_chain, self.two_body, self.two_body_variant]
        if min(vals, default=0.0) < -1e-12:
            raise PreconditionError("entropies must be nonnegative")
