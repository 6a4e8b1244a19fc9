"""Canonical form of a real antisymmetric matrix, ``A = Q Lambda Q^T``.

``Lambda`` is block diagonal with blocks ``[[0, alpha_j], [-alpha_j, 0]]``
(``alpha_j >= 0``, descending) followed by zero rows/columns.  The
factorisation is computed in two orthogonal stages:

1. Orthogonal (Householder) reduction to a skew tridiagonal matrix ``T``.
2. Splitting ``T`` by index parity into a lower bidiagonal block ``B``
   (odd rows, even columns, 1-based); each singular triplet
   ``(sigma, x, y)`` of ``B`` gives one 2x2 block with
   ``T v = sigma u``, ``T u = -sigma v`` where ``u``/``v`` are ``x``/``y``
   embedded on the odd/even sites.

No complex arithmetic is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError, PreconditionError
from .wavefunction import AntisymMatrix

ANTISYM_TOL = 1e-13
ORTHO_TOL = 1e-12
TIE_TOL = 1e-12
ZERO_TOL = 1e-14


@dataclass(frozen=True)
class YoulaFactors:
    """Result of :func:`youla`.

    Columns ``2j, 2j+1`` (0-based) of ``Q`` span the block of ``alphas[j]``;
    ``kernel_columns`` lists columns spanning the null space (the unpaired
    column for odd ``N`` is always last).
    """

    Q: np.ndarray
    alphas: np.ndarray
    kernel_columns: tuple[int, ...]

    @property
    def N(self) -> int:
        return self.Q.shape[0]

    @property
    def pairing(self) -> list[tuple[int, int]]:
        """1-based column pairs ``(2j-1, 2j)``."""
        return [(2 * j + 1, 2 * j + 2) for j in range(len(self.alphas))]

    def block_form(self) -> np.ndarray:
        return block_form(self.alphas, self.N)

    def reconstruct(self) -> np.ndarray:
        return self.Q @ self.block_form() @ self.Q.T


def block_form(alphas, N: int) -> np.ndarray:
    """``Lambda`` with ``+alpha_j`` above the diagonal in block ``j``."""
    L = np.zeros((N, N))
    for j, a in enumerate(alphas):
        L[2 * j, 2 * j + 1] = a
        L[2 * j + 1, 2 * j] = -a
    return L


def _as_array(A) -> np.ndarray:
    return np.asarray(A.A if isinstance(A, AntisymMatrix) else A, dtype=float)


def tridiagonalize(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonal ``H`` and superdiagonal ``e`` with ``H^T A H`` skew tridiagonal.

    The orthogonal Hessenberg form of a skew matrix is skew tridiagonal;
    entries outside the band are rounding noise and are dropped.
    """
    T, H = scipy.linalg.hessenberg(A, calc_q=True)
    e = 0.5 * (np.diag(T, 1) - np.diag(T, -1))
    return H, e


def _first_significant(col: np.ndarray) -> int:
    mags = np.abs(col)
    return int(np.flatnonzero(mags > 1e-12 * mags.max())[0])


def youla(A, *, check: bool = True) -> YoulaFactors:
    """Factor a real antisymmetric matrix as ``Q Lambda Q^T``.

    Sign convention: within each pair the first significant entry of the
    first column is positive; ties in ``alpha`` are ordered by the lowest
    site index participating in the pair.

    Raises
    ------
    PreconditionError
        If ``A`` is not antisymmetric to ``1e-13`` relative.
    NumericalError
        If ``Q`` fails the orthogonality contract (``check=True``).
    """
    A = _as_array(A)
    N = A.shape[0]
    if A.ndim != 2 or A.shape != (N, N):
        raise PreconditionError(f"square matrix required, got {A.shape}")
    amax = np.max(np.abs(A), initial=0.0)
    if np.max(np.abs(A + A.T), initial=0.0) > ANTISYM_TOL * amax:
        raise PreconditionError("matrix is not antisymmetric")
    npairs = N // 2
    if N == 1 or amax == 0.0:
        return YoulaFactors(np.eye(N), np.zeros(npairs), tuple(range(N)) if amax == 0 else (0,))

    H, e = tridiagonalize(A)
    odd = np.arange(0, N, 2)  # 1-based odd sites
    even = np.arange(1, N, 2)
    B = np.zeros((odd.size, even.size))
    for p in range(odd.size):
        if p < even.size:
            B[p, p] = e[2 * p]
        if p >= 1:
            B[p, p - 1] = -e[2 * p - 1]
    X, s, Yt = np.linalg.svd(B, full_matrices=True)

    U = H[:, odd] @ X[:, :npairs]
    V = H[:, even] @ Yt[:npairs].T
    cols = []
    for j in range(npairs):
        u, v = U[:, j], V[:, j]
        if u[_first_significant(u)] < 0:
            u, v = -u, -v
        cols.append((s[j], u, v))

    # descending alpha, ties broken by lowest participating site
    scale = s[0] if s.size else 0.0

    def key(item):
        a, u, v = item
        site = min(_first_significant(u), _first_significant(v))
        return (-round(a / (TIE_TOL * scale)) if scale > 0 else 0, site)

    cols.sort(key=key)
    Q = np.zeros((N, N))
    alphas = np.zeros(npairs)
    for j, (a, u, v) in enumerate(cols):
        Q[:, 2 * j] = u
        Q[:, 2 * j + 1] = v
        alphas[j] = a
    kernel = [2 * j + c for j in range(npairs) if alphas[j] <= ZERO_TOL * scale for c in (0, 1)]
    if N % 2:
        k = H[:, odd] @ X[:, -1]
        if k[_first_significant(k)] < 0:
            k = -k
        Q[:, -1] = k
        kernel.append(N - 1)

    if check:
        ortho = np.max(np.abs(Q.T @ Q - np.eye(N)))
        tol = ORTHO_TOL * max(1.0, N / 32)
        if ortho > tol:
            raise NumericalError(f"Q not orthogonal: {ortho:.3e}", orthogonality=ortho)
    return YoulaFactors(Q, alphas, tuple(kernel))


def paired_modes(factors: YoulaFactors) -> np.ndarray:
    """Mode matrix ``M = Q^T``: ``f^dag_i = sum_m M[i, m] c^dag_m``.

    The state ``sum_j alpha_j f^dag_{2j-1} f^dag_{2j} |0>`` then has the
    amplitude matrix ``Q Lambda Q^T``.
    """
    return factors.Q.T.copy()
