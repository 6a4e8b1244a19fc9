"""Brute-force references for the two-particle sector.

Everything here is deliberately independent of the Bethe construction:
the Hamiltonian is built by applying the fermionic operators to basis
states, and Schmidt spectra come either from the block structure of the
amplitude matrix or from an explicit reduced density matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .bethe import ChainParams
from .errors import CapacityError, ConvergenceError, PreconditionError

DENSE_LIMIT = 64
SPARSE_LIMIT = 2000
PARTIAL_TRACE_LIMIT = 64


def pair_basis(N: int) -> tuple[np.ndarray, np.ndarray]:
    """1-based ``(m1, m2)`` with ``m1 < m2`` in lexicographic order."""
    m1, m2 = np.triu_indices(N, k=1)
    return m1 + 1, m2 + 1


def pair_index(m1, m2, N: int):
    """Position of the (1-based, ``m1 < m2``) pair in :func:`pair_basis` order."""
    m1 = np.asarray(m1) - 1
    m2 = np.asarray(m2) - 1
    return m1 * N - m1 * (m1 + 1) // 2 + (m2 - m1 - 1)


def _hamiltonian_coo(params: ChainParams):
    N, J, U = params.N, params.J, params.U
    m1, m2 = pair_basis(N)
    src = np.arange(m1.size)
    rows, cols, vals = [], [], []
    # c^dag_x c_y applied to c^dag_a c^dag_b |0>: replace the hopped index;
    # reordering the two creators costs a sign.
    for hop in (+1, -1):
        for moving, other in ((m1, m2), (m2, m1)):
            target = (moving - 1 + hop) % N + 1
            ok = target != other
            t, o, s = target[ok], other[ok], src[ok]
            moving_is_first = moving is m1
            lo = np.minimum(t, o)
            hi = np.maximum(t, o)
            # sign -1 when the creation order flips
            if moving_is_first:
                sign = np.where(t < o, 1.0, -1.0)
            else:
                sign = np.where(o < t, 1.0, -1.0)
            rows.append(pair_index(lo, hi, N))
            cols.append(s)
            vals.append(J * sign)
    adjacent = ((m2 - m1) == 1) | ((m1 == 1) & (m2 == N))
    rows.append(src[adjacent])
    cols.append(src[adjacent])
    vals.append(np.full(int(adjacent.sum()), U))
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)


def dense_hamiltonian(params: ChainParams) -> np.ndarray:
    """Hamiltonian matrix on the two-particle basis (lexicographic ``m1 < m2``)."""
    if params.N > DENSE_LIMIT:
        raise CapacityError(f"dense Hamiltonian limited to N <= {DENSE_LIMIT}", required=params.N)
    r, c, v = _hamiltonian_coo(params)
    H = np.zeros((params.dim, params.dim))
    np.add.at(H, (r, c), v)
    return H


def sparse_hamiltonian(params: ChainParams) -> sp.csr_matrix:
    if params.N > SPARSE_LIMIT:
        raise CapacityError(f"sparse Hamiltonian limited to N <= {SPARSE_LIMIT}", required=params.N)
    r, c, v = _hamiltonian_coo(params)
    return sp.csr_matrix((v, (r, c)), shape=(params.dim, params.dim))


def exact_ground(params: ChainParams, *, seed: int = 0, tol: float = 1e-9):
    """Two lowest eigenvalues and the ground vector.

    Dense ``eigh`` up to ``N = 64``, Lanczos (``eigsh``) with a seeded start
    vector beyond.  The returned vector has unit norm and its first
    significant entry positive.
    """
    if params.N <= DENSE_LIMIT:
        w, v = np.linalg.eigh(dense_hamiltonian(params))
        e0, e1, vec = w[0], w[1], v[:, 0]
        H = None
    else:
        H = sparse_hamiltonian(params)
        v0 = np.random.default_rng(seed).standard_normal(params.dim)
        try:
            w, v = spla.eigsh(H, k=2, which="SA", v0=v0, tol=1e-13, ncv=40, maxiter=20000)
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceError("Lanczos did not converge", reason=str(exc)) from exc
        order = np.argsort(w)
        e0, e1, vec = w[order[0]], w[order[1]], v[:, order[0]]
    vec = fix_sign(vec / np.linalg.norm(vec))
    if H is not None:
        res = np.linalg.norm(H @ vec - e0 * vec)
        if res > tol * max(1.0, abs(e0)):
            raise ConvergenceError(f"ground residual {res:.3e} above {tol:g}", residual=res)
    return float(e0), float(e1), vec


def relative_levels(params: ChainParams, n: int, count: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of total-momentum class ``n`` from the relative coordinate.

    With ``K = 2 pi n / N`` and ``psi(m, m+r) = e^{iK(m + r/2)} phi(r)``
    the two-particle problem becomes an open chain ``r = 1..N-1`` with
    hopping ``2 J cos(K/2)`` and potential ``U`` at ``r = 1`` and
    ``r = N-1``.  Exchanging the particles maps ``r -> N-r``; physical
    states have reflection parity ``(-1)^(n+1)`` (the others vanish
    identically), so the chain is folded onto that parity sector.  This needs neither the Bethe polynomial
    nor the full Hilbert space.

    Parameters
    ----------
    count
        Return only the lowest ``count`` physical levels.

    Returns
    -------
    energies, phi
        ``phi[:, i]`` is ``phi(r)`` for ``r = 1..N-1``, unit norm.
    """
    N = params.N
    n = n % N
    t = 2 * params.J * math.cos(math.pi * n / N)
    sigma = -1.0 if n % 2 == 0 else 1.0
    # basis (e_r + sigma e_{N-r}) / sqrt2 for r < N/2, plus e_{N/2} when N is
    # even and sigma = +1; the folded chain is again tridiagonal
    M = (N - 1) // 2
    middle = N % 2 == 0 and sigma > 0
    size = M + (1 if middle else 0)
    if size == 0:
        return np.zeros(0), np.zeros((N - 1, 0))
    d = np.zeros(size)
    e = np.full(size - 1, t)
    d[0] += params.U
    if N % 2:
        d[M - 1] += sigma * t
    elif middle:
        e[-1] = math.sqrt(2) * t
    if count is None or size <= count:
        w, V = sla.eigh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1)) if size > 1 else (d.copy(), np.ones((1, 1)))
    else:
        w, V = sla.eigh_tridiagonal(d, e, select="i", select_range=(0, count - 1))
    phi = np.zeros((N - 1, w.size))
    r = np.arange(1, M + 1)
    phi[r - 1] = V[:M] / math.sqrt(2)
    phi[N - r - 1] = sigma * V[:M] / math.sqrt(2)
    if middle:
        phi[N // 2 - 1] = V[M]
    return w, phi


def relative_ground(params: ChainParams) -> tuple[float, float, int]:
    """Ground energy, gap and momentum class from :func:`relative_levels`."""
    levels = []
    for n in range(params.N):
        w, _ = relative_levels(params, n, count=2)
        levels.extend((float(x), n) for x in w)
    levels.sort()
    return levels[0][0], levels[1][0] - levels[0][0], levels[0][1]


def relative_amplitudes(params: ChainParams, level: int = 0) -> np.ndarray:
    """Real upper-triangular amplitudes ``a[m1, m2] = phi(m2 - m1)`` of a zero-momentum state."""
    w, V = relative_levels(params, 0, count=level + 1)
    phi = V[:, level]
    N = params.N
    i, j = np.triu_indices(N, k=1)
    a = np.zeros((N, N))
    a[i, j] = phi[j - i - 1]
    return fix_sign_matrix(a / np.linalg.norm(a))


def fix_sign_matrix(a: np.ndarray) -> np.ndarray:
    flat = fix_sign(a.ravel())
    return flat.reshape(a.shape)


def fix_sign(v: np.ndarray, rel: float = 1e-8) -> np.ndarray:
    """Flip ``v`` so that its first entry above ``rel * max|v|`` is positive."""
    mags = np.abs(v)
    first = np.flatnonzero(mags > rel * mags.max())[0]
    return v if v[first] > 0 else -v


@dataclass(frozen=True)
class SectorSpectrum:
    """Schmidt data across the cut after site ``L``."""

    L: int
    sv_11: np.ndarray
    w_20: float
    w_02: float
    schmidt: np.ndarray

    @property
    def entropy(self) -> float:
        p = self.schmidt**2
        p = p[p > 0]
        return float(-np.sum(p * np.log(p)))


def sector_schmidt(A: np.ndarray, L: int) -> SectorSpectrum:
    """Exact Schmidt values of the two-fermion state ``(1/2) sum A c^dag c^dag |0>``.

    The left block holds 2, 1 or 0 particles.  The 2- and 0-particle sectors
    each contribute a single Schmidt value (the norm of the corresponding
    amplitude block); the 1-particle sector contributes the singular values
    of the cross block ``A[:L, L:]``.
    """
    A = np.asarray(A)
    N = A.shape[0]
    if not 1 <= L <= N - 1:
        raise PreconditionError(f"cut L={L} outside [1, {N - 1}]")
    left = np.triu(A[:L, :L], 1)
    right = np.triu(A[L:, L:], 1)
    w20 = float(np.linalg.norm(left))
    w02 = float(np.linalg.norm(right))
    sv = np.linalg.svd(A[:L, L:], compute_uv=False)
    schmidt = np.sort(np.concatenate([sv, [w20, w02]]))[::-1]
    schmidt = schmidt[schmidt > 0]
    return SectorSpectrum(L, sv, w20, w02, schmidt)


def sector_entropy_profile(A: np.ndarray) -> np.ndarray:
    """``S_L`` for ``L = 1..N-1`` from :func:`sector_schmidt` (nats)."""
    N = np.asarray(A).shape[0]
    return np.array([sector_schmidt(A, L).entropy for L in range(1, N)])


def fock_vector(v: np.ndarray, N: int) -> np.ndarray:
    """Embed a two-particle vector into the full ``2**N`` Fock space.

    Site 1 is the most significant bit; ``c^dag_m1 c^dag_m2 |0>`` with
    ``m1 < m2`` is the basis state with those two bits set (no sign).
    """
    if N > 24:
        raise CapacityError("full Fock space limited to N <= 24", required=N)
    m1, m2 = pair_basis(N)
    full = np.zeros(2**N, dtype=np.result_type(v, float))
    full[(1 << (N - m1)) | (1 << (N - m2))] = v
    return full


def _block_configs(n: int) -> dict:
    """Index of every configuration of ``n`` sites with at most two particles."""
    cfg = [()] + [(a,) for a in range(n)] + [(a, b) for a in range(n) for b in range(a + 1, n)]
    return {c: i for i, c in enumerate(cfg)}


def partial_trace_entropy(v: np.ndarray, L: int, N: int):
    """Spectrum (descending) and entropy of the reduced density matrix of sites ``1..L``.

    The state is written as a matrix between all left-block and right-block
    occupation configurations with at most two particles (the full Fock
    space restricted to reachable rows and columns), and
    ``rho_L = psi psi^T`` is formed and diagonalised explicitly.
    """
    if N > PARTIAL_TRACE_LIMIT:
        raise CapacityError(f"partial trace limited to N <= {PARTIAL_TRACE_LIMIT}", required=N)
    if L in (0, N):
        return np.array([1.0]), 0.0
    if not 0 < L < N:
        raise PreconditionError(f"cut L={L} outside [0, {N}]")
    left, right = _block_configs(L), _block_configs(N - L)
    psi = np.zeros((len(left), len(right)), dtype=np.result_type(v, float))
    m1, m2 = pair_basis(N)
    for a, b, amp in zip(m1 - 1, m2 - 1, np.asarray(v)):
        lc = tuple(x for x in (a, b) if x < L)
        rc = tuple(x - L for x in (a, b) if x >= L)
        # ordered creation c^dag_a c^dag_b: left operators precede right ones, no sign
        psi[left[lc], right[rc]] += amp
    rho = psi @ psi.conj().T
    w = np.linalg.eigvalsh(rho)[::-1]
    w = np.clip(w.real, 0.0, None)
    p = w[w > 1e-300]
    return w, float(-np.sum(p * np.log(p)))


# --------------------------------------------------------------------------
# Dense fermionic simulator (full Fock space, Jordan-Wigner operators)
# --------------------------------------------------------------------------

FOCK_SIM_LIMIT = 16


def annihilators(N: int) -> list[sp.csr_matrix]:
    """Sparse ``c_m`` (1-based ``m`` at list index ``m-1``) with Jordan-Wigner strings.

    Site 1 is the most significant bit, matching :func:`fock_vector`; the
    string counts occupied sites to the left, so ordered products
    ``c^dag_m1 c^dag_m2 |0>`` (``m1 < m2``) carry no sign.
    """
    if N > FOCK_SIM_LIMIT:
        raise CapacityError(f"fermionic simulator limited to N <= {FOCK_SIM_LIMIT}", required=N)
    idx = np.arange(2**N)
    ops = []
    for m in range(1, N + 1):
        bit = 1 << (N - m)
        occ = (idx & bit) != 0
        left = idx >> (N - m + 1)
        parity = np.array([bin(x).count("1") & 1 for x in left])
        src = idx[occ]
        data = np.where(parity[occ], -1.0, 1.0)
        ops.append(sp.csr_matrix((data, (src ^ bit, src)), shape=(2**N, 2**N)))
    return ops


def ladder_fock(alphas, N: int) -> np.ndarray:
    """``sum_j alpha_j c^dag_{2j-1} c^dag_{2j} |0>`` in the full Fock space."""
    psi = np.zeros(2**N)
    for j, a in enumerate(np.asarray(alphas, dtype=float), start=1):
        psi[(1 << (N - 2 * j + 1)) | (1 << (N - 2 * j))] += a
    return psi


def evolve_givens(psi: np.ndarray, j: int, theta: float, c: list) -> np.ndarray:
    """``exp((theta/2)(c^dag_j c_{j+1} - c^dag_{j+1} c_j)) psi``."""
    a, b = c[j - 1], c[j]
    G = a.T @ b - b.T @ a
    return spla.expm_multiply((theta / 2) * G, psi)


def evolve_pair(psi: np.ndarray, l: int, phi: float, c: list) -> np.ndarray:
    """``exp((phi/2)(|w_{l+1}><w_l| - h.c.)) psi`` with ``w_l = c^dag_{2l-1} c^dag_{2l}|0>``."""
    raise_next = c[2 * l].T @ c[2 * l + 1].T
    lower = c[2 * l - 1] @ c[2 * l - 2]
    G = raise_next @ lower
    return spla.expm_multiply((phi / 2) * (G - G.T), psi)
