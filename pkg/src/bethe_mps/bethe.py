"""Two-fermion Bethe ansatz for the periodic tight-binding chain with
nearest-neighbour interaction.

The Hamiltonian is

.. math::

    H = \\sum_{j=1}^N J (c_j^\\dagger c_{j+1} + c_{j+1}^\\dagger c_j)
        + U n_{j+1} n_j ,\\qquad c_{N+1} \\equiv c_1 .

Eigenstates in the two-particle sector are written as

.. math::

    |E\\rangle = \\sum_{m_1<m_2} \\left(q_1 e^{i k_1 m_1 + i k_2 m_2}
                 + q_2 e^{i k_2 m_1 + i k_1 m_2}\\right)
                 c_{m_1}^\\dagger c_{m_2}^\\dagger |0\\rangle

with total momentum :math:`k_1 + k_2 = 2\\pi n / N` and
:math:`q_2 = -q_1 e^{i k_2 N}`.  For each momentum class the allowed
:math:`z = e^{-i k_1}` are the roots of

.. math::

    (1+\\alpha_n) z^N - \\gamma z^{N-1} + \\gamma\\alpha_n z - (1+\\alpha_n) = 0,
    \\qquad \\alpha_n = e^{2\\pi i n/N},\\ \\gamma = U/J .

Sites are labelled ``1..N`` in the public API.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateGroundState,
    EqualMomentaRejected,
    NumericalError,
    PreconditionError,
    StructuralError,
    UnsupportedConfiguration,
    UseFreeProtocol,
)

logger = logging.getLogger(__name__)

ROOT_RESIDUAL_TOL = 1e-10
#: ``k1 == k2`` detection. Looser than the nominal 1e-8 because the
#: polynomial has a double root at the equal-k point for special gamma
#: (e.g. gamma = -2, n = 0), which double precision only resolves to ~1e-8.
EQUAL_K_TOL = 1e-6
SWAP_MATCH_TOL = 1e-6
REALNESS_TOL = 1e-10
DEGENERACY_TOL = 1e-12
NULL_STATE_TOL = 1e-8

KINDS = ("generic", "free", "paired-even", "bound")


@dataclass(frozen=True)
class ChainParams:
    """Periodic chain of ``N`` sites with hopping ``J`` and interaction ``U``."""

    N: int
    U: float
    J: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 3:
            raise PreconditionError(f"N must be an integer >= 3, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "U", float(self.U))
        object.__setattr__(self, "J", float(self.J))

    @property
    def gamma(self) -> float:
        if self.J == 0:
            raise PreconditionError("gamma = U/J is undefined for J = 0")
        return self.U / self.J

    @property
    def dim(self) -> int:
        """Dimension of the two-particle sector."""
        return self.N * (self.N - 1) // 2

    def with_u(self, U: float) -> "ChainParams":
        return ChainParams(self.N, U, self.J)


@dataclass(frozen=True)
class MomentumClass:
    """Total-momentum sector ``k1 + k2 = 2 pi n / N``."""

    n: int
    N: int

    def __post_init__(self):
        if not 0 <= self.n < self.N:
            raise PreconditionError(f"class index n={self.n} outside [0, {self.N - 1}]")

    @property
    def total_momentum(self) -> float:
        return 2 * math.pi * self.n / self.N

    @property
    def alpha_n(self) -> complex:
        # exact values on the real axis keep the alpha = -1 reduction exact
        if self.n == 0:
            return 1.0 + 0.0j
        if 2 * self.n == self.N:
            return -1.0 + 0.0j
        return complex(np.exp(1j * self.total_momentum))


@dataclass(frozen=True)
class BetheSolution:
    """One eigenstate of the two-particle sector.

    ``q1`` and ``q2`` are scaled so that the assembled state has unit norm;
    for strongly bound states at large ``N`` one of them may underflow, the
    amplitudes are then rebuilt from the momenta (see :func:`complex_amplitudes`).
    """

    k1: complex
    k2: complex
    q1: complex
    q2: complex
    E: float
    kind: str
    n: int | None = None
    z: complex | None = field(default=None, compare=False)
    #: amplitudes are the k-derivative of the ansatz at k1 = k2 (merged root pair)
    confluent: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown solution kind {self.kind!r}")


# --------------------------------------------------------------------------
# Polynomial and roots
# --------------------------------------------------------------------------


def bethe_polynomial(params: ChainParams, cls: MomentumClass, *, raw: bool = False) -> np.ndarray:
    """Coefficients (highest degree first) of the Bethe polynomial of class ``cls``.

    For ``alpha_n = -1`` the leading and constant terms vanish and the
    polynomial reduces to ``z**(N-2) + 1`` (the spurious ``z = 0`` root is
    dropped).

    Parameters
    ----------
    raw
        Return the (degenerate) coefficients at ``gamma == 0`` instead of
        raising.

    Raises
    ------
    UseFreeProtocol
        If ``gamma == 0`` and not ``raw``; independent solutions are then
        built by :func:`free_spectrum`.
    """
    gamma = params.gamma
    if gamma == 0 and not raw:
        raise UseFreeProtocol("gamma = 0: the Bethe polynomial is degenerate, use free_spectrum")
    N = params.N
    alpha = cls.alpha_n
    if alpha == -1:
        coeffs = np.zeros(N - 1, dtype=complex)
        coeffs[0] = 1.0
        coeffs[-1] = 1.0
        return coeffs
    coeffs = np.zeros(N + 1, dtype=complex)
    coeffs[0] = 1 + alpha
    coeffs[1] = -gamma
    coeffs[N - 1] += gamma * alpha
    coeffs[N] += -(1 + alpha)
    return coeffs


class _Poly:
    """Evaluates ``p/p'`` without overflow for any ``|z|``.

    Coefficients are stored lowest degree first.  For ``|z| > 1`` the
    reversed polynomial is evaluated at ``1/z`` so that ``z**deg`` never
    appears explicitly.
    """

    def __init__(self, coeffs_high_first: np.ndarray):
        c = np.asarray(coeffs_high_first, dtype=complex)[::-1]
        self.deg = len(c) - 1
        self.c = c
        self.scale = np.max(np.abs(c))
        self.nz = np.flatnonzero(c)
        self.sparse = len(self.nz) <= 8

    def _eval(self, c_idx, c_val, w):
        # returns p(w), p'(w) with p(w) = sum c_val * w**c_idx
        if self.sparse:
            logw = np.log(w[:, None]) if np.all(w != 0) else None
            if logw is not None:
                pw = np.exp(logw * c_idx[None, :])
                p = pw @ c_val
                mask = c_idx > 0
                dp = (pw[:, mask] / w[:, None]) @ (c_val[mask] * c_idx[mask])
                return p, dp
        p = np.zeros_like(w)
        dp = np.zeros_like(w)
        full = np.zeros(self.deg + 1, dtype=complex)
        full[c_idx] = c_val
        for a in full[::-1]:
            dp = dp * w + p
            p = p * w + a
        return p, dp

    def scaled(self, z: np.ndarray):
        """Return ``(r, ratio)``: the residual ``|p(z)| / max(1,|z|)**deg``
        and the Newton step ``p(z)/p'(z)``."""
        z = np.asarray(z, dtype=complex)
        out_r = np.empty(z.shape)
        out_step = np.empty(z.shape, dtype=complex)
        inner = np.abs(z) <= 1
        if np.any(inner):
            zi = z[inner]
            p, dp = self._eval(self.nz, self.c[self.nz], zi)
            out_r[inner] = np.abs(p)
            with np.errstate(divide="ignore", invalid="ignore"):
                out_step[inner] = p / dp
        outer = ~inner
        if np.any(outer):
            w = 1.0 / z[outer]
            rev_idx = self.deg - self.nz
            q, dq = self._eval(rev_idx, self.c[self.nz], w)
            out_r[outer] = np.abs(q)
            # p(z) = z^d q(w),  p'(z) = z^(d-1) (d q(w) - w q'(w))
            with np.errstate(divide="ignore", invalid="ignore"):
                out_step[outer] = z[outer] * q / (self.deg * q - w * dq)
        return out_r, out_step


def _default_seeds(deg: int, bound_pair: float | None = None) -> np.ndarray:
    # Roots of unity, rotated off the real axis to avoid starting on z = 1.
    angles = (2 * np.pi * np.arange(deg) + 0.4) / deg
    seeds = np.exp(1j * angles) * 1.0001
    if bound_pair is not None and deg >= 4:
        r = bound_pair
        seeds[0] = r + 1e-3j
        seeds[deg // 2] = 1.0 / r - 1e-3j
    return seeds


def solve_roots(
    coeffs: Sequence[complex],
    *,
    seeds: np.ndarray | None = None,
    max_iter: int = 800,
    tol: float = ROOT_RESIDUAL_TOL,
) -> np.ndarray:
    """All nonzero roots of a polynomial by Aberth-Ehrlich simultaneous iteration.

    Parameters
    ----------
    coeffs
        Coefficients, highest degree first.
    seeds
        Optional starting points (one per root of the polynomial with its
        trailing zero coefficients removed).
    max_iter
        Iteration budget.
    tol
        Relative residual: each root satisfies
        ``|p(z)| <= tol * max|c| * max(1, |z|)**deg``.

    Returns
    -------
    ndarray of complex
        Roots, ``z = 0`` roots (trailing zero coefficients) excluded.

    Raises
    ------
    ConvergenceError
        With ``details['worst_residual']`` if the budget is exhausted.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "f")
    if len(c) == 0:
        raise PreconditionError("zero polynomial")
    # z = 0 roots carry no solution
    c = np.trim_zeros(c, "b")
    deg = len(c) - 1
    if deg < 1:
        return np.empty(0, dtype=complex)
    if deg == 1:
        return np.array([-c[1] / c[0]])
    poly = _Poly(c)
    z = _default_seeds(deg) if seeds is None else np.array(seeds, dtype=complex)
    if z.shape != (deg,):
        raise PreconditionError(f"need {deg} seeds, got {z.shape}")
    # scale seeds for non-monic/unbalanced polynomials: geometric mean radius
    if seeds is None:
        radius = abs(c[-1] / c[0]) ** (1.0 / deg)
        if np.isfinite(radius) and radius > 0:
            z = z * radius
    active = np.ones(deg, dtype=bool)
    eps = np.finfo(float).eps
    residual = np.full(deg, np.inf)
    for it in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        r, step = poly.scaled(z[idx])
        residual[idx] = r / poly.scale
        diff = z[idx, None] - z[None, :]
        diff[np.arange(idx.size), idx] = np.inf
        repulsion = np.sum(1.0 / diff, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = step / (1.0 - step * repulsion)
        bad = ~np.isfinite(corr)
        corr[bad] = 0.0
        z[idx] -= corr
        small = np.abs(corr) <= 4 * eps * np.maximum(1.0, np.abs(z[idx]))
        zero_res = r == 0
        active[idx[small | zero_res]] = False
    r, _ = poly.scaled(z)
    residual = r / poly.scale
    worst = float(np.max(residual))
    if worst > tol:
        raise ConvergenceError(
            f"Aberth iteration did not reach residual {tol:g} (worst {worst:.3e})",
            worst_residual=worst,
            iterations=max_iter,
        )
    return z


# --------------------------------------------------------------------------
# Solution assembly
# --------------------------------------------------------------------------


def energy(k1: complex, k2: complex, J: float = 1.0) -> float:
    """``2J(cos k1 + cos k2)``, which must be real for a valid solution."""
    e = 2 * J * (np.cos(complex(k1)) + np.cos(complex(k2)))
    if abs(e.imag) > REALNESS_TOL * max(1.0, abs(e.real)):
        raise NumericalError(
            f"energy has imaginary part {e.imag:.3e}", k1=k1, k2=k2, energy=e
        )
    return float(e.real)


def _log_ratio(k2: complex, N: int) -> complex:
    # log(q2/q1) with q2 = -q1 exp(i k2 N)
    return 1j * math.pi + 1j * k2 * N


def _relative_profile(k1: complex, k2: complex, N: int) -> tuple[np.ndarray, float, float]:
    """Relative-coordinate factor of the ansatz.

    With ``K = k1 + k2`` real, ``a(m1, m1 + d) = exp(i K m1) f(d)`` where
    ``f(d) = exp(i k2 d) + (q2/q1) exp(i k1 d)``.  Both terms are built in
    log space and shifted by their largest real part, so bound states at
    large ``N`` do not overflow.  Returns ``(f, norm, log|q1|)`` with ``f``
    already divided by the norm of the full state.
    """
    d = np.arange(1, N, dtype=float)
    g1 = 1j * k2 * d
    g2 = _log_ratio(k2, N) + 1j * k1 * d
    shift = max(np.max(g1.real), np.max(g2.real))
    f = np.exp(g1 - shift) + np.exp(g2 - shift)
    norm = float(np.sqrt(np.sum((N - d) * np.abs(f) ** 2)))
    if norm < NULL_STATE_TOL:
        return f, norm, -np.inf
    return f / norm, norm, -shift - math.log(norm)


def _pair_amplitudes(k1: complex, k2: complex, N: int) -> np.ndarray:
    """Normalised complex amplitudes, strictly upper triangular (0-based)."""
    f, _, log_q1 = _relative_profile(k1, k2, N)
    if not np.isfinite(log_q1):
        raise NumericalError("solution assembles to the null vector", k1=k1, k2=k2)
    K = float(np.real(k1 + k2))
    m = np.arange(1, N + 1)
    d = m[None, :] - m[:, None]
    a = np.zeros((N, N), dtype=complex)
    upper = d > 0
    a[upper] = (np.exp(1j * K * m)[:, None] * np.ones(N))[upper] * f[d[upper] - 1]
    return a


def _paired_even_amplitudes(N: int) -> np.ndarray:
    a = np.zeros((N, N), dtype=complex)
    for m in range(1, N + 1):
        coef = (-1.0) ** m / math.sqrt(N)
        if m < N:
            a[m - 1, m] = coef
        else:
            # c_N^dag c_1^dag = -c_1^dag c_N^dag
            a[0, N - 1] = -coef
    return a


def complex_amplitudes(sol: BetheSolution, N: int) -> np.ndarray:
    """Normalised complex amplitudes ``a[m1-1, m2-1]`` (zero unless ``m1 < m2``)."""
    if sol.kind == "paired-even":
        return _paired_even_amplitudes(N)
    if sol.confluent:
        m = np.arange(1, N + 1)
        k = float(np.real(sol.k1))
        a = np.exp(1j * k * (m[:, None] + m[None, :])) * (N + 2.0 * (m[:, None] - m[None, :]))
        a = np.triu(a, 1)
        return a / np.linalg.norm(a)
    return _pair_amplitudes(sol.k1, sol.k2, N)


def _classify(k1: complex, U: float) -> str:
    if U == 0:
        return "free"
    if abs(complex(k1).imag) > 1e-9:
        return "bound"
    return "generic"


def assemble_from_momenta(
    k1: complex, k2: complex, params: ChainParams, n: int | None = None, z: complex | None = None
) -> BetheSolution:
    """Build a normalised solution from a momentum pair satisfying the Bethe relations."""
    N = params.N
    k1 = complex(k1)
    k2 = complex(k2)
    u1, u2 = np.exp(1j * k1), np.exp(1j * k2)
    if abs(u1 - u2) <= EQUAL_K_TOL:
        # Equal momenta survive only at gamma = 2 cos k with exp(ikN) != 1:
        # then q1 + q2 != 0 and both the boundary and the interaction
        # terms cancel (threshold of the bound branch).
        u = (u1 + u2) / abs(u1 + u2)
        k = float(np.angle(u))
        threshold = (
            params.J != 0
            and abs(params.gamma - 2 * math.cos(k)) <= EQUAL_K_TOL
            and abs(1 - np.exp(1j * k * N)) > EQUAL_K_TOL
        )
        if not threshold:
            raise EqualMomentaRejected(f"k1 = k2 = {k1:.6g}: discarded")
        k1 = k2 = complex(k)
    _, _, log_q1 = _relative_profile(k1, k2, N)
    if not np.isfinite(log_q1):
        raise EqualMomentaRejected("momentum pair assembles to the null vector")
    E = energy(k1, k2, params.J)
    with np.errstate(under="ignore", over="ignore"):
        q1 = complex(np.exp(log_q1))
        q2 = complex(np.exp(log_q1 + _log_ratio(k2, N)))
    return BetheSolution(k1, k2, q1, q2, E, _classify(k1, params.U), n, z)


def assemble_solution(z: complex, cls: MomentumClass, params: ChainParams) -> BetheSolution:
    """Solution from a root ``z = exp(-i k1)`` of the class polynomial.

    ``k1 = i Log z`` on the principal branch and ``k2 = 2 pi n/N - k1``
    without re-wrapping.

    Raises
    ------
    UseFreeProtocol
        At ``gamma = 0``.
    EqualMomentaRejected
        If ``k1`` and ``k2`` coincide (modulo ``2 pi``).
    """
    if params.gamma == 0:
        raise UseFreeProtocol("gamma = 0: use free_spectrum")
    z = complex(z)
    if z == 0:
        raise PreconditionError("z = 0 does not define a solution")
    k1 = 1j * np.log(z)
    k2 = cls.total_momentum - k1
    return assemble_from_momenta(k1, k2, params, cls.n, z)


def free_spectrum(params: ChainParams, classes: Iterable[int] | None = None) -> list[BetheSolution]:
    """Complete set of ``U = 0`` solutions, ``k = 2 pi j / N``, ``1 <= j1 < j2 <= N``.

    Distinct lattice momenta give orthogonal plane waves, so the
    normalisation is exactly ``q1 = -q2 = 1/N``.  ``classes`` optionally
    restricts to total momenta ``(j1 + j2) mod N``.
    """
    if params.U != 0:
        raise PreconditionError("free_spectrum requires U = 0")
    if params.J == 0:
        raise PreconditionError("free_spectrum requires J != 0")
    N = params.N
    j1, j2 = np.triu_indices(N, k=1)
    j1 = j1 + 1
    j2 = j2 + 1
    n = (j1 + j2) % N
    if classes is not None:
        keep = np.isin(n, list(classes))
        j1, j2, n = j1[keep], j2[keep], n[keep]
    k1 = 2 * np.pi * j1 / N
    k2 = 2 * np.pi * j2 / N
    E = 2 * params.J * (np.cos(k1) + np.cos(k2))
    q = 1.0 / N
    return [
        BetheSolution(complex(a), complex(b), q, -q, float(e), "free", int(c))
        for a, b, e, c in zip(k1, k2, E, n)
    ]


def paired_even_state(params: ChainParams) -> BetheSolution | None:
    """The nearest-neighbour pair state with ``k = pi`` (even ``N``, ``U != 0``).

    Its energy is exactly ``U``; it is not captured by the two-momentum ansatz.
    """
    N = params.N
    if N % 2 or params.U == 0:
        return None
    q = 1.0 / math.sqrt(N)
    return BetheSolution(math.pi, math.pi, q, 0.0, params.U, "paired-even", 0)


def _swap_partner(z: complex, alpha: complex) -> complex:
    # exp(-i k2) for the swapped pair
    return 1.0 / (alpha * z)


def _fixed_points(alpha: complex) -> tuple[complex, complex]:
    # z with 1/(alpha z) = z, i.e. k1 = k2
    r = 1.0 / np.sqrt(complex(alpha))
    return r, -r


def _root_multiplicity(coeffs: np.ndarray, z0: complex, tol: float = 1e-9) -> int:
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "f")
    deg = len(c) - 1
    scale = np.sum(np.abs(c))
    m = 0
    while m <= deg:
        if abs(np.polyval(c, z0)) > tol * scale * max(1, deg) ** m:
            break
        c = np.polyder(c)
        m += 1
    return m


def apply_hamiltonian(a: np.ndarray, params: ChainParams) -> np.ndarray:
    """Act with the Hamiltonian on strictly upper amplitudes ``a`` (0-based storage).

    Uses the antisymmetric form: hopping acts as ``T A + A T`` with the
    circulant single-particle matrix ``T``; interaction multiplies
    adjacent (periodic) pairs by ``U``.
    """
    A = a - a.T
    TA = params.J * (np.roll(A, 1, axis=0) + np.roll(A, -1, axis=0))
    AT = params.J * (np.roll(A, 1, axis=1) + np.roll(A, -1, axis=1))
    out = np.triu(TA + AT, 1)
    N = params.N
    idx = np.arange(N - 1)
    out[idx, idx + 1] += params.U * A[idx, idx + 1]
    out[0, N - 1] += params.U * A[0, N - 1]
    return out


def _fixed_point_states(z0: complex, mult: int, cls: MomentumClass, params: ChainParams):
    """States hidden in a multiple root at the equal-momentum point.

    Each merged swap pair leaves one state: the ansatz itself when it does
    not vanish at ``k1 = k2`` (threshold of the bound branch), otherwise
    its derivative with respect to ``k1`` along the constraint surface.
    """
    wanted = mult // 2
    if wanted == 0:
        return []
    if wanted > 1:
        raise StructuralError(
            f"root of multiplicity {mult} at the equal-k point is not supported",
            n=cls.n,
            z0=z0,
        )
    N = params.N
    k = float(np.angle(1.0 / z0))
    phase_N = np.exp(1j * k * N)
    if abs(1 - phase_N) > EQUAL_K_TOL:
        sol = _equal_k_solution(k, False, cls, params)
    else:
        sol = _equal_k_solution(k, True, cls, params)
    a = complex_amplitudes(sol, N)
    res = np.linalg.norm(apply_hamiltonian(a, params) - sol.E * a)
    if res > 1e-8 * max(1.0, abs(sol.E)):
        raise StructuralError(
            "equal-k limit state is not an eigenstate", n=cls.n, residual=res, k=k
        )
    return [sol]


def _equal_k_solution(k: float, confluent: bool, cls, params) -> BetheSolution:
    E = 4 * params.J * math.cos(k)
    if confluent:
        q = 1.0 / math.sqrt(_confluent_norm2(k, params.N))
        return BetheSolution(k, k, q, -q, E, "generic", cls.n, confluent=True)
    _, _, log_q1 = _relative_profile(k, k, params.N)
    q1 = math.exp(log_q1)
    return BetheSolution(k, k, q1, q1 * np.exp(_log_ratio(k, params.N)), E, "generic", cls.n)


def _confluent_norm2(k: float, N: int) -> float:
    m = np.arange(1, N + 1)
    d = m[:, None] - m[None, :]
    w = (N + 2.0 * d) ** 2
    return float(np.sum(np.triu(w, 1)))


def class_solutions(params: ChainParams, n: int) -> list[BetheSolution]:
    """All independent Bethe solutions of momentum class ``n``.

    Drops ``z = 0`` and one member of each swap pair ``(k1, k2) ~ (k2, k1)``.
    Roots at the swap-invariant points (``k1 = k2``) are resolved
    analytically: a simple one is discarded, a multiple one contributes the
    merged pair's limit state.
    """
    cls = MomentumClass(n, params.N)
    coeffs = bethe_polynomial(params, cls)
    deg = len(np.trim_zeros(coeffs, "b")) - 1
    bound = None
    if params.gamma < 0 and deg == params.N:
        # real-axis seed pair for the bound branch
        bound = -max(abs(params.gamma) / 2, 1.05)
    roots = solve_roots(coeffs, seeds=_scaled_seeds(coeffs, bound))
    alpha = cls.alpha_n
    out = []
    for z0 in _fixed_points(alpha):
        mult = _root_multiplicity(coeffs, z0)
        if mult == 0:
            continue
        nearest = np.argsort(np.abs(roots - z0))[:mult]
        roots = np.delete(roots, nearest)
        out.extend(_fixed_point_states(z0, mult, cls, params))
    order = np.lexsort((np.abs(roots), np.angle(roots)))
    roots = roots[order]
    taken = np.zeros(len(roots), dtype=bool)
    for i, z in enumerate(roots):
        if taken[i]:
            continue
        taken[i] = True
        partner = _swap_partner(z, alpha)
        dist = np.abs(roots - partner) / max(1.0, abs(partner))
        dist[taken] = np.inf
        if dist.size and np.min(dist) <= SWAP_MATCH_TOL:
            taken[int(np.argmin(dist))] = True
        out.append(assemble_solution(z, cls, params))
    return out


def _scaled_seeds(coeffs: np.ndarray, bound: float | None) -> np.ndarray:
    c = np.trim_zeros(np.trim_zeros(np.asarray(coeffs), "f"), "b")
    deg = len(c) - 1
    return _default_seeds(deg, bound)


def _by_energy(sols: Iterable[BetheSolution]) -> list[BetheSolution]:
    return sorted(sols, key=lambda s: (s.E, -1 if s.n is None else s.n))


def enumerate_spectrum(params: ChainParams, classes: Iterable[int] | None = None) -> list[BetheSolution]:
    """Complete two-particle spectrum, sorted by energy.

    With ``classes`` given only those momentum classes are solved and the
    completeness check is skipped.

    Raises
    ------
    StructuralError
        If the full enumeration does not yield ``N(N-1)/2`` states.
    """
    params.gamma  # J != 0
    N = params.N
    if params.U == 0:
        return _by_energy(free_spectrum(params, classes))
    full = classes is None
    ns = range(N) if full else sorted(set(classes))
    sols = []
    per_class = {}
    for n in ns:
        cs = class_solutions(params, n)
        per_class[n] = len(cs)
        sols.extend(cs)
    extra = paired_even_state(params)
    if extra is not None and (full or 0 in ns):
        sols.append(extra)
    if full and len(sols) != params.dim:
        raise StructuralError(
            f"found {len(sols)} solutions, expected {params.dim}",
            per_class=per_class,
            paired_even=extra is not None,
        )
    return _by_energy(sols)


def heuristic_classes(params: ChainParams, probe_N: int = 31, n_lowest: int = 6,
                      window: int = 3) -> list[int]:
    """Momentum classes likely to host the lowest states, from a smaller odd chain.

    The lowest ``n_lowest`` states of an odd chain of ``probe_N`` sites at the
    same ``gamma`` are located by total momentum, mapped to the nearest
    class of the target chain and padded with their neighbours.  Classes
    ``|n| <= window`` are always included: low excitations of a long chain
    carry total momenta of order ``1/N``, finer than the probe resolves.
    """
    N = params.N
    probe_N = min(probe_N, N)
    if probe_N % 2 == 0:
        probe_N -= 1
    if probe_N >= N:
        return list(range(N))
    probe = enumerate_spectrum(ChainParams(probe_N, params.U, params.J))
    picked = {n % N for n in range(-window, window + 1)}
    for s in probe[:n_lowest]:
        n_probe = 0 if s.n is None else s.n
        frac = n_probe / probe_N
        if frac > 0.5:
            frac -= 1.0
        n_target = int(round(frac * N)) % N
        for d in (-1, 0, 1):
            picked.add((n_target + d) % N)
    return sorted(picked)


def lowest_two(params: ChainParams, *, heuristic: bool = False) -> list[BetheSolution]:
    """The two lowest solutions, ordered by energy."""
    classes = heuristic_classes(params) if heuristic else None
    sols = enumerate_spectrum(params, classes)
    if len(sols) < 2:
        raise StructuralError("fewer than two solutions found")
    return sols[:2]


def ground_and_gap(params: ChainParams, *, heuristic: bool = False) -> tuple[BetheSolution, float]:
    """Ground state of an odd chain and the gap ``E1 - E0`` from one search.

    Parameters
    ----------
    heuristic
        Restrict the search to :func:`heuristic_classes` instead of all ``N``
        momentum classes.

    Raises
    ------
    UnsupportedConfiguration
        For even ``N`` (ground states there need not be real).
    DegenerateGroundState
        If the two lowest energies agree within ``1e-12``.
    """
    if params.N % 2 == 0:
        raise UnsupportedConfiguration("odd N required for ground-state construction")
    e0, e1 = lowest_two(params, heuristic=heuristic)
    gap = e1.E - e0.E
    if gap <= DEGENERACY_TOL * max(1.0, abs(e0.E)):
        raise DegenerateGroundState(f"ground energy {e0.E} is degenerate (next {e1.E})")
    return e0, gap


def ground_state(params: ChainParams, *, heuristic: bool = False) -> BetheSolution:
    """Lowest-energy solution of an odd chain; see :func:`ground_and_gap`."""
    return ground_and_gap(params, heuristic=heuristic)[0]


def energy_gap(params: ChainParams, *, heuristic: bool = False) -> float:
    """``E1 - E0`` in the two-particle sector of an odd chain."""
    if params.N % 2 == 0:
        raise UnsupportedConfiguration("odd N required")
    e0, e1 = lowest_two(params, heuristic=heuristic)
    return e1.E - e0.E
