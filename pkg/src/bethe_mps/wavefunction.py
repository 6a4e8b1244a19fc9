"""Real Fock-basis amplitudes of a Bethe eigenstate.

Public indices are 1-based site labels; arrays are stored 0-based, so
``a[m1, m2]`` in the docs is ``array[m1 - 1, m2 - 1]`` in memory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bethe import BetheSolution, ChainParams, complex_amplitudes
from .errors import CapacityError, ComplexStateError, PreconditionError

IMAG_TOL = 1e-9
SIGN_TOL = 1e-10
DENSE_LIMIT = 64


@dataclass(frozen=True)
class UpperAmplitudes:
    """Strictly upper-triangular real amplitudes of ``sum a c^dag_m1 c^dag_m2 |0>``."""

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise PreconditionError(f"amplitudes must be square, got {a.shape}")
        a = np.triu(a, 1)
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def N(self) -> int:
        return self.a.shape[0]

    def __getitem__(self, sites):
        m1, m2 = sites
        if m1 >= m2:
            return 0.0
        return float(self.a[m1 - 1, m2 - 1])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.a))


@dataclass(frozen=True)
class AntisymMatrix:
    """``A`` with ``|E> = (1/2) sum_mn A_mn c^dag_m c^dag_n |0>`` and ``A = -A^T``."""

    A: np.ndarray

    @property
    def N(self) -> int:
        return self.A.shape[0]


def fix_global_phase(a: np.ndarray) -> np.ndarray:
    """Rotate complex amplitudes by the phase that minimises their imaginary weight.

    The rotation ``exp(-i arg(sum a^2) / 2)`` maximises ``sum (Re a)^2``; the
    remaining sign ambiguity is fixed by making the first amplitude (in
    lexicographic ``(m1, m2)`` order) above ``SIGN_TOL * max|a|`` positive.

    Raises
    ------
    ComplexStateError
        If the imaginary part left after the rotation exceeds
        ``IMAG_TOL * max|a|``.
    """
    a = np.asarray(a)
    if np.iscomplexobj(a):
        s = np.sum(a * a)
        phase = np.exp(-0.5j * np.angle(s)) if abs(s) > 0 else 1.0
        b = a * phase
        scale = np.max(np.abs(b))
        leftover = np.max(np.abs(b.imag))
        if leftover > IMAG_TOL * scale:
            raise ComplexStateError(
                f"amplitudes are irreducibly complex (imaginary part {leftover:.3e})",
                imaginary=leftover,
            )
        real = b.real.copy()
    else:
        real = np.array(a, dtype=float)
    flat = real.ravel()
    big = np.flatnonzero(np.abs(flat) > SIGN_TOL * np.max(np.abs(flat), initial=0.0))
    if big.size and flat[big[0]] < 0:
        real = -real
    return real


def amplitudes(sol: BetheSolution, params: ChainParams) -> UpperAmplitudes:
    """Real amplitudes of ``sol`` with a unit norm and the sign convention above."""
    a = fix_global_phase(complex_amplitudes(sol, params.N))
    a /= np.linalg.norm(a)
    return UpperAmplitudes(a)


def antisymmetrize(a: UpperAmplitudes) -> AntisymMatrix:
    """``A[m, n] = a[m, n]`` for ``m < n``, ``-a[n, m]`` for ``m > n``; exact."""
    A = a.a - a.a.T
    A.setflags(write=False)
    return AntisymMatrix(A)


def state_vector(a: UpperAmplitudes, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """Amplitudes as a vector over the lexicographic ``(m1 < m2)`` basis."""
    if a.N > dense_limit:
        raise CapacityError(f"state vector limited to N <= {dense_limit}", required=a.N)
    i, j = np.triu_indices(a.N, k=1)
    return a.a[i, j].copy()


def from_state_vector(v: np.ndarray, N: int) -> UpperAmplitudes:
    """Inverse of :func:`state_vector`."""
    a = np.zeros((N, N))
    i, j = np.triu_indices(N, k=1)
    a[i, j] = v
    return UpperAmplitudes(a)
