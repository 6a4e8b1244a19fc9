"""Gate schedules that map an eigenstate to a simple reference state.

Two compilations are provided:

* **Folding** reduces the orthogonal mode matrix ``Q`` to a signed identity
  with nearest-neighbour mode rotations
  ``W(theta) = exp(-(theta/2) (c^dag_{j+1} c_j - c^dag_j c_{j+1}))``.
  The reversed, inverted sequence (**unfolding**) rebuilds the eigenstate
  from the ladder state ``sum_j alpha_j c^dag_{2j-1} c^dag_{2j} |0>``.
* The **pair cascade** moves the ladder weight onto a single Fock state
  ``|omega_K>`` with rotations between neighbouring pair patterns
  ``|omega_l> = c^dag_{2l-1} c^dag_{2l} |0>``; each rotation lives on the
  four sites ``2l-1 .. 2l+2``.

Site, stage and ladder indices are 1-based.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NumericalError, PreconditionError

PIVOT_TOL = 1e-300
FOLD_TOL = 1e-10
ALPHA_ZERO_TOL = 1e-10


@dataclass(frozen=True)
class GivensGate:
    """Rotation of modes ``j, j+1``; ``stage`` is the row being cleared."""

    j: int
    theta: float
    stage: int = 0

    def __post_init__(self):
        if self.j < 1:
            raise PreconditionError(f"gate site j={self.j} must be >= 1")
        if abs(self.theta) > math.pi:
            raise PreconditionError(f"theta={self.theta} outside [-pi, pi]")

    def inverse(self) -> "GivensGate":
        return GivensGate(self.j, -self.theta, self.stage)

    def single_particle(self) -> np.ndarray:
        """2x2 action on the coefficients ``(u_j, u_{j+1})`` of ``c^dag_j, c^dag_{j+1}``."""
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        return np.array([[c, s], [-s, c]])


@dataclass(frozen=True)
class GivensSchedule:
    gates: tuple[GivensGate, ...]
    direction: str = "folding"

    def __post_init__(self):
        if self.direction not in ("folding", "unfolding"):
            raise PreconditionError(f"unknown direction {self.direction!r}")
        object.__setattr__(self, "gates", tuple(self.gates))

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


@dataclass(frozen=True)
class PairRotation:
    """``M(phi) = exp((phi/2)(|w_{l+1}><w_l| - |w_l><w_{l+1}|))``."""

    l: int
    phi: float

    @property
    def support(self) -> tuple[int, int, int, int]:
        return (2 * self.l - 1, 2 * self.l, 2 * self.l + 1, 2 * self.l + 2)

    def inverse(self) -> "PairRotation":
        return PairRotation(self.l, -self.phi)

    def matrix(self) -> np.ndarray:
        """16x16 matrix on the local occupations of :attr:`support` (site ``2l-1`` most significant)."""
        c, s = math.cos(self.phi / 2), math.sin(self.phi / 2)
        U = np.eye(16)
        lo, hi = 0b1100, 0b0011
        U[lo, lo] = c
        U[hi, lo] = s
        U[hi, hi] = c
        U[lo, hi] = -s
        return U


def givens_angle(u_lo: float, u_hi: float) -> float:
    """Angle of the rotation on ``(j, j+1)`` that clears the ``j+1`` coefficient.

    ``tan(theta/2) = u_hi / u_lo`` with the half angle taken in
    ``(-pi/2, pi/2]`` so that ``theta`` lies in ``(-pi, pi]``.
    """
    if abs(u_lo) < PIVOT_TOL and abs(u_hi) < PIVOT_TOL:
        return 0.0
    half = math.atan2(u_hi, u_lo)
    if half > math.pi / 2:
        half -= math.pi
    elif half <= -math.pi / 2:
        half += math.pi
    return 2.0 * half


def rotate_rows(M: np.ndarray, gate: GivensGate) -> None:
    """Apply ``gate`` in place to rows ``j, j+1`` (1-based) of a coefficient array."""
    j = gate.j - 1
    c, s = math.cos(gate.theta / 2), math.sin(gate.theta / 2)
    lo = M[j].copy()
    hi = M[j + 1].copy()
    M[j] = c * lo + s * hi
    M[j + 1] = c * hi - s * lo


def apply_schedule(s: GivensSchedule | Iterable[GivensGate], coeffs: np.ndarray) -> np.ndarray:
    """Single-particle action of a gate sequence on coefficient rows (copy)."""
    out = np.array(coeffs, dtype=float, copy=True)
    for g in s:
        rotate_rows(out, g)
    return out


def fold_schedule(Q: np.ndarray, tol: float = FOLD_TOL) -> tuple[GivensSchedule, np.ndarray]:
    """Compile an orthogonal ``Q`` (columns = modes) into a folding schedule.

    Stage ``k`` clears column ``k`` below the diagonal, sweeping ``j`` from
    ``N-1`` down to ``k``.  Rows ``< k`` are never touched again, so
    cleared entries stay cleared.

    Returns
    -------
    schedule, diagonal
        ``N(N-1)/2`` gates and the residual diagonal (entries ``+-1``).

    Raises
    ------
    NumericalError
        If an off-diagonal entry above ``tol`` remains; ``details`` gives
        its location.
    """
    Q = np.asarray(Q, dtype=float)
    N = Q.shape[0]
    if Q.shape != (N, N):
        raise PreconditionError(f"square matrix required, got {Q.shape}")
    ortho = np.max(np.abs(Q.T @ Q - np.eye(N)))
    if ortho > 1e-10:
        raise PreconditionError(f"Q is not orthogonal ({ortho:.3e})")
    M = Q.copy()
    gates = []
    for k in range(1, N):
        # columns left of k are already cleared in the rows this stage touches
        for j in range(N - 1, k - 1, -1):
            theta = givens_angle(M[j - 1, k - 1], M[j, k - 1])
            g = GivensGate(j, theta, k)
            c, s = math.cos(theta / 2), math.sin(theta / 2)
            lo = M[j - 1, k - 1 :].copy()
            hi = M[j, k - 1 :]
            M[j - 1, k - 1 :] = c * lo + s * hi
            M[j, k - 1 :] = c * hi - s * lo
            gates.append(g)
    off = M - np.diag(np.diag(M))
    worst = np.unravel_index(np.argmax(np.abs(off)), off.shape)
    if abs(off[worst]) > tol:
        raise NumericalError(
            f"folding left off-diagonal {off[worst]:.3e} at {tuple(int(i) + 1 for i in worst)}",
            location=tuple(int(i) + 1 for i in worst),
            value=float(off[worst]),
        )
    return GivensSchedule(tuple(gates), "folding"), np.diag(M).copy()


def unfold_sequence(s: GivensSchedule) -> GivensSchedule:
    """Reverse order and invert every gate of a folding schedule."""
    if s.direction != "folding":
        raise PreconditionError("unfold_sequence expects a folding schedule")
    return GivensSchedule(tuple(g.inverse() for g in reversed(s.gates)), "unfolding")


def ladder_signs(alphas: Sequence[float], diagonal: np.ndarray) -> np.ndarray:
    """Ladder coefficients after folding: ``alpha_j d_{2j-1} d_{2j}``."""
    d = np.asarray(diagonal)
    a = np.asarray(alphas, dtype=float)
    return a * d[0 : 2 * a.size : 2] * d[1 : 2 * a.size : 2]


def pair_cascade(alphas: Sequence[float]) -> list[PairRotation]:
    """Rotations moving the ladder weight onto its last populated pair.

    Rotation ``l`` clears ``|omega_l>`` into ``|omega_{l+1}>``: with ``a``
    the weight accumulated on ``|omega_l>``,
    ``tan(phi_l / 2) = a / alpha_{l+1}`` and the accumulated weight becomes
    ``sqrt(a^2 + alpha_{l+1}^2) >= 0``.  The cascade stops at the last
    ``alpha`` above ``1e-10``; a single populated pair needs no rotation.
    """
    a = np.asarray(alphas, dtype=float)
    if a.size == 0 or not np.any(np.abs(a) > ALPHA_ZERO_TOL):
        raise PreconditionError("pair cascade needs at least one nonzero alpha")
    if abs(np.sum(a**2) - 1) > 1e-10:
        raise PreconditionError("alphas must be normalised")
    last = int(np.flatnonzero(np.abs(a) > ALPHA_ZERO_TOL)[-1])
    out = []
    acc = a[0]
    for l in range(last):
        nxt = a[l + 1]
        half = math.atan2(acc, nxt)
        out.append(PairRotation(l + 1, 2 * half))
        acc = math.hypot(acc, nxt)
    return out


def apply_pairs_to_ladder(rotations: Iterable[PairRotation], coeffs: np.ndarray) -> np.ndarray:
    """Action of pair rotations on ladder coefficients ``(c_1, ..., c_K)`` (copy)."""
    out = np.array(coeffs, dtype=float, copy=True)
    for r in rotations:
        i = r.l - 1
        c, s = math.cos(r.phi / 2), math.sin(r.phi / 2)
        lo, hi = out[i], out[i + 1]
        out[i] = c * lo - s * hi
        out[i + 1] = c * hi + s * lo
    return out


# --------------------------------------------------------------------------
# Text serialisation: one gate per line, angles with 17 significant digits
# --------------------------------------------------------------------------


def dump_schedule(s: GivensSchedule) -> str:
    buf = io.StringIO()
    buf.write(f"# direction: {s.direction}\n# columns: stage j theta\n")
    for g in s.gates:
        buf.write(f"{g.stage} {g.j} {g.theta:.17g}\n")
    return buf.getvalue()


def load_schedule(text: str) -> GivensSchedule:
    direction = "folding"
    gates = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line[1:].strip().startswith("direction:"):
                direction = line.split(":", 1)[1].strip()
            continue
        stage, j, theta = line.split()
        gates.append(GivensGate(int(j), float(theta), int(stage)))
    return GivensSchedule(tuple(gates), direction)


def dump_cascade(rotations: Sequence[PairRotation]) -> str:
    buf = io.StringIO()
    buf.write("# columns: l phi\n")
    for r in rotations:
        buf.write(f"{r.l} {r.phi:.17g}\n")
    return buf.getvalue()


def load_cascade(text: str) -> list[PairRotation]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        l, phi = line.split()
        out.append(PairRotation(int(l), float(phi)))
    return out
