"""Self-checks comparing independent routes; used by ``bethe-mps verify``."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import oracle
from .bethe import ChainParams, enumerate_spectrum
from .measures import single_body_invariance_check
from .mps import block_entropy_profile, contract_to_vector
from .pipeline import decompose, eigenstate_fock, eigenstate_mps
from .wavefunction import state_vector

log = logging.getLogger(__name__)

SPECTRUM_U = (-3.0, -2.0, 0.0, 1.0, 10.0)
TRIANGLE_U = (-2.0, 1.0)


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    details: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def record(self, ok: bool, label: str, value: float, tol: float) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            self.details.append(f"{label}: {value:.3e} (tolerance {tol:.1e})")

    @property
    def ok(self) -> bool:
        return self.failed == 0


def spectrum_suite(max_n: int = 12) -> SuiteResult:
    res = SuiteResult("spectrum-completeness")
    for N in range(3, min(max_n, 12) + 1):
        for U in SPECTRUM_U:
            p = ChainParams(N, U)
            E = np.sort([s.E for s in enumerate_spectrum(p)])
            ref = np.linalg.eigvalsh(oracle.dense_hamiltonian(p))
            if E.size != ref.size:
                res.record(False, f"N={N} U={U} count {E.size}", float(E.size - ref.size), 0)
                continue
            dev = float(np.max(np.abs(E - ref)))
            res.record(dev <= 1e-8, f"N={N} U={U}", dev, 1e-8)
    return res


def triangle_suite(max_n: int = 12, trunc_tol: float = 1e-12) -> SuiteResult:
    res = SuiteResult("oracle-triangle")
    sizes = [N for N in range(5, min(max_n, 13) + 1, 2)]
    for N in sizes:
        for U in TRIANGLE_U:
            dec = decompose(ChainParams(N, U))
            S_mps = block_entropy_profile(eigenstate_mps(dec, trunc_tol=trunc_tol))
            S_sec = oracle.sector_entropy_profile(dec.A.A)
            v = state_vector(dec.amplitudes)
            S_pt = np.array([oracle.partial_trace_entropy(v, L, N)[1] for L in range(1, N)])
            dev = float(max(np.max(np.abs(S_mps - S_sec)), np.max(np.abs(S_mps - S_pt))))
            res.record(dev <= 1e-8, f"N={N} U={U}", dev, 1e-8)
    if max_n > 13:
        N = max_n if max_n % 2 else max_n - 1
        dec = decompose(ChainParams(N, -2.0))
        S_mps = block_entropy_profile(eigenstate_mps(dec, trunc_tol=trunc_tol))
        dev = float(np.max(np.abs(S_mps - oracle.sector_entropy_profile(dec.A.A))))
        res.record(dev <= 1e-6, f"N={N} U=-2 mps vs sector", dev, 1e-6)
    return res


def unfolding_suite(max_n: int = 12, *, tamper: bool = False) -> SuiteResult:
    """Overlap of the unfolded MPS with the Bethe state.

    ``tamper`` flips the sign of every unfolding angle (fault injection).
    """
    res = SuiteResult("unfolding-overlap")
    for N in range(5, min(max_n, 13) + 1, 2):
        dec = decompose(ChainParams(N, -2.0))
        if tamper:
            from .circuits import GivensSchedule

            bad = GivensSchedule(tuple(replace(g, theta=-g.theta) for g in dec.folding), "folding")
            dec = replace(dec, folding=bad)
        psi = contract_to_vector(eigenstate_mps(dec))
        defect = 1.0 - abs(float(psi @ eigenstate_fock(dec)))
        res.record(defect <= 1e-8, f"N={N} U=-2", defect, 1e-8)
    return res


def invariance_suite(seed: int = 0) -> SuiteResult:
    res = SuiteResult("single-body-invariance")
    dec = decompose(ChainParams(7, -2.0))
    dev = single_body_invariance_check(dec.A, trials=20, seed=seed)
    res.record(dev <= 1e-9, "N=7 U=-2", dev, 1e-9)
    return res


def run_all(max_n: int = 12, *, seed: int = 0, tamper: bool = False) -> list[SuiteResult]:
    out = []
    for fn in (
        lambda: spectrum_suite(max_n),
        lambda: triangle_suite(max_n),
        lambda: unfolding_suite(max_n, tamper=tamper),
        lambda: invariance_suite(seed),
    ):
        t0 = time.perf_counter()
        r = fn()
        r.seconds = time.perf_counter() - t0
        log.info("%s: %d passed, %d failed (%.1fs)", r.name, r.passed, r.failed, r.seconds)
        out.append(r)
    return out
