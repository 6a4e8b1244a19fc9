"""Command-line interface: ``bethe-mps <command> [options]``.

Settings come from command-line flags, then a ``key=value`` config file
(``--config``), then built-in defaults.  CSV output uses ``#`` comment
headers describing the columns, 17 significant digits and LF line endings.
Entropies are in nats.

Exit codes: 0 ok, 1 verification failure, 2 usage or precondition error,
3 numerical failure, 4 scan finished with failed points.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import oracle
from .bethe import ChainParams, enumerate_spectrum, ground_and_gap, lowest_two
from .circuits import dump_cascade, dump_schedule, load_cascade, load_schedule, unfold_sequence
from .errors import BetheMpsError, PreconditionError
from .measures import two_body_entropy
from .mps import block_entropy_profile, contract_to_vector, default_chi_max, unfold_to_eigenstate
from .pipeline import (
    decompose,
    eigenstate_fock,
    eigenstate_mps,
    half_chain_cut,
    ladder_from_fock_mps,
    pairing_spectrum,
)

log = logging.getLogger("bethe_mps")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERICAL, EXIT_PARTIAL = 0, 1, 2, 3, 4
#: above this size the ground-state search only visits the likely momentum classes
HEURISTIC_ABOVE = 101
#: round-trip overlap in ``decompose`` is only checked this small
ROUNDTRIP_LIMIT = 14


@dataclass
class RunConfig:
    n: int | None = None
    j: float = 1.0
    u: float = 0.0
    u_from: float | None = None
    u_to: float | None = None
    points: int = 11
    method: str = "oracle"
    tol_svd: float = 1e-12
    chi_max: int | None = None
    seed: int = 0
    out: str | None = None
    threads: int = 1
    log_level: str = "WARNING"
    heuristic: str = "auto"
    tamper: bool = False

    def params(self, U: float | None = None) -> ChainParams:
        if self.n is None:
            raise PreconditionError("--n is required")
        return ChainParams(self.n, self.u if U is None else U, self.j)

    def use_heuristic(self) -> bool:
        if self.heuristic == "auto":
            return (self.n or 0) > HEURISTIC_ABOVE
        return self.heuristic == "on"

    def grid(self) -> np.ndarray:
        if self.u_from is None or self.u_to is None:
            raise PreconditionError("--u-from and --u-to are required for a scan")
        if self.points < 2:
            raise PreconditionError("--points must be at least 2")
        return np.linspace(self.u_from, self.u_to, self.points)


_FIELD_TYPES = {"n": int, "j": float, "u": float, "u_from": float, "u_to": float, "points": int,
                "method": str, "tol_svd": float, "chi_max": int, "seed": int, "out": str,
                "threads": int, "log_level": str, "heuristic": str}


def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes equal underscores."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PreconditionError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise PreconditionError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _FIELD_TYPES[key](value)
    return out


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(ns, "config", None):
        values.update(read_config_file(ns.config))
    for f in fields(RunConfig):
        v = getattr(ns, f.name, None)
        if v is not None:
            values[f.name] = v
    return RunConfig(**values)


# --------------------------------------------------------------------------
# Output helpers
# --------------------------------------------------------------------------


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def csv_text(header: Sequence[str], columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [f"# {h}" for h in header]
    lines.append(",".join(columns))
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _header(cfg: RunConfig, *extra: str) -> list[str]:
    base = [f"N={cfg.n} J={fmt(cfg.j)} method={cfg.method}", "entropy units: nats (natural log)"]
    return base + list(extra)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_ground(cfg: RunConfig) -> int:
    p = cfg.params()
    sol, gap = ground_and_gap(p, heuristic=cfg.use_heuristic())
    dec = decompose(p, sol)
    L = half_chain_cut(p.N)
    s_half = oracle.sector_schmidt(dec.A.A, L).entropy
    tb, tb_var = dec.two_body()
    report = [
        ("N", p.N), ("U", p.U), ("J", p.J),
        ("E0", sol.E), ("gap", gap),
        ("k1_re", sol.k1.real), ("k1_im", sol.k1.imag),
        ("k2_re", sol.k2.real), ("k2_im", sol.k2.imag),
        ("kind", sol.kind), ("active_pairs", dec.active_pairs),
        ("alpha_max", dec.alphas[0]), ("S_half", s_half),
        ("S_twobody", tb), ("S_twobody_variant", tb_var),
    ]
    if cfg.method == "mps":
        m = eigenstate_mps(dec, chi_max=cfg.chi_max or default_chi_max(p.N), trunc_tol=cfg.tol_svd)
        report.append(("S_half_mps", block_entropy_profile(m)[L - 1]))
    width = max(len(k) for k, _ in report)
    sys.stdout.write("".join(f"{k:<{width}} = {fmt(v)}\n" for k, v in report))
    if cfg.out:
        emit(csv_text(_header(cfg, "ground-state summary"), ["quantity", "value"], report), cfg.out)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    p = cfg.params()
    rows = [
        (i, s.E, s.k1.real, s.k1.imag, s.k2.real, s.k2.imag, -1 if s.n is None else s.n, s.kind)
        for i, s in enumerate(enumerate_spectrum(p))
    ]
    cols = ["index", "E", "k1_re", "k1_im", "k2_re", "k2_im", "class", "kind"]
    emit(csv_text(_header(cfg, f"U={fmt(p.U)}", "class -1 marks the paired state of even N"), cols, rows), cfg.out)
    return EXIT_OK


def entropy_profile(cfg: RunConfig, U: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``(S_L, schmidt rank)`` for ``L = 1..N-1`` with the configured method."""
    p = cfg.params(U)
    dec = decompose(p, heuristic=cfg.use_heuristic())
    if cfg.method == "mps":
        m = eigenstate_mps(dec, chi_max=cfg.chi_max or default_chi_max(p.N), trunc_tol=cfg.tol_svd)
        return block_entropy_profile(m), np.array(m.bond_dims[1:-1])
    if cfg.method != "oracle":
        raise PreconditionError(f"unknown method {cfg.method!r}")
    spectra = [oracle.sector_schmidt(dec.A.A, L) for L in range(1, p.N)]
    S = np.array([s.entropy for s in spectra])
    rank = np.array([int(np.sum(s.schmidt**2 > cfg.tol_svd)) for s in spectra])
    return S, rank


def cmd_entropy_profile(cfg: RunConfig) -> int:
    S, rank = entropy_profile(cfg)
    rows = [(L, S[L - 1], rank[L - 1]) for L in range(1, len(S) + 1)]
    emit(csv_text(_header(cfg, f"U={fmt(cfg.u)}", "S_L: von Neumann entropy of sites 1..L"),
                  ["L", "S_L", "schmidt_rank"], rows), cfg.out)
    return EXIT_OK


def scan_point(args: tuple) -> tuple:
    """One grid point of ``scan-u``; module level so worker processes can pickle it."""
    cfg, U = args
    try:
        p = cfg.params(U)
        sol, gap = ground_and_gap(p, heuristic=cfg.use_heuristic())
        L = half_chain_cut(p.N)
        if cfg.method == "mps":
            dec = decompose(p, sol)
            m = eigenstate_mps(dec, chi_max=cfg.chi_max or default_chi_max(p.N), trunc_tol=cfg.tol_svd)
            s_half = float(block_entropy_profile(m)[L - 1])
            alphas = dec.alphas
        else:
            A, fac = pairing_spectrum(p, sol)
            s_half = oracle.sector_schmidt(A.A, L).entropy
            alphas = fac.alphas
        tb, tb_var = two_body_entropy(np.clip(alphas, 0.0, None))
        return (U, s_half, tb, tb_var, gap), None
    except BetheMpsError as exc:
        return (U, math.nan, math.nan, math.nan, math.nan), f"U={U!r}: {type(exc).__name__}: {exc}"


SCAN_COLUMNS = ["U", "S_half", "S_twobody_as_written", "S_twobody_variant", "gap"]


def _read_partial_scan(path: str) -> dict[str, list[str]]:
    done = {}
    p = Path(path)
    if not p.exists():
        return done
    for line in p.read_text().splitlines():
        if not line or line.startswith("#") or line.startswith("U,"):
            continue
        cells = line.split(",")
        if len(cells) == len(SCAN_COLUMNS) and "nan" not in cells:
            done[cells[0]] = cells
    return done


def cmd_scan_u(cfg: RunConfig) -> int:
    grid = cfg.grid()
    if np.any(np.diff(grid) <= 0):
        raise PreconditionError("scan grid must be increasing")
    header = _header(cfg, f"U from {fmt(grid[0])} to {fmt(grid[-1])}, {len(grid)} points",
                     f"S_half: block entropy at L=(N-1)/2; gap: E1-E0 (units of J)")
    done = _read_partial_scan(cfg.out) if cfg.out else {}
    todo = [U for U in grid if fmt(U) not in done]
    if done:
        log.info("resuming scan: %d of %d points already present", len(grid) - len(todo), len(grid))
    fh = open(cfg.out, "w", newline="\n") if cfg.out else sys.stdout
    failures = 0
    try:
        fh.write("".join(f"# {h}\n" for h in header) + ",".join(SCAN_COLUMNS) + "\n")
        fh.flush()
        jobs = [(cfg, U) for U in todo]
        if cfg.threads > 1 and len(jobs) > 1:
            pool = ProcessPoolExecutor(max_workers=cfg.threads)
            results = pool.map(scan_point, jobs)
        else:
            pool = None
            results = map(scan_point, jobs)
        results = iter(results)
        for U in grid:
            key = fmt(U)
            if key in done:
                fh.write(",".join(done[key]) + "\n")
                continue
            row, err = next(results)
            if err:
                failures += 1
                sys.stderr.write(err + "\n")
            fh.write(",".join(fmt(v) for v in row) + "\n")
            fh.flush()
        if pool:
            pool.shutdown()
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_gap(cfg: RunConfig) -> int:
    p = cfg.params()
    if p.N % 2 == 0:
        raise PreconditionError("odd N required")
    e0, e1 = lowest_two(p, heuristic=cfg.use_heuristic())
    emit(csv_text(_header(cfg), ["U", "E0", "E1", "gap"], [(p.U, e0.E, e1.E, e1.E - e0.E)]), cfg.out)
    return EXIT_OK


def cmd_decompose(cfg: RunConfig) -> int:
    p = cfg.params()
    dec = decompose(p, heuristic=cfg.use_heuristic())
    out = Path(cfg.out or f"decomposition_N{p.N}_U{fmt(p.U)}")
    out.mkdir(parents=True, exist_ok=True)
    (out / "folding.txt").write_text(dump_schedule(dec.folding))
    (out / "cascade.txt").write_text(dump_cascade(dec.cascade))
    np.savez(out / "youla.npz", Q=dec.factors.Q, alphas=dec.alphas, ladder=dec.ladder, A=dec.A.A)
    meta = {
        "N": p.N, "U": p.U, "J": p.J, "E0": dec.solution.E,
        "givens_gates": len(dec.folding), "pair_rotations": len(dec.cascade),
        "active_pairs": dec.active_pairs, "terminal_pair": dec.terminal_pair,
    }
    if p.N <= ROUNDTRIP_LIMIT:
        sched = load_schedule((out / "folding.txt").read_text())
        cascade = load_cascade((out / "cascade.txt").read_text())
        reread = replace(dec, folding=sched, cascade=tuple(cascade))
        ladder = ladder_from_fock_mps(reread)
        psi = contract_to_vector(unfold_to_eigenstate(ladder, unfold_sequence(sched)))
        meta["roundtrip_overlap"] = abs(float(psi @ eigenstate_fock(dec)))
    (out / "meta.txt").write_text("".join(f"{k}={fmt(v)}\n" for k, v in meta.items()))
    sys.stderr.write("".join(f"{k} = {fmt(v)}\n" for k, v in meta.items()))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import run_all

    results = run_all(cfg.n or 12, seed=cfg.seed, tamper=cfg.tamper)
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} {r.name}: {r.passed} passed, {r.failed} failed ({r.seconds:.1f}s)")
        for d in r.details:
            print(f"    {d}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_VERIFY


COMMANDS = {
    "ground": (cmd_ground, "ground-state energy, gap, pairing spectrum and entropies"),
    "spectrum": (cmd_spectrum, "all N(N-1)/2 two-particle eigenvalues with momenta"),
    "entropy-profile": (cmd_entropy_profile, "block entropy S_L for every cut"),
    "scan-u": (cmd_scan_u, "half-chain entropy, two-body entropy and gap over a U grid"),
    "gap": (cmd_gap, "two lowest energies"),
    "decompose": (cmd_decompose, "write the folding schedule, pair cascade and pairing factors"),
    "verify": (cmd_verify, "run the cross-check suites"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of sites")
    common.add_argument("--j", type=float, help="hopping amplitude (default 1)")
    common.add_argument("--u", type=float, help="nearest-neighbour interaction")
    common.add_argument("--u-from", dest="u_from", type=float, help="first U of a scan")
    common.add_argument("--u-to", dest="u_to", type=float, help="last U of a scan")
    common.add_argument("--points", type=int, help="number of scan points (>= 2)")
    common.add_argument("--method", choices=["mps", "oracle"], help="entropy route (default oracle)")
    common.add_argument("--tol-svd", dest="tol_svd", type=float, help="Schmidt-weight cutoff (default 1e-12)")
    common.add_argument("--chi-max", dest="chi_max", type=int, help="bond dimension cap")
    common.add_argument("--seed", type=int, help="random seed for randomised checks")
    common.add_argument("--out", help="output file (directory for decompose)")
    common.add_argument("--config", help="key=value settings file")
    common.add_argument("--threads", type=int, help="worker processes for scans")
    common.add_argument("--heuristic", choices=["auto", "on", "off"],
                        help=f"restrict momentum classes (auto: N > {HEURISTIC_ABOVE})")
    common.add_argument("--log-level", dest="log_level", help="logging level (default WARNING)")
    common.add_argument("--tamper", action="store_true", default=None, help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="bethe-mps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = resolve_config(ns)
    except (PreconditionError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    logging.basicConfig(level=cfg.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    fn = COMMANDS[ns.command][0]
    try:
        return fn(cfg)
    except PreconditionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BetheMpsError as exc:
        sys.stderr.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        details = getattr(exc, "details", None)
        if details:
            sys.stderr.write(f"details: {details}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
