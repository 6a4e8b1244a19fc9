import math

import numpy as np
import pytest

from bethe_mps import oracle
from bethe_mps.bethe import ChainParams
from bethe_mps.circuits import load_cascade, load_schedule
from bethe_mps.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    cols = lines[0].split(",")
    return cols, [l.split(",") for l in lines[1:]]


def report(out):
    return dict((s.strip() for s in line.split("=", 1)) for line in out.splitlines())


def test_ground_free_chain(capsys):
    code, out, _ = run(capsys, "ground", "--n", "5", "--u", "0")
    assert code == 0
    r = report(out)
    assert float(r["E0"]) == pytest.approx(-1 - math.sqrt(5), abs=1e-10)
    assert float(r["S_twobody"]) <= 1e-10
    assert int(r["active_pairs"]) == 1


def test_ground_even_chain_is_usage_error(capsys):
    code, _, err = run(capsys, "ground", "--n", "4", "--u", "0")
    assert code == 2
    assert "odd N required" in err


def test_ground_mps_agrees_with_oracle(capsys, tmp_path):
    code, out, _ = run(capsys, "ground", "--n", "9", "--u", "-2", "--method", "mps",
                       "--out", str(tmp_path / "g.csv"))
    assert code == 0
    r = report(out)
    assert float(r["S_half_mps"]) == pytest.approx(float(r["S_half"]), abs=1e-8)
    cols, rows = read_csv((tmp_path / "g.csv").read_text())
    assert cols == ["quantity", "value"] and rows[0] == ["N", "9"]


def test_missing_n(capsys):
    code, _, err = run(capsys, "ground", "--u", "1")
    assert code == 2 and "--n" in err


def test_spectrum_lists_every_state(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "6", "--u", "1")
    assert code == 0
    cols, rows = read_csv(out)
    assert cols[:2] == ["index", "E"] and len(rows) == 15
    E = np.sort([float(r[1]) for r in rows])
    ref = np.linalg.eigvalsh(oracle.dense_hamiltonian(ChainParams(6, 1.0)))
    assert np.max(np.abs(E - ref)) <= 1e-10


def test_entropy_profile_routes_agree(capsys):
    profiles = {}
    for method in ("oracle", "mps"):
        code, out, _ = run(capsys, "entropy-profile", "--n", "7", "--u", "-2", "--method", method)
        assert code == 0
        cols, rows = read_csv(out)
        assert cols == ["L", "S_L", "schmidt_rank"]
        profiles[method] = np.array([float(r[1]) for r in rows])
    assert np.max(np.abs(profiles["oracle"] - profiles["mps"])) <= 1e-8
    v = np.linalg.eigh(oracle.dense_hamiltonian(ChainParams(7, -2.0)))[1][:, 0]
    ref = [oracle.partial_trace_entropy(v, L, 7)[1] for L in range(1, 7)]
    assert np.max(np.abs(profiles["oracle"] - ref)) <= 1e-8


def test_entropy_profile_product_state_header(capsys):
    code, out, _ = run(capsys, "entropy-profile", "--n", "5", "--u", "0")
    assert code == 0
    assert "# entropy units: nats (natural log)" in out.splitlines()


def test_scan_matches_dense_diagonalisation(capsys, tmp_path):
    path = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan-u", "--n", "11", "--u-from", "-2.5", "--u-to", "-1.5",
                     "--points", "3", "--out", str(path))
    assert code == 0
    cols, rows = read_csv(path.read_text())
    assert cols == ["U", "S_half", "S_twobody_as_written", "S_twobody_variant", "gap"]
    for r in rows:
        U = float(r[0])
        w, V = np.linalg.eigh(oracle.dense_hamiltonian(ChainParams(11, U)))
        S = oracle.partial_trace_entropy(V[:, 0], 5, 11)[1]
        assert float(r[1]) == pytest.approx(S, abs=1e-8)
        assert float(r[4]) == pytest.approx(w[1] - w[0], abs=1e-8)


def test_scan_resume_and_determinism(capsys, tmp_path):
    args = ["scan-u", "--n", "9", "--u-from", "-1", "--u-to", "1", "--points", "5"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, *args, "--out", str(a))[0] == 0
    assert run(capsys, *args, "--out", str(b), "--threads", "2")[0] == 0
    full = a.read_bytes()
    assert full == b.read_bytes()
    # drop two rows and mark one as failed, then resume
    lines = full.decode().splitlines(keepends=True)
    broken = lines[:-2]
    cells = broken[-1].split(",")
    broken[-1] = ",".join([cells[0]] + ["nan"] * 4) + "\n"
    a.write_text("".join(broken))
    assert run(capsys, *args, "--out", str(a))[0] == 0
    assert a.read_bytes() == full


def test_scan_grid_validation(capsys):
    assert run(capsys, "scan-u", "--n", "5", "--u-from", "0", "--u-to", "1", "--points", "1")[0] == 2
    assert run(capsys, "scan-u", "--n", "5", "--u-from", "1", "--u-to", "0", "--points", "3")[0] == 2


def test_gap(capsys):
    code, out, _ = run(capsys, "gap", "--n", "7", "--u", "1")
    assert code == 0
    _, rows = read_csv(out)
    w = np.linalg.eigvalsh(oracle.dense_hamiltonian(ChainParams(7, 1.0)))
    assert float(rows[0][3]) == pytest.approx(w[1] - w[0], abs=1e-10)


def test_decompose_writes_round_trippable_files(capsys, tmp_path):
    out = tmp_path / "dec"
    code, _, _ = run(capsys, "decompose", "--n", "5", "--u", "-2", "--out", str(out))
    assert code == 0
    sched = load_schedule((out / "folding.txt").read_text())
    assert len(sched) == 10 and sched.direction == "folding"
    meta = dict(l.split("=", 1) for l in (out / "meta.txt").read_text().splitlines())
    assert float(meta["roundtrip_overlap"]) >= 1 - 1e-8
    data = np.load(out / "youla.npz")
    assert data["Q"].shape == (5, 5)


def test_decompose_free_chain_has_empty_cascade(capsys, tmp_path):
    out = tmp_path / "dec"
    assert run(capsys, "decompose", "--n", "5", "--u", "0", "--out", str(out))[0] == 0
    assert load_cascade((out / "cascade.txt").read_text()) == []


def test_verify_and_fault_injection(capsys):
    code, out, _ = run(capsys, "verify", "--n", "9")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "verify", "--n", "9", "--tamper")
    assert code == 1 and "FAIL unfolding-overlap" in out


def test_config_file_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nn = 5\nu = 10\nmethod = mps\n")
    code, out, _ = run(capsys, "ground", "--config", str(cfg), "--u", "0")
    assert code == 0
    r = report(out)
    assert float(r["U"]) == 0.0 and "S_half_mps" in r
    cfg.write_text("bogus = 1\n")
    assert run(capsys, "ground", "--config", str(cfg))[0] == 2


def test_numbers_round_trip_exactly(capsys):
    _, out, _ = run(capsys, "gap", "--n", "5", "--u", "-2")
    _, rows = read_csv(out)
    E0 = float(rows[0][1])
    assert repr(E0) == rows[0][1] or float(repr(E0)) == E0
    assert E0 == pytest.approx(-4.0, abs=1e-12)
