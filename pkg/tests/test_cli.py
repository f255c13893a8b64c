import csv
import io
import json

import numpy as np

from tridiqr import make_tridiagonal, parlett_check, sturm_values
from tridiqr.cli import main
from tridiqr.dynamics import IterationTrace, StepRecord
from tridiqr.io import format_matrix, parse_matrix, read_matrix, write_matrix


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    T = make_tridiagonal(rng.standard_normal(6) * 1e3, rng.standard_normal(5) / 7)
    p = tmp_path / "m.txt"
    write_matrix(T, p)
    U = read_matrix(p)
    assert np.array_equal(T.diag, U.diag) and np.array_equal(T.sub, U.sub)
    assert parse_matrix(format_matrix(U)).max_abs_diff(T) == 0


def test_sample(tmp_path, capsys):
    p = tmp_path / "m.txt"
    code, _, _ = run(["sample", "--spectrum", "1,2,4", "--seed", "7", "--out", str(p)], capsys)
    assert code == 0
    T = read_matrix(p)
    assert T.n == 3 and np.max(np.abs(sturm_values(T) - [1, 2, 4])) <= 1e-10


def test_sample_1x1(capsys):
    code, out, _ = run(["sample", "--spectrum", "5"], capsys)
    assert code == 0 and parse_matrix(out).n == 1


def test_sample_rejects_decreasing(capsys):
    code, _, err = run(["sample", "--spectrum", "2,1"], capsys)
    assert code == 2 and "spectrum must be strictly increasing" in err


def test_unknown_command_is_usage_error(capsys):
    code, _, _ = run(["frobnicate"], capsys)
    assert code == 2


def test_iterate_diagonal(tmp_path, capsys):
    p = tmp_path / "d.txt"
    write_matrix(make_tridiagonal([1, 2, 4], [0, 0]), p)
    code, out, _ = run(["iterate", str(p)], capsys)
    d = json.loads(out)
    assert code == 0 and d["stopReason"] == "deflated" and len(d["steps"]) == 1


def test_iterate_parlett(tmp_path, capsys):
    p = tmp_path / "m.txt"
    run(["sample", "--spectrum", "1,2,4", "--seed", "3", "--out", str(p)], capsys)
    code, out, _ = run(["iterate", str(p), "--strategy", "wilkinson"], capsys)
    assert code == 0
    d = json.loads(out)
    tr = IterationTrace([StepRecord(**s) for s in d["steps"]], d["spectrum"], d["strategy"],
                        d["seed"], d["stopReason"], 0.0)
    assert parlett_check(tr, read_matrix(p)).passed


def test_iterate_mixed_and_nonconvergence(tmp_path, capsys):
    p = tmp_path / "m.txt"
    run(["sample", "--spectrum", "1,2,4", "--seed", "3", "--out", str(p)], capsys)
    code, out, _ = run(["iterate", str(p), "--strategy", "mixed:1e-3"], capsys)
    assert code == 0
    code, out, _ = run(["iterate", str(p), "--max-steps", "1", "--format", "csv"], capsys)
    assert code == 3
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 2 and set(rows[0]) >= {"k", "shift", "b1", "b2", "corner"}


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nspectrum = 1,2,4\nseed = 7\n")
    _, a, _ = run(["sample", "--config", str(cfg)], capsys)
    _, b, _ = run(["sample", "--spectrum", "1,2,4", "--seed", "7"], capsys)
    _, c, _ = run(["sample", "--config", str(cfg), "--seed", "8"], capsys)
    assert a == b and a != c
    cfg.write_text("bogus = 1\n")
    code, _, _ = run(["sample", "--config", str(cfg)], capsys)
    assert code == 2


def test_eig(capsys):
    code, out, _ = run(["eig", "--spectrum", "1,2,3,5,8", "--seed", "3"], capsys)
    d = json.loads(out)
    assert code == 0 and np.allclose(d["eigenvalues"], [1, 2, 3, 5, 8], atol=1e-10)


def test_rates_deterministic(capsys):
    argv = ["rates", "--spectrum", "1,2,4", "--runs", "5", "--seed", "3"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b and json.loads(a)["counts"].get("cubic", 0) >= 4


def _portrait(spec, capsys, *extra):
    code, out, _ = run(["portrait", f"--spectrum={spec}", *extra], capsys)
    assert code == 0
    return list(csv.DictReader(io.StringIO(out)))


def test_portrait_vertices(capsys):
    rows = _portrait("4,5,7", capsys, "--max-steps", "2")
    verts = {(float(r["mu_1"]), float(r["mu_2"]), float(r["mu_3"])) for r in rows if r["kind"] == "vertex"}
    perms = {(4.0, 5.0, 7.0), (4.0, 7.0, 5.0), (5.0, 4.0, 7.0), (5.0, 7.0, 4.0), (7.0, 4.0, 5.0), (7.0, 5.0, 4.0)}
    assert len(verts) == 6
    for v in verts:
        assert min(max(abs(a - b) for a, b in zip(v, p)) for p in perms) <= 1e-12


def test_portrait_edges_attract(capsys):
    rows = _portrait("1,2,4", capsys, "--max-steps", "12")
    last = {}
    for r in rows:
        if r["kind"] == "interior":
            last[r["run"]] = r
    assert last and all(min(float(r["b1"]), float(r["b2"])) < 1e-8 for r in last.values())


def test_portrait_zero_edge_fixed(capsys):
    rows = _portrait("-1,0,1", capsys, "--max-steps", "4")
    by_run = {}
    for r in rows:
        by_run.setdefault(r["run"], []).append(r)
    fixed = 0
    for runs in by_run.values():
        first = runs[0]
        if first["kind"] == "edge" and float(first["b1"]) == 0 and float(first["shift"]) == 0:
            mu0 = np.array([float(first[k]) for k in ("mu_1", "mu_2", "mu_3")])
            for r in runs:
                mu = np.array([float(r[k]) for k in ("mu_1", "mu_2", "mu_3")])
                assert np.max(np.abs(mu - mu0)) <= 1e-12
            fixed += 1
    assert fixed > 0


def test_portrait_wrong_dimension(capsys):
    code, _, err = run(["portrait", "--spectrum", "1,2,3,4"], capsys)
    assert code == 2 and "length 3" in err


def _strip(report):
    return "\n".join(line for line in report.splitlines() if '"timestamp"' not in line)


def test_verify_deterministic_and_only(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--only", "strategy-constants", "--out", str(a)]) == 0
    assert main(["verify", "--only", "strategy-constants", "--out", str(b)]) == 0
    capsys.readouterr()
    ra, rb = _strip(a.read_text()), _strip(b.read_text())
    assert ra == rb
    assert [s["suite"] for s in json.loads(ra)["suites"]] == ["strategy-constants"]


def test_verify_fault_injection(capsys):
    code, out, _ = run(["verify", "--only", "eigensolver", "--deflate-tol", "1"], capsys)
    d = json.loads(out)
    assert code == 1 and "eigensolver/matches_sturm_oracle" in d["failing"]


def test_verify_unknown_suite(capsys):
    code, _, err = run(["verify", "--only", "nope"], capsys)
    assert code == 2 and "unknown suite" in err
