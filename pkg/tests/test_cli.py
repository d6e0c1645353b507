import json

import numpy as np
import pytest

from softplanes import catalog
from softplanes.cli import main
from softplanes.fileio import sha256


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def fano_files(tmp_path, capsys):
    code, _, _ = run(capsys, "build", "heisenberg", "--q", 2, "--out", tmp_path, "--prefix", "fano")
    assert code == 0
    return tmp_path


def test_build_heisenberg_3_shape(tmp_path, capsys):
    code, _, _ = run(capsys, "build", "heisenberg", "--q", 3, "--out", tmp_path, "--prefix", "pg3")
    assert code == 0
    rows = (tmp_path / "pg3.plane").read_text().split("\n")
    assert rows[0] == "PLANE 3 FLAG"
    lines = [r.split() for r in rows[1:] if r]
    assert len(lines) == 13 and all(len(r) == 4 for r in lines)


def test_build_rejects_non_prime_power(tmp_path, capsys):
    code, _, err = run(capsys, "build", "heisenberg", "--q", 6, "--out", tmp_path)
    assert code == 2 and "prime power" in err


def test_build_respects_budget(tmp_path, capsys):
    code, _, _ = run(capsys, "--max-elements", 100, "build", "heisenberg", "--q", 5, "--out", tmp_path)
    assert code == 3


def test_budget_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SOFTPLANES_MAX_ELEMENTS", "10")
    code, _, _ = run(capsys, "build", "heisenberg", "--q", 3, "--out", tmp_path)
    assert code == 3


def test_verify_pass_and_tamper(fano_files, capsys):
    code, out, _ = run(capsys, "verify", fano_files / "fano.triple")
    assert code == 0 and "RESULT: PASS" in out and "FAIL" not in out
    text = (fano_files / "fano.triple").read_text()
    A = [ln for ln in text.splitlines() if ln.startswith("A:")][0].split(":")[1]
    bad = fano_files / "bad.triple"
    bad.write_text("\n".join(("M:" + A) if ln.startswith("M:") else ln for ln in text.splitlines()))
    code, out, _ = run(capsys, "verify", bad)
    assert code == 1 and "FAIL(" in out


def test_verify_non_subgroup(fano_files, capsys):
    text = (fano_files / "fano.triple").read_text().splitlines()
    A, B = (ln.split(":")[1].split() for ln in text[1:3])
    bad = fano_files / "bad2.triple"
    bad.write_text("\n".join(text[:3] + [f"M: 0 {A[1]} {B[1]}"]))
    code, out, _ = run(capsys, "verify", bad)
    assert code == 1 and "M is a subgroup: FAIL" in out


def test_verify_malformed(fano_files, capsys):
    bad = fano_files / "broken.triple"
    bad.write_text("TRIPLE fano.grp\nA: 0 x\n")
    assert run(capsys, "verify", bad)[0] == 2


def test_abelian_pseudo_triple_fails(tmp_path, capsys):
    G = catalog.abelian([2, 2, 2])
    (tmp_path / "z2.grp").write_text(G.dumps())
    (tmp_path / "z2.triple").write_text("TRIPLE z2.grp\nA: 0 1\nB: 0 2\nM: 0 4\n")
    code, out, _ = run(capsys, "verify", tmp_path / "z2.triple")
    assert code == 1 and "AB ∩ BA = A ∪ B: FAIL" in out


def test_extract_round_trip(fano_files, capsys):
    code, out, _ = run(capsys, "extract", "--plane", fano_files / "fano.plane",
                       "--group", fano_files / "fano.action", "--out", fano_files, "--prefix", "back")
    assert code == 0
    code, out, _ = run(capsys, "verify", fano_files / "back.triple")
    assert code == 0


def test_export_incidence_matrix(fano_files, capsys):
    code, out, _ = run(capsys, "export", "--plane", fano_files / "fano.plane")
    m = np.array([[int(v) for v in r.split()] for r in out.strip().splitlines()])
    assert m.shape == (7, 7)
    assert (m.sum(axis=0) == 3).all() and (m.sum(axis=1) == 3).all()


def test_analyze_battery_json(fano_files, capsys):
    code, out, _ = run(capsys, "analyze", fano_files / "fano.triple", "--battery", "--json")
    assert code == 0
    items = json.loads(out)
    assert all(i["status"] != "CONTRADICTION" for i in items)


def test_search_and_feasible(tmp_path, capsys):
    (tmp_path / "d8.grp").write_text(catalog.dihedral(4).dumps())
    (tmp_path / "q8.grp").write_text(catalog.quaternion().dumps())
    code, out, _ = run(capsys, "search", "--group", tmp_path / "d8.grp",
                       "--progress", tmp_path / "p.json")
    assert code == 0 and "2 soft triple(s)" in out
    code, out, _ = run(capsys, "search", "--group", tmp_path / "q8.grp")
    assert code == 0 and "0 soft triple(s)" in out
    assert run(capsys, "feasible", 10)[0] == 1
    assert run(capsys, "feasible", 9)[0] == 0


def test_search_decorated(capsys):
    code, out, _ = run(capsys, "search", "decorated", "--q", 4)
    assert code == 0
    assert "AM normal=False BM normal=False |Z|=2 contains translations=False" in out


def test_manifest_is_reproducible(tmp_path, capsys):
    for d in ("a", "b"):
        run(capsys, "build", "heisenberg", "--q", 3, "--out", tmp_path / d, "--prefix", "pg3")
    ma = json.loads((tmp_path / "a" / "pg3.manifest.json").read_text())
    mb = json.loads((tmp_path / "b" / "pg3.manifest.json").read_text())
    assert sorted(ma["outputs"].values()) == sorted(mb["outputs"].values())
    for path, digest in ma["outputs"].items():
        assert sha256(path) == digest


def test_usage_error_exit_code(capsys):
    assert run(capsys, "build")[0] == 2
