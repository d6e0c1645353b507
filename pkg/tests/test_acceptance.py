"""Acceptance criteria 1-9, one test each, with a PASS/FAIL line per criterion."""
import time
from fractions import Fraction

import numpy as np
import pytest

from softplanes import catalog
from softplanes.algebra import field_of_order
from softplanes.analysis import (elations_in_group, full_axial_elations, noniso_certificate,
                                 proposition_battery)
from softplanes.cli import main
from softplanes.constructions import extend_by_automorphism, frobenius, heisenberg
from softplanes.converse import (brute_force_soft_triples, decorated_subgroup_search,
                                 extract_soft_triple, order_feasibility, search_soft_triples,
                                 sylow_reduction)
from softplanes.groups import center, center_and_series, is_elementary_abelian, is_normal
from softplanes.plane import (build_desarguesian, build_plane, coordinatize_ptr, ideal_indices,
                              is_desarguesian, is_isomorphism, plane_load, planes_isomorphic,
                              right_action, verify_plane_axioms)
from softplanes.soft import check_conditions

from conftest import fixture_plane, fixture_triple


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, seconds: float, detail: str = ""):
        with capsys.disabled():
            tail = f" ({detail})" if detail else ""
            print(f"\nCRITERION {number} [{title}]: {'PASS' if ok else 'FAIL'} in {seconds:.1f}s{tail}")
    return emit


def decorated(q: int):
    F = field_of_order(q)
    return extend_by_automorphism(heisenberg(F), frobenius(F, 1))


def test_criterion_1_heisenberg_field_pipeline(tmp_path, report):
    start = time.perf_counter()
    failures = []
    for q in (2, 3, 4, 5, 8, 9):
        out = tmp_path / f"q{q}"
        if main(["build", "heisenberg", "--q", str(q), "--out", str(out), "--prefix", "h"]) != 0:
            failures.append(f"build q={q}")
            continue
        if main(["verify", str(out / "h.triple")]) != 0:
            failures.append(f"verify q={q}")
        t = fixture_triple(f"heis{q}")
        if (t.n, t.k) != (q, 1) or not check_conditions(t.G, t.A, t.B, t.M).ok:
            failures.append(f"conditions q={q}")
        plane = plane_load(out / "h.plane")
        if plane.n_points != q * q + q + 1 or verify_plane_axioms(plane.inc) != q:
            failures.append(f"axioms q={q}")
        if q in (2, 3, 5):
            iso = planes_isomorphic(plane, build_desarguesian(q))
            if iso is None or not is_isomorphism(plane, build_desarguesian(q), *iso):
                failures.append(f"isomorphism q={q}")
    for q in (4, 8, 9, 16):
        t = fixture_triple(f"heis{q}")
        if coordinatize_ptr(build_plane(t)).kind != "field":
            failures.append(f"ternary ring q={q}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 10
    report(1, "Heisenberg planes over fields", ok, elapsed, ", ".join(failures))
    assert not failures
    assert elapsed < 10


def test_criterion_2_semifield_plane(report):
    start = time.perf_counter()
    t, plane, action = fixture_plane("semifield16")
    soft = check_conditions(t.G, t.A, t.B, t.M).ok and (t.n, t.k) == (16, 1)
    normal = is_normal(t.AM) and is_normal(t.BM)
    ring = coordinatize_ptr(plane)
    elapsed = time.perf_counter() - start
    ok = soft and normal and ring.kind == "semifield" and elapsed < 30
    report(2, "proper semifield plane of order 16", ok, elapsed, f"ternary ring: {ring.kind}")
    assert soft and normal
    assert ring.kind == "semifield"
    assert elapsed < 30


def test_criterion_3_likeable_plane(report):
    start = time.perf_counter()
    t, plane, action = fixture_plane("likeable25")
    checks = {
        "shape": (t.n, t.k, t.G.order) == (25, 1, 15625),
        "soft": check_conditions(t.G, t.A, t.B, t.M).ok,
        "points": plane.n_points == 651 and verify_plane_axioms(plane.inc) == 25,
    }
    T = full_axial_elations(plane, 0)
    bm_rows = {r.tobytes() for r in action.point_images(t.BM.members).astype(np.int64)}
    T_rows = {r.tobytes() for r in T.points.astype(np.int64)}
    checks["translation group"] = T.order == 625 and T.transitive_off_axis() and bm_rows == T_rows
    checks["A elementary abelian of order 25"] = t.A.order == 25 and is_elementary_abelian(t.A)
    checks["|Z(G)| = 5"] = center(t.G).order == 5
    cls = center_and_series(t.G)[3]
    checks["nilpotency class 4 or 5"] = cls in (4, 5)
    J, i = ideal_indices(plane)
    M0 = elations_in_group(t, plane, action, 0, 0).order
    B0 = elations_in_group(t, plane, action, i, 0).order
    lhs = Fraction(t.n, M0)
    rhs = Fraction(T.order // M0 - 1, B0 - 1)
    checks["partition count identity"] = lhs == rhs
    battery = proposition_battery(t, plane, action)
    checks["translation-plane item verified"] = \
        battery["translation plane when <B^A> ≤ BM"].status == "verified"
    elapsed = time.perf_counter() - start
    failed = [k for k, v in checks.items() if not v]
    ok = not failed and elapsed < 300
    report(3, "likeable plane q=5", ok, elapsed,
           f"class {cls}, |M0|={M0}, |B0|={B0}, {lhs} = {rhs}" + (f"; failed: {failed}" if failed else ""))
    assert not failed
    assert elapsed < 300


def test_criterion_4_decoration_and_sylow(report):
    start = time.perf_counter()
    td = decorated(8)
    plane = build_plane(td)
    action = right_action(td, plane)
    stab = np.intersect1d(action.stabilizer_of_point(1), action.stabilizer_of_line(1))
    checks = {
        "decorated soft": check_conditions(td.G, td.A, td.B, td.M).ok,
        "n=8, k=3, |G|=1536": (td.n, td.k, td.G.order) == (8, 3, 1536),
        "flag stabilizer of order 3": bool(plane.inc[1, 1]) and len(stab) == 3,
    }
    res = sylow_reduction(td, 2, plane=plane, action=action)
    u = res.triple
    checks["Sylow triple of order 512, k=1"] = (u.G.order, u.k, u.n) == (512, 1, 8) and \
        check_conditions(u.G, u.A, u.B, u.M).ok
    checks["Sylow plane desarguesian"] = is_desarguesian(res.plane)
    checks["prime orders desarguesian"] = all(
        is_desarguesian(fixture_plane(f"heis{p}")[1]) for p in (2, 3, 5, 7))
    elapsed = time.perf_counter() - start
    failed = [k for k, v in checks.items() if not v]
    ok = not failed and elapsed < 120
    report(4, "decorated GF(8) group and Sylow reduction", ok, elapsed, ", ".join(failed))
    assert not failed
    assert elapsed < 120


def test_criterion_5_decorated_subgroup_search(report):
    start = time.perf_counter()
    t4 = decorated(4)
    assert t4.G.order == 128
    ds = decorated_subgroup_search(t4)
    wanted = [h for h in ds.hits
              if h.subgroup.order == 64 and h.M_normal and not h.AM_normal and not h.BM_normal
              and h.center_order < 4 and not h.contains_translations]
    # the base Heisenberg group has a centre of order 4, so any wanted hit is a new group
    certs = [noniso_certificate(h.carrier, fixture_triple("heis4").G) for h in wanted]
    elapsed = time.perf_counter() - start
    ok = bool(wanted) and all(c is not None for c in certs) and elapsed < 120
    report(5, "soft index-2 subgroups of the decorated GF(4) group", ok, elapsed,
           f"{len(ds.hits)} soft, {len(ds.rejected)} rejected, {len(wanted)} with the required pattern")
    assert wanted, "no index-2 subgroup with M normal, AM and BM not normal, small centre"
    assert all(c is not None for c in certs)
    assert elapsed < 120


def test_criterion_6_converse_round_trip(report):
    start = time.perf_counter()
    failed = []
    for name in ("heis2", "heis3", "heis4", "semifield16", "likeable25"):
        t, plane, action = fixture_plane(name)
        res = extract_soft_triple(plane, action)
        u = res.triple
        good = (check_conditions(u.G, u.A, u.B, u.M).ok and (u.n, u.k) == (t.n, t.k)
                and is_isomorphism(plane, res.plane, res.point_map, res.line_map)
                and res.point_map[res.fixed_point] == 0 and res.line_map[res.fixed_line] == 0)
        J, i = ideal_indices(res.plane)
        good = good and res.line_map[res.ideal_line] == J and res.point_map[res.ideal_point] == i
        if not good:
            failed.append(name)
    elapsed = time.perf_counter() - start
    ok = not failed and elapsed < 300
    report(6, "extraction round trip on every fixture", ok, elapsed, ", ".join(failed))
    assert not failed
    assert elapsed < 300


def test_criterion_7_search_order_8(report):
    start = time.perf_counter()
    found = {}
    agree = True
    for G in catalog.groups_of_order_8():
        res = search_soft_triples(G)
        agree = agree and set(res.canonical) == brute_force_soft_triples(G)
        agree = agree and all(check_conditions(G, t.A, t.B, t.M).ok for t in res.triples)
        found[G.name] = res.triples
    only_d8 = {k for k, v in found.items() if v} == {"D8"}
    fano = all(planes_isomorphic(build_plane(t), build_desarguesian(2)) is not None
               for t in found.get("D8", []))
    elapsed = time.perf_counter() - start
    ok = agree and only_d8 and fano and elapsed < 10
    report(7, "exhaustive search over groups of order 8", ok, elapsed,
           ", ".join(f"{k}: {len(v)}" for k, v in found.items()))
    assert agree and only_d8 and fano
    assert elapsed < 10


def test_criterion_8_structure_battery(report):
    start = time.perf_counter()
    problems = []
    names = ["heis2", "heis3", "heis4", "heis5", "heis8", "heis9", "semifield16", "likeable25"]
    bundles = [fixture_plane(n) for n in names]
    for q in (4, 8):
        td = decorated(q)
        p = build_plane(td)
        bundles.append((td, p, right_action(td, p)))
        names.append(f"decorated{q}")
    m_normal_count = 0
    for name, (t, plane, action) in zip(names, bundles):
        rep = proposition_battery(t, plane, action)
        if rep.contradictions:
            problems.append(f"{name}: {[o.key for o in rep.contradictions]}")
        mod4 = rep["n ≡ 2 (mod 4) forces n = 2"]
        if (t.n % 4 != 2) != (mod4.status == "vacuous"):
            problems.append(f"{name}: n ≡ 2 (mod 4) item is {mod4.status}")
        if is_normal(t.M):
            m_normal_count += 1
            G = t.G.order
            direct = t.k == 1 and G == t.n ** 3 and (G % 2 == 1 or G & (G - 1) == 0)
            if not direct or rep["M normal: A∩B = 1, |G| = n³, unique amb"].status != "verified":
                problems.append(f"{name}: M normal consequences")
    elapsed = time.perf_counter() - start
    ok = not problems and m_normal_count > 0 and elapsed < 300
    report(8, "structure battery on every fixture", ok, elapsed,
           f"{len(names)} fixtures, {m_normal_count} with M normal" + (f"; {problems}" if problems else ""))
    assert not problems
    assert m_normal_count > 0
    assert elapsed < 300


def test_criterion_9_order_feasibility(report):
    start = time.perf_counter()
    expected_reason = {6: "≡ 2 (mod 4)", 10: "≡ 2 (mod 4)", 14: "≡ 2 (mod 4)",
                       21: "sum of two squares", 33: "sum of two squares"}
    bad = []
    for n, reason in expected_reason.items():
        f = order_feasibility(n)
        if f.feasible or not any(reason in r for r in f.reasons()):
            bad.append(n)
    for n in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25):
        if not order_feasibility(n).feasible:
            bad.append(n)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1
    report(9, "order feasibility filters", ok, elapsed, f"wrong verdicts: {bad}" if bad else "")
    assert not bad
    assert elapsed < 1
