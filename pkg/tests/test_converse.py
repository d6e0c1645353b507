import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from softplanes import catalog
from softplanes.algebra import factorize, field_of_order
from softplanes.constructions import extend_by_automorphism, frobenius, heisenberg
from softplanes.converse import (brute_force_soft_triples, extract_soft_triple, opposite_flag_census,
                                 order_feasibility, restrict_action, search_soft_triples,
                                 sylow_reduction)
from softplanes.errors import BudgetExceeded, InputError, VerificationFailure
from softplanes.plane import build_desarguesian, is_isomorphism, projective_linear_group
from softplanes.soft import check_conditions

from conftest import fixture_plane, fixture_triple


def fermat_two_squares(n):
    return all(e % 2 == 0 for p, e in factorize(n).items() if p % 4 == 3)


@given(st.integers(2, 5000))
@settings(max_examples=300)
def test_feasibility_matches_arithmetic(n):
    f = order_feasibility(n)
    bad_mod4 = n % 4 == 2 and n != 2
    bad_squares = n % 4 == 1 and not fermat_two_squares(n)
    assert f.feasible == (not bad_mod4 and not bad_squares)
    assert f.verdicts["n ≡ 2 (mod 4)"][0] == (not bad_mod4)
    assert order_feasibility(n).format() == f.format()


def test_feasibility_rejects_tiny_orders():
    with pytest.raises(InputError):
        order_feasibility(1)


def test_feasibility_with_m_normal():
    assert not order_feasibility(3 * 2, assume_M_normal=True).feasible
    assert order_feasibility(8, assume_M_normal=True).feasible
    assert order_feasibility(9, assume_M_normal=True).feasible
    assert order_feasibility(12, assume_M_normal=True).verdicts[
        "M normal: n³ odd or a power of 2"][0] is False


def test_fano_round_trip(fano):
    t, plane, action = fano
    res = extract_soft_triple(plane, action.abstract())
    u = res.triple
    assert (u.A.order, u.B.order, u.M.order) == (2, 2, 2)
    assert is_isomorphism(plane, res.plane, res.point_map, res.line_map)
    # the distinguished flag and the ideal elements go where they should
    assert res.point_map[res.fixed_point] == 0 and res.line_map[res.fixed_line] == 0


def test_full_collineation_group_has_no_soft_orbit():
    P = build_desarguesian(2)
    with pytest.raises(VerificationFailure, match="no flag orbit"):
        extract_soft_triple(P, projective_linear_group(P))


def test_census_of_trivial_group(fano):
    t, plane, action = fano
    sub = restrict_action(plane, action, t.G.trivial())
    assert opposite_flag_census(plane, sub) == Counter({1: 8})


@pytest.mark.parametrize("name", ["heis3", "heis4"])
def test_census_of_soft_group(name):
    t, plane, action = fixture_plane(name)
    assert opposite_flag_census(plane, action) == Counter({t.n ** 3: 1})


def test_sylow_reduction_on_p_group_keeps_group():
    t = fixture_triple("heis4")
    res = sylow_reduction(t, 2)
    assert res.triple.G.order == 64 and res.triple.k == 1


def test_sylow_reduction_input_errors():
    t = fixture_triple("heis4")
    with pytest.raises(InputError):
        sylow_reduction(t, 3)


def test_decorated_sylow_for_gf4():
    F = field_of_order(4)
    td = extend_by_automorphism(heisenberg(F), frobenius(F, 1))
    res = sylow_reduction(td, 2)
    # the decorated group is already a 2-group, so the whole group is used
    assert res.triple.G.order == 128 and res.triple.k == 2


@pytest.mark.parametrize("G", catalog.groups_of_order_8(), ids=lambda G: G.name)
def test_search_matches_brute_force_order_8(G):
    res = search_soft_triples(G)
    assert set(res.canonical) == brute_force_soft_triples(G)
    assert bool(res.canonical) == (G.name.startswith("D"))
    for t in res.triples:
        assert check_conditions(G, t.A, t.B, t.M).ok


@pytest.mark.parametrize("G", [fixture_triple("heis3").G.to_dense(), catalog.abelian([3, 3, 3]),
                               catalog.abelian([9, 3]), catalog.cyclic(27)],
                         ids=lambda G: G.name)
def test_search_matches_brute_force_order_27(G):
    res = search_soft_triples(G)
    assert set(res.canonical) == brute_force_soft_triples(G)
    assert bool(res.canonical) == G.name.startswith("Heis")


def test_search_progress_file_resumes(tmp_path):
    G = catalog.dihedral(4)
    path = tmp_path / "progress.json"
    first = search_soft_triples(G, progress_path=path)
    data = json.loads(path.read_text())
    assert data["done"] and data["found"]
    again = search_soft_triples(G, progress_path=path)
    assert again.canonical == first.canonical


def test_search_refuses_large_groups():
    with pytest.raises(BudgetExceeded):
        search_soft_triples(catalog.cyclic(2048))
    with pytest.raises(InputError):
        search_soft_triples(fixture_triple("heis3").G)
