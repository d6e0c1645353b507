import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from softplanes.algebra import field_of_order, semifield_load
from softplanes.converse import opposite_flag_census
from softplanes.errors import InputError, VerificationFailure
from softplanes.fileio import SHIPPED_SEMIFIELD
from softplanes.plane import (build_desarguesian, classify_ptr, containment_incidence,
                              coordinatize_ptr, ideal_checks, is_isomorphism, literal_incidence,
                              plane_loads, planes_isomorphic, projective_linear_group,
                              verify_plane_axioms)

from conftest import fixture_plane


def naive_axioms(inc):
    """Pairwise check of the projective plane axioms with Python sets."""
    lines = [set(np.flatnonzero(r).tolist()) for r in inc]
    pts = range(inc.shape[1])
    two_points = all(sum(1 for L in lines if p in L and q in L) == 1
                     for p, q in itertools.combinations(pts, 2))
    two_lines = all(len(L & K) == 1 for L, K in itertools.combinations(lines, 2))
    return two_points and two_lines


@pytest.mark.parametrize("name", ["heis2", "heis3", "heis4", "heis5"])
def test_coset_plane_axioms_and_routes(name):
    t, plane, action = fixture_plane(name)
    q = t.n
    assert plane.n_points == plane.n_lines == q * q + q + 1
    assert verify_plane_axioms(plane.inc) == q
    assert naive_axioms(plane.inc)
    # three independent incidence constructions agree
    assert np.array_equal(literal_incidence(t), plane.inc)
    assert np.array_equal(containment_incidence(t), plane.inc)


@pytest.mark.parametrize("name", ["heis2", "heis3", "heis4"])
def test_right_action_is_flag_transitive(name):
    t, plane, action = fixture_plane(name)
    assert len(action.kernel()) == 1
    assert plane.inc[1, 1]
    assert action.flag_orbit(1, 1) == plane.n ** 3
    assert opposite_flag_census(plane, action) == Counter({plane.n ** 3: 1})
    assert ideal_checks(t, plane, action).ok


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_desarguesian_incidence_is_orthogonality(q):
    P = build_desarguesian(q)
    F = field_of_order(q)
    pv, lv = P.meta["point_vectors"], P.meta["line_vectors"]
    for L, l in enumerate(lv):
        for p, v in enumerate(pv):
            dot = 0
            for a, b in zip(l, v):
                dot = int(F.add(dot, F.mul(int(a), int(b))))
            assert P.inc[L, p] == (dot == 0)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_heisenberg_plane_is_desarguesian_by_isomorphism(q):
    _, plane, _ = fixture_plane(f"heis{q}")
    iso = planes_isomorphic(plane, build_desarguesian(q))
    assert iso is not None
    assert is_isomorphism(plane, build_desarguesian(q), *iso)


def test_pgl32_has_order_168():
    assert projective_linear_group(build_desarguesian(2)).order == 168


@given(st.sampled_from([2, 3, 4]), st.data())
@settings(max_examples=30, deadline=None)
def test_single_flip_breaks_axioms(q, data):
    inc = build_desarguesian(q).inc.copy()
    L = data.draw(st.integers(0, inc.shape[0] - 1))
    p = data.draw(st.integers(0, inc.shape[1] - 1))
    inc[L, p] = not inc[L, p]
    with pytest.raises(VerificationFailure):
        verify_plane_axioms(inc)


def ternary_from_ring(mul, add):
    q = mul.shape[0]
    x, m, b = np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing="ij")
    return add[mul[x, m], b]


@pytest.mark.parametrize("q", [4, 5, 8, 9])
def test_ptr_classifier_on_field_ternary(q):
    F = field_of_order(q)
    e = F.elements
    T = ternary_from_ring(F.mul_table(), F.add(e[:, None], e[None, :]))
    assert classify_ptr(T)["kind"] == "field"


def test_ptr_classifier_on_semifield_ternary():
    S = semifield_load(SHIPPED_SEMIFIELD)
    e = S.elements
    T = ternary_from_ring(S.table, S.add(e[:, None], e[None, :]))
    assert classify_ptr(T)["kind"] == "semifield"


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
def test_desarguesian_planes_coordinatize_to_fields(q):
    assert coordinatize_ptr(build_desarguesian(q)).kind == "field"


def test_plane_file_round_trip(fano):
    _, plane, _ = fano
    again = plane_loads(plane.dumps())
    assert np.array_equal(again.inc, plane.inc) and again.flag


def test_plane_file_errors():
    with pytest.raises(InputError):
        plane_loads("PLANE 2\n0 1 2\n")
    with pytest.raises(InputError):
        plane_loads("PLANE x\n")
