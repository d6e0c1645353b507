import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from softplanes import catalog
from softplanes.converse import subgroups_of_order
from softplanes.errors import VerificationFailure
from softplanes.groups import Subgroup
from softplanes.soft import (COND_FACTOR, COND_INTERSECT, COND_ORDERS, COND_SUBGROUPS, NotSoft,
                             check_conditions, corollary_checks, derive_M, full_report,
                             verify_soft_triple)

from conftest import fixture_triple


def naive_conditions(G, A, B, M):
    """Set-based recomputation of the four conditions."""
    mul = lambda x, y: int(G.mul(x, y))
    A, B, M = (set(S.members.tolist()) for S in (A, B, M))
    k = len(A & B)
    n = len(A) // k if len(A) % k == 0 else None
    c1 = bool(n and n > 1 and len(B) == len(M) == len(A) and G.order == n ** 3 * k)
    prod = lambda X, Y: {mul(x, y) for x in X for y in Y}
    AM, BM = prod(A, M), prod(B, M)
    c2 = (AM == prod(M, A) and BM == prod(M, B) and n is not None
          and len(AM) == len(BM) == n * n * k)
    c3 = prod(AM, B) == set(range(G.order))
    c4 = (prod(A, B) & prod(B, A)) == (A | B)
    return [c1, c2, c3, c4]


ORDER8 = catalog.groups_of_order_8()


@given(st.sampled_from(ORDER8 + [catalog.dihedral(12)]), st.data())
@settings(max_examples=80, deadline=None)
def test_conditions_match_set_oracle(G, data):
    d = data.draw(st.sampled_from([d for d in (2, 3, 4, 6) if G.order % d == 0]))
    subs = subgroups_of_order(G, d)
    A, B, M = (data.draw(st.sampled_from(subs)) for _ in range(3))
    rep = check_conditions(G, A, B, M)
    got = [rep[c].passed for c in (COND_ORDERS, COND_SUBGROUPS, COND_FACTOR, COND_INTERSECT)]
    assert got == naive_conditions(G, A, B, M)


@pytest.mark.parametrize("name", ["heis2", "heis3", "heis4", "heis5"])
def test_heisenberg_certificate(name):
    t = fixture_triple(name)
    rep = full_report(t)
    assert rep.ok, rep.format()
    assert t.k == 1 and t.n == int(name[4:])


@pytest.mark.parametrize("name", ["heis3", "heis4"])
def test_derive_m_recovers_m(name):
    t = fixture_triple(name)
    assert derive_M(t.G, t.A, t.B) == t.M


def test_abelian_pseudo_triple_fails_intersection():
    G = catalog.abelian([2, 2, 2])
    A, B, M = (Subgroup(G, G.mask([0, g])) for g in (1, 2, 4))
    rep = check_conditions(G, A, B, M)
    assert not rep[COND_INTERSECT].passed
    assert rep[COND_INTERSECT].witness is not None
    with pytest.raises(NotSoft):
        verify_soft_triple(G, A, B, M)


def test_swapping_m_breaks_identities():
    t = fixture_triple("heis3")
    with pytest.raises(NotSoft) as exc:
        verify_soft_triple(t.G, t.A, t.B, t.A)
    assert exc.value.report.failures()


def test_identities_hold_on_semifield_triple():
    assert corollary_checks(fixture_triple("semifield16")).ok


def test_dual_triple_is_soft():
    t = fixture_triple("heis3")
    d = t.dual()
    assert check_conditions(d.G, d.A, d.B, d.M).ok


def test_derive_m_rejects_non_generating_pair():
    t = fixture_triple("heis3")
    with pytest.raises(VerificationFailure):
        derive_M(t.G, t.A, t.A)
