import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from softplanes import catalog
from softplanes.errors import InputError, VerificationFailure
from softplanes.groups import (PermutationCarrier, Subgroup, center, center_and_series, closure,
                               conjugacy_classes, coset_system, group_loads, index_p_subgroups,
                               is_abelian, is_normal, normalizer, sylow_subgroup)
from softplanes.converse import subgroups_of_order

SMALL = [catalog.cyclic(6), catalog.dihedral(4), catalog.dihedral(6), catalog.quaternion(),
         catalog.abelian([2, 2, 2]), catalog.dihedral(8)]


def brute_subgroups(G):
    """Closures of every set of at most three elements (all test groups are 3-generated)."""
    found = set()
    e = list(range(G.order))
    for gens in itertools.chain.from_iterable(itertools.combinations(e, r) for r in range(4)):
        found.add(closure(G, gens).key)
    return found


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_catalog_tables_are_groups(G):
    G.check_exhaustive()


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_subgroup_enumeration_matches_pair_closure(G):
    ours = set()
    for d in range(1, G.order + 1):
        if G.order % d == 0:
            ours |= {S.key for S in subgroups_of_order(G, d)}
    assert ours == brute_subgroups(G)


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_conjugacy_classes_by_definition(G):
    labels = conjugacy_classes(G)
    for x in range(G.order):
        orbit = {int(G.conj(x, g)) for g in range(G.order)}
        assert {y for y in range(G.order) if labels[y] == labels[x]} == orbit


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_center_by_definition(G):
    Z = center(G)
    want = [x for x in range(G.order)
            if all(int(G.mul(x, g)) == int(G.mul(g, x)) for g in range(G.order))]
    assert Z.members.tolist() == want


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_normalizer_and_normality(G):
    for d in (2, G.order // 2):
        for S in subgroups_of_order(G, d):
            N = normalizer(S)
            want = [g for g in range(G.order)
                    if set(G.conj(S.members, g).tolist()) == set(S.members.tolist())]
            assert N.members.tolist() == want
            assert is_normal(S) == (N.order == G.order)


@given(st.sampled_from(SMALL), st.data())
@settings(max_examples=40, deadline=None)
def test_cosets_partition(G, data):
    divisors = [d for d in range(1, G.order + 1) if G.order % d == 0]
    H = data.draw(st.sampled_from(subgroups_of_order(G, data.draw(st.sampled_from(divisors)))))
    cs = coset_system(H)
    assert len(cs) == G.order // H.order
    for g in range(G.order):
        # right coset Hg contains g and is labelled consistently
        i = cs.index[g]
        assert sorted(G.mul(H.members, g).tolist()) == sorted(np.flatnonzero(cs.index == i).tolist())


@pytest.mark.parametrize("G,p", [(catalog.dihedral(6), 2), (catalog.dihedral(6), 3),
                                 (catalog.cyclic(12), 2), (catalog.dihedral(12), 3)],
                         ids=lambda x: getattr(x, "name", str(x)))
def test_sylow_order_and_conjugacy(G, p):
    P = sylow_subgroup(G, p)
    order = 1
    while G.order % (order * p) == 0:
        order *= p
    assert P.order == order
    # every subgroup of that order is conjugate to P
    keys = {Subgroup(G, G.mask(np.sort(G.conj(P.members, g))), verify=False).key
            for g in range(G.order)}
    assert keys == {S.key for S in subgroups_of_order(G, order)}


def test_sylow_rejects_non_divisor():
    with pytest.raises(InputError):
        sylow_subgroup(catalog.cyclic(9), 2)


@pytest.mark.parametrize("G", [catalog.dihedral(4), catalog.quaternion(), catalog.abelian([2, 2, 2]),
                               catalog.abelian([2, 4])], ids=lambda G: G.name)
def test_index_two_subgroups_complete(G):
    ours = {S.key for S in index_p_subgroups(G, 2)}
    assert ours == {S.key for S in subgroups_of_order(G, G.order // 2)}


def test_series_of_dihedral_and_quaternion():
    for G in (catalog.dihedral(4), catalog.quaternion()):
        Z, derived, lower, cls = center_and_series(G)
        assert Z.order == 2 and cls == 2
    assert is_abelian(catalog.abelian([2, 4]).whole())


def test_group_file_rejects_non_group():
    with pytest.raises((InputError, VerificationFailure)):
        group_loads("GROUP 2\n0 1\n1 1\n")
    with pytest.raises(InputError):
        group_loads("GROUP 2\n0 1\n")


def test_group_file_round_trip():
    G = catalog.dihedral(4)
    H = group_loads(G.dumps())
    assert np.array_equal(H.table, G.table)


def test_non_subgroup_rejected():
    G = catalog.dihedral(4)
    mask = np.zeros(G.order, dtype=bool)
    mask[[0, 1]] = True
    if closure(G, [1]).order == 2:
        mask[[0, 1, 2]] = True
    with pytest.raises(VerificationFailure):
        Subgroup(G, mask)


def test_permutation_carrier_products():
    perms = np.array(list(itertools.permutations(range(4))))
    G = PermutationCarrier(perms)
    for x, y in itertools.product(range(0, 24, 5), range(24)):
        z = int(G.mul(x, y))
        assert np.array_equal(perms[z], perms[y][perms[x]])
