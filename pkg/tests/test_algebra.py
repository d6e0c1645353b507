import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from softplanes.algebra import (FieldAutomorphism, SemifieldTable, factorize, field_make,
                                field_of_order, is_irreducible, p_part, prime_power,
                                semifield_load, semifield_loads)
from softplanes.errors import InputError, VerificationFailure
from softplanes.fileio import SHIPPED_SEMIFIELD

ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def naive_poly_mul(a, b, modulus, p):
    """Schoolbook product of digit vectors reduced by the modulus (independent oracle)."""
    m = len(modulus) - 1
    prod = [0] * (2 * m)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            for i, mc in enumerate(modulus):
                prod[d - m + i] = (prod[d - m + i] - c * mc) % p
    return prod[:m]


def digits(x, p, m):
    return [(x // p ** i) % p for i in range(m)]


@pytest.mark.parametrize("q", ORDERS)
def test_field_multiplication_matches_schoolbook(q):
    F = field_of_order(q)
    e = F.elements
    table = F.mul_table()
    for a, b in itertools.product(e[:12], e):
        want = naive_poly_mul(digits(a, F.p, F.m), digits(b, F.p, F.m), F.modulus, F.p)
        assert digits(int(table[a, b]), F.p, F.m) == want


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms(q):
    F = field_of_order(q)
    e = F.elements
    nz = e[1:]
    assert (F.mul(nz, F.inv(nz)) == 1).all()
    # the multiplicative group is cyclic: the primitive element has order q-1
    powers = {int(F.power(F.primitive, k)) for k in range(q - 1)}
    assert powers == set(nz.tolist())
    a, b, c = e[:, None, None], e[None, :, None], e[None, None, :]
    assert (F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))).all()


@given(st.sampled_from(ORDERS), st.data())
@settings(max_examples=60, deadline=None)
def test_field_power_matches_repeated_products(q, data):
    F = field_of_order(q)
    a = data.draw(st.integers(0, q - 1))
    k = data.draw(st.integers(0, 3 * q))
    acc = 1
    for _ in range(k):
        acc = int(F.mul(acc, a))
    assert int(F.power(a, k)) == acc


def test_reducible_modulus_rejected():
    with pytest.raises(InputError):
        field_make(2, 2, [1, 0, 1])   # x^2 + 1 = (x + 1)^2 over GF(2)
    assert is_irreducible([1, 1, 1], 2)


def test_non_prime_power_rejected():
    with pytest.raises(InputError):
        field_of_order(6)


@given(st.integers(2, 5000))
def test_factorization_reconstructs(n):
    f = factorize(n)
    prod = 1
    for p, e in f.items():
        assert all(p % d for d in range(2, int(p ** 0.5) + 1))
        prod *= p ** e
    assert prod == n
    pp = prime_power(n)
    assert (pp is not None) == (len(f) == 1)
    for p in f:
        assert n % p_part(n, p) == 0 and (n // p_part(n, p)) % p != 0


@pytest.mark.parametrize("q", [4, 8, 9, 16, 27])
def test_frobenius_is_an_automorphism(q):
    F = field_of_order(q)
    e = F.elements
    for ex in range(F.m):
        alpha = FieldAutomorphism(F, ex)
        img = alpha(e)
        assert sorted(img.tolist()) == e.tolist()
        assert (alpha(F.add(e[:, None], e[None, :])) == F.add(img[:, None], img[None, :])).all()
        assert (alpha(F.mul(e[:, None], e[None, :])) == F.mul(img[:, None], img[None, :])).all()
        assert F.m % alpha.order == 0


def test_field_table_is_a_semifield():
    S = SemifieldTable.from_field(field_of_order(4))
    assert S.is_associative and S.is_commutative
    assert semifield_loads(S.dumps()).table.tolist() == S.table.tolist()


def test_shipped_semifield_is_proper():
    S = semifield_load(SHIPPED_SEMIFIELD)
    assert S.order == 16
    assert not S.is_associative
    # independent exhaustive recheck of the invariants
    e = S.elements
    t = S.table
    a, b, c = e[:, None, None], e[None, :, None], e[None, None, :]
    assert (t[a, S.add(b, c)] == S.add(t[a, b], t[a, c])).all()
    assert (t[S.add(a, b), c] == S.add(t[a, c], t[b, c])).all()
    assert (t[1:, 1:] != 0).all()


def test_zero_divisor_rejected_with_pair():
    F = field_of_order(4)
    table = F.mul_table().copy()
    table[2, 3] = 0
    with pytest.raises(VerificationFailure) as exc:
        SemifieldTable(2, 2, table)
    assert exc.value.witness is not None


def test_semifield_header_checked():
    with pytest.raises(InputError):
        semifield_loads("SEMIFIELD 4 2 3\n0 0 0 0\n")
