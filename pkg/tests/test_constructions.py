import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from softplanes.algebra import field_of_order
from softplanes.constructions import (extend_by_automorphism, frobenius, heisenberg,
                                      heisenberg_group, likeable, likeable_group)
from softplanes.errors import InputError
from softplanes.groups import center_and_series, is_elementary_abelian

from conftest import fixture_triple


def matmul3(F, x, y):
    """Product of upper unitriangular matrices given as (a, b, c) = entries (1,2), (1,3), (2,3)."""
    a, b, c = x
    a2, b2, c2 = y
    return (int(F.add(a, a2)), int(F.add(F.add(b, b2), F.mul(a, c2))), int(F.add(c, c2)))


@given(st.sampled_from([2, 3, 4, 5, 8, 9]), st.data())
@settings(max_examples=80, deadline=None)
def test_heisenberg_product_is_matrix_product(q, data):
    F = field_of_order(q)
    G = heisenberg_group(F)
    x, y = (data.draw(st.integers(0, q ** 3 - 1)) for _ in range(2))
    dx = tuple(int(v) for v in G.decode(x))
    dy = tuple(int(v) for v in G.decode(y))
    assert tuple(int(v) for v in G.decode(G.mul(x, y))) == matmul3(F, dx, dy)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_heisenberg_shape(q):
    t = heisenberg(field_of_order(q))
    assert (t.G.order, t.n, t.k) == (q ** 3, q, 1)
    Z, _, _, cls = center_and_series(t.G.to_dense())
    assert Z.order == q and cls == 2


def test_likeable_facts(likeable_bundle):
    t = likeable_bundle[0]
    assert (t.G.order, t.n, t.k) == (15625, 25, 1)
    assert t.A.order == 25 and is_elementary_abelian(t.A)
    assert is_elementary_abelian(t.B) and is_elementary_abelian(t.M)


def test_likeable_rejects_bad_q():
    with pytest.raises(InputError):
        likeable_group(7)            # 7 is 1 mod 3
    with pytest.raises(InputError):
        likeable_group(4)            # even


def test_likeable_small_group_law():
    # brute-force associativity on a sample of the q=5 group
    G = likeable_group(5)
    rng = np.random.default_rng(0)
    x, y, z = (rng.integers(0, G.order, 400) for _ in range(3))
    assert (G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))).all()
    assert (G.mul(x, G.inv(x)) == 0).all()


def test_decoration_of_gf8():
    F = field_of_order(8)
    t = extend_by_automorphism(heisenberg(F), frobenius(F, 1))
    assert (t.G.order, t.n, t.k) == (1536, 8, 3)


def test_trivial_decoration_rejected():
    F = field_of_order(4)
    with pytest.raises(InputError):
        extend_by_automorphism(heisenberg(F), frobenius(F, 0))


def test_semifield_triple():
    t = fixture_triple("semifield16")
    assert (t.G.order, t.n, t.k) == (4096, 16, 1)
