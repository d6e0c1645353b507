"""Small dense groups used by the search and by property tests."""
from __future__ import annotations

import itertools

import numpy as np

from .algebra import factorize
from .groups import DenseGroup


def _table_from(elements, mul, key=lambda x: x):
    """Cayley table of ``elements`` (identity first) under ``mul``."""
    index = {key(e): i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[key(mul(a, b))]
    return table


def cyclic(n: int) -> DenseGroup:
    e = np.arange(n)
    return DenseGroup((e[:, None] + e[None, :]) % n, name=f"Z{n}")


def abelian(invariants) -> DenseGroup:
    """Direct product of cyclic groups of the given orders."""
    invariants = tuple(invariants)
    elements = list(itertools.product(*(range(m) for m in invariants)))
    table = _table_from(
        elements, lambda a, b: tuple((x + y) % m for x, y, m in zip(a, b, invariants)))
    name = "x".join(f"Z{m}" for m in invariants) or "1"
    return DenseGroup(table, name=name)


def dihedral(n: int) -> DenseGroup:
    """Dihedral group of order 2n: pairs (s, r) meaning x^s y^r."""
    elements = [(s, r) for s in range(2) for r in range(n)]

    def mul(a, b):
        s1, r1 = a
        s2, r2 = b
        return ((s1 + s2) % 2, ((-r1 if s2 else r1) + r2) % n)

    return DenseGroup(_table_from(elements, mul), name=f"D{2 * n}")


def quaternion() -> DenseGroup:
    # units of the quaternions as (sign, axis) with axis 0=1, 1=i, 2=j, 3=k
    table_axes = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elements = [(s, a) for s in (1, -1) for a in range(4)]

    def mul(x, y):
        s, a = table_axes[(x[1], y[1])]
        return (x[0] * y[0] * s, a)

    return DenseGroup(_table_from(elements, mul), name="Q8")


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def abelian_groups(order: int):
    """One representative of every abelian group of the given order."""
    per_prime = []
    for p, e in factorize(order).items():
        per_prime.append([[p ** k for k in part] for part in _partitions(e)])
    for combo in itertools.product(*per_prime):
        yield abelian([m for part in combo for m in part])


def groups_of_order_8() -> list[DenseGroup]:
    return [cyclic(8), abelian((4, 2)), abelian((2, 2, 2)), dihedral(4), quaternion()]
