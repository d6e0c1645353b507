"""Finite group carriers and the subgroup machinery built on them.

A carrier numbers its elements ``0..order-1`` with 0 the identity and
exposes vectorized ``mul`` and ``inv``.  Subsets of a carrier are boolean
numpy masks; a :class:`Subgroup` wraps a verified mask together with a small
generating set.

Three backends share the contract:

* :class:`DenseGroup` -- an explicit Cayley table (order <= 4096);
* :class:`StructuredGroup` -- a composition formula on encoded tuples,
  supplied by a constructor (order <= 2*10^6);
* :class:`PermutationCarrier` -- a group of permutations, e.g. the
  collineations induced on a plane.
"""
from __future__ import annotations

import math
from collections import Counter
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .algebra import factorize, prime_power
from .errors import BudgetExceeded, InputError, VerificationFailure

DENSE_CAP = 4096
STRUCTURED_CAP = 2_000_000
CERTIFY_TRIPLES = 10_000
CERTIFY_SEED = 20240611
_CHUNK = 1 << 22


def _as_ids(x) -> np.ndarray:
    return np.asarray(x, dtype=np.int64)


class Group:
    """Common interface; subclasses implement ``mul`` and ``inv``."""

    backend = "abstract"
    order: int
    name: str

    def mul(self, x, y) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    def inv(self, x) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    @property
    def identity(self) -> int:
        return 0

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r} order={self.order}>"

    # -- derived element operations -------------------------------------

    def conj(self, x, g):
        """``g^-1 x g``."""
        g = _as_ids(g)
        return self.mul(self.mul(self.inv(g), x), g)

    def commutator(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def power(self, x, e: int):
        x = _as_ids(x)
        result = np.zeros_like(x)
        base = x.copy()
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def element_orders(self, xs=None) -> np.ndarray:
        xs = self.elements if xs is None else _as_ids(xs)
        orders = np.ones(len(xs), dtype=np.int64)
        cur = xs.copy()
        live = cur != 0
        k = 1
        while live.any():
            k += 1
            cur[live] = self.mul(cur[live], xs[live])
            done = live & (cur == 0)
            orders[done] = k
            live &= ~done
            if k > self.order:  # pragma: no cover - corrupted carrier
                raise VerificationFailure("element of unbounded order")
        return orders

    @property
    def generators(self) -> tuple[int, ...]:
        gens = getattr(self, "_gens", None)
        if gens is None:
            gens = _greedy_generators(self, self.elements)
            self._gens = gens
        return gens

    def whole(self) -> "Subgroup":
        mask = np.ones(self.order, dtype=bool)
        return Subgroup(self, mask, gens=self.generators, verify=False)

    def trivial(self) -> "Subgroup":
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        return Subgroup(self, mask, gens=(), verify=False)

    def subgroup(self, members, verify: bool = True) -> "Subgroup":
        return Subgroup.from_members(self, members, verify=verify)

    def mask(self, ids) -> np.ndarray:
        m = np.zeros(self.order, dtype=bool)
        m[_as_ids(ids)] = True
        return m

    # -- axiom checks ---------------------------------------------------

    def check_axioms(self, samples: int = CERTIFY_TRIPLES, seed: int = CERTIFY_SEED):
        """Identity and inverse laws exhaustively; associativity on random triples."""
        e = self.elements
        if not (np.array_equal(self.mul(0, e), e) and np.array_equal(self.mul(e, 0), e)):
            raise VerificationFailure("0 is not the identity")
        inv = self.inv(e)
        bad = np.flatnonzero((self.mul(e, inv) != 0) | (self.mul(inv, e) != 0))
        if len(bad):
            raise VerificationFailure(f"inverse law fails at {int(bad[0])}", int(bad[0]))
        rng = np.random.default_rng(seed)
        x, y, z = (rng.integers(0, self.order, samples) for _ in range(3))
        lhs = self.mul(self.mul(x, y), z)
        rhs = self.mul(x, self.mul(y, z))
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            i = bad[0]
            w = (int(x[i]), int(y[i]), int(z[i]))
            raise VerificationFailure(f"associativity fails at {w}", w)


class DenseGroup(Group):
    backend = "dense"

    def __init__(self, table, name: str = "G", check: bool = True):
        table = np.asarray(table)
        n = table.shape[0]
        if table.shape != (n, n):
            raise InputError("Cayley table must be square")
        if n > DENSE_CAP:
            raise BudgetExceeded(f"dense backend capped at {DENSE_CAP} elements")
        if table.min() < 0 or table.max() >= n:
            raise InputError("Cayley table entries out of range")
        self.table = table.astype(np.int32 if n > 32767 else np.int16)
        self.order = n
        self.name = name
        if not np.array_equal(self.table[0], np.arange(n)):
            raise VerificationFailure("row 0 of the table is not the identity row")
        pos = np.argwhere(self.table == 0)
        inv = np.full(n, -1, dtype=np.int64)
        inv[pos[:, 0]] = pos[:, 1]
        if (inv < 0).any():
            raise VerificationFailure("some element has no inverse")
        self._inv = inv
        if check:
            self.check_exhaustive()

    def check_exhaustive(self):
        """Latin-square and identity checks, then associativity.

        Associativity is exhaustive up to 256 elements; above that Light's
        test is used: ``(x g) y == x (g y)`` for all x, y and g in a set
        generating the table, which implies associativity everywhere.
        """
        t = self.table.astype(np.int64)
        n = self.order
        for rows in (t, t.T):
            if not (np.sort(rows, axis=1) == np.arange(n)).all():
                raise VerificationFailure("table is not a Latin square")
        if not np.array_equal(t[:, 0], np.arange(n)):
            raise VerificationFailure("column 0 is not the identity column")
        middles = range(n) if n <= 256 else _greedy_generators(self, self.elements)
        for g in middles:
            lhs = t[t[:, g]]            # (x g) y, indexed [x, y]
            rhs = t[np.arange(n)[:, None], t[g][None, :]]   # x (g y)
            if not np.array_equal(lhs, rhs):
                x, y = (int(v) for v in np.argwhere(lhs != rhs)[0])
                w = (x, int(g), y)
                raise VerificationFailure(f"associativity fails at {w}", w)

    def mul(self, x, y):
        return self.table[_as_ids(x), _as_ids(y)].astype(np.int64)

    def inv(self, x):
        return self._inv[_as_ids(x)]

    def dumps(self) -> str:
        lines = [f"GROUP {self.order}"]
        lines += [" ".join(map(str, row)) for row in self.table.tolist()]
        return "\n".join(lines) + "\n"


class StructuredGroup(Group):
    """Group given by a vectorized composition formula on integer codes."""

    backend = "structured"

    def __init__(self, order: int, mul: Callable, inv: Callable, name: str = "G",
                 gens: Sequence[int] | None = None, certify: bool = True):
        if order > STRUCTURED_CAP:
            raise BudgetExceeded(f"structured backend capped at {STRUCTURED_CAP} elements")
        self.order = order
        self.name = name
        self._mul = mul
        self._inv = inv
        if gens is not None:
            self._gens = tuple(int(g) for g in gens)
        if certify:
            self.check_axioms()

    def mul(self, x, y):
        x, y = np.broadcast_arrays(_as_ids(x), _as_ids(y))
        return self._mul(x, y)

    def inv(self, x):
        return self._inv(_as_ids(x))

    def to_dense(self) -> DenseGroup:
        if self.order > DENSE_CAP:
            raise BudgetExceeded(f"order {self.order} exceeds dense cap {DENSE_CAP}")
        e = self.elements
        return DenseGroup(self.mul(e[:, None], e[None, :]), name=self.name, check=False)


class PermutationCarrier(Group):
    """Group of permutations of ``0..degree-1``; row 0 must be the identity.

    Products are resolved through a base: a short list of points whose
    images determine an element, so a product only needs the images of the
    base under the second factor.
    """

    backend = "perm"

    def __init__(self, perms, name: str = "H", check: bool = True):
        perms = np.asarray(perms)
        # int32 storage halves memory for large actions (e.g. 15625 x 651)
        perms = np.ascontiguousarray(perms, dtype=np.int32 if perms.shape[1] < 2 ** 31 else np.int64)
        self.perms = perms
        self.order, self.degree = perms.shape
        self.name = name
        if not np.array_equal(perms[0], np.arange(self.degree)):
            raise InputError("first permutation must be the identity")
        self.base = self._choose_base()
        keys = self._keys(perms[:, self.base])
        self._sorter = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._sorter]
        if len(np.unique(keys)) != self.order:
            raise InputError("permutations are not distinct")
        inv = np.empty_like(perms)
        rows = np.arange(self.order)[:, None]
        inv[rows, perms] = np.arange(self.degree)[None, :]
        self._inv = self.lookup(inv[:, self.base])
        if check:
            self.check_axioms(samples=2000)

    def _choose_base(self) -> np.ndarray:
        base: list[int] = []
        classes = np.zeros(self.order, dtype=np.int64)
        while len(np.unique(classes)) < self.order:
            best, best_count = None, -1
            for pt in range(self.degree):
                if pt in base:
                    continue
                refined = classes * self.degree + self.perms[:, pt]
                c = len(np.unique(refined))
                if c > best_count:
                    best, best_count = pt, c
                    if c == self.order:
                        break
            base.append(best)
            _, classes = np.unique(classes * self.degree + self.perms[:, best], return_inverse=True)
        return np.array(base or [0], dtype=np.int64)

    def _keys(self, images: np.ndarray) -> np.ndarray:
        images = np.asarray(images, dtype=np.int64)
        key = np.zeros(images.shape[:-1], dtype=np.int64)
        for j in range(images.shape[-1]):
            key = key * self.degree + images[..., j]
        return key

    def lookup(self, base_images) -> np.ndarray:
        """Element ids whose base images are ``base_images`` (last axis)."""
        keys = self._keys(base_images)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.order - 1)
        found = self._sorted_keys[pos] == keys
        if not np.all(found):
            raise VerificationFailure("product left the permutation set (not closed)")
        return self._sorter[pos]

    def mul(self, x, y):
        # apply x then y: p^(xy) = (p^x)^y
        x, y = np.broadcast_arrays(_as_ids(x), _as_ids(y))
        img = self.perms[y[..., None], self.perms[x][..., self.base]]
        return self.lookup(img)

    def inv(self, x):
        return self._inv[_as_ids(x)]


def _iter_chunks(n: int, size: int):
    for start in range(0, n, size):
        yield start, min(n, start + size)


# -- subsets ------------------------------------------------------------------

def product_set(G: Group, X, Y) -> np.ndarray:
    """Mask of ``{x*y}`` for ``x`` in X, ``y`` in Y (masks or id arrays)."""
    xs = _members(X)
    ys = _members(Y)
    out = np.zeros(G.order, dtype=bool)
    if len(xs) == 0 or len(ys) == 0:
        return out
    step = max(1, _CHUNK // len(ys))
    for a, b in _iter_chunks(len(xs), step):
        out[G.mul(xs[a:b, None], ys[None, :]).ravel()] = True
    return out


def _members(X) -> np.ndarray:
    if isinstance(X, Subgroup):
        return X.members
    X = np.asarray(X)
    if X.dtype == bool:
        return np.flatnonzero(X)
    return X.astype(np.int64).ravel()


def _closure_mask(G: Group, gens: np.ndarray, start: np.ndarray | None = None,
                  budget: int | None = None, within: np.ndarray | None = None) -> np.ndarray:
    """Mask of the subgroup generated by ``gens`` (and ``start`` if given)."""
    if start is None:
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
    else:
        mask = start.copy()
    frontier = np.flatnonzero(mask)
    gens = _as_ids(gens)
    if len(gens) == 0:
        return mask
    count = int(mask.sum())
    while len(frontier):
        new_parts = []
        step = max(1, _CHUNK // len(gens))
        for a, b in _iter_chunks(len(frontier), step):
            prod = G.mul(frontier[a:b, None], gens[None, :]).ravel()
            prod = prod[~mask[prod]]
            if len(prod):
                prod = np.unique(prod)
                if within is not None and not within[prod].all():
                    raise VerificationFailure(
                        "closure leaves the given set", int(prod[~within[prod]][0]))
                mask[prod] = True
                new_parts.append(prod)
        frontier = np.concatenate(new_parts) if new_parts else np.zeros(0, dtype=np.int64)
        count += len(frontier)
        if budget is not None and count > budget:
            raise BudgetExceeded(f"closure exceeds element budget {budget}")
    return mask


def _greedy_generators(G: Group, members: np.ndarray, within: np.ndarray | None = None,
                       order_hint: int | None = None) -> tuple[int, ...]:
    """Greedy generating set: adjoin the least member not yet generated."""
    members = _as_ids(members)
    target = len(members) if order_hint is None else order_hint
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    gens: list[int] = []
    # prefer elements of large order: fewer closure rounds
    orders = G.element_orders(members) if len(members) <= 200_000 else np.ones(len(members))
    cand = members[np.lexsort((members, -orders))]
    for g in cand:
        if mask[g]:
            continue
        gens.append(int(g))
        mask = _closure_mask(G, np.array(gens), start=mask, within=within)
        if mask.sum() >= target:
            break
    return tuple(gens)


class Subgroup:
    """A verified subgroup: boolean mask over the parent plus generators."""

    def __init__(self, parent: Group, mask: np.ndarray, gens: Sequence[int] | None = None,
                 verify: bool = True):
        self.parent = parent
        self.mask = np.asarray(mask, dtype=bool)
        self.members = np.flatnonzero(self.mask)
        self.order = len(self.members)
        if verify and not self.mask[0]:
            raise VerificationFailure("subset does not contain the identity", 0)
        if gens is None:
            # with ``within`` set, generation doubles as the closure check
            gens = _greedy_generators(parent, self.members,
                                      within=self.mask if verify else None)
            self.gens = tuple(int(g) for g in gens)
        else:
            self.gens = tuple(int(g) for g in gens)
            if verify:
                self._verify()

    @classmethod
    def from_members(cls, G: Group, members, verify: bool = True) -> "Subgroup":
        m = np.asarray(members)
        mask = m if m.dtype == bool else G.mask(m)
        return cls(G, mask, verify=verify)

    def _verify(self):
        gen = _closure_mask(self.parent, np.array(self.gens, dtype=np.int64), within=self.mask)
        if gen.sum() != self.order:
            raise VerificationFailure("subset is not closed")

    def __len__(self):
        return self.order

    def __contains__(self, g):
        return bool(self.mask[int(g)])

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and \
            np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(self.key)

    @property
    def key(self) -> bytes:
        return np.packbits(self.mask).tobytes()

    def canonical(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.members)

    def __repr__(self):
        return f"<Subgroup order={self.order} of {self.parent.name}>"

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self.mask & other.mask)

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return bool(np.all(other.mask[self.members]))


def closure(G: Group, generators: Iterable[int], budget: int | None = None) -> Subgroup:
    gens = np.unique(_as_ids(list(generators)))
    gens = gens[gens != 0]
    if budget is None:
        budget = STRUCTURED_CAP
    mask = _closure_mask(G, gens, budget=budget)
    return Subgroup(G, mask, gens=tuple(gens), verify=False)


def join(G: Group, *subgroups: Subgroup) -> Subgroup:
    gens = [g for S in subgroups for g in S.gens]
    return closure(G, gens)


# -- cosets -------------------------------------------------------------------

class CosetSystem:
    """Right (``Hx``) or left (``xH``) cosets with least-id representatives.

    Cosets are numbered in increasing order of their representatives.
    """

    def __init__(self, H: Subgroup, side: str = "right"):
        if side not in ("right", "left"):
            raise InputError("side must be 'right' or 'left'")
        G = H.parent
        self.subgroup, self.side = H, side
        # sweep: the least unassigned element is the least element of its coset
        index = np.full(G.order, -1, dtype=np.int64)
        h = H.members
        reps = []
        pos = 0
        while True:
            free = np.flatnonzero(index[pos:] < 0)
            if not len(free):
                break
            x = pos + int(free[0])
            pos = x
            coset = G.mul(h, x) if side == "right" else G.mul(x, h)
            if np.any(index[coset] >= 0):
                raise VerificationFailure("cosets overlap: subgroup is not closed", x)
            index[coset] = len(reps)
            reps.append(x)
        self.reps = np.array(reps, dtype=np.int64)
        self.index = index
        if len(self.reps) * H.order != G.order:
            raise VerificationFailure("cosets do not partition the group")

    def __len__(self):
        return len(self.reps)

    def coset(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.index == i)


def coset_system(H: Subgroup, side: str = "right") -> CosetSystem:
    return CosetSystem(H, side)


# -- structure ----------------------------------------------------------------

def conjugate_subgroup(S: Subgroup, g: int) -> Subgroup:
    G = S.parent
    mask = G.mask(G.conj(S.members, g))
    gens = tuple(int(x) for x in G.conj(np.array(S.gens, dtype=np.int64), g)) if S.gens else ()
    return Subgroup(G, mask, gens=gens, verify=False)


def commutator(G: Group, a, b):
    return G.commutator(a, b)


def is_normal(S: Subgroup, within: Subgroup | None = None) -> bool:
    G = S.parent
    conj_by = G.generators if within is None else within.gens
    gens = np.array(S.gens, dtype=np.int64)
    if len(gens) == 0:
        return True
    for g in conj_by:
        if not S.mask[G.conj(gens, g)].all():
            return False
    return True


def normalizer(S: Subgroup, within: Subgroup | None = None) -> Subgroup:
    G = S.parent
    cand = G.elements if within is None else within.members
    gens = np.array(S.gens, dtype=np.int64)
    if len(gens) == 0:
        return G.whole() if within is None else within
    ok = S.mask[G.conj(gens[None, :], cand[:, None])].all(axis=1)
    return Subgroup(G, G.mask(cand[ok]), verify=False)


def normal_closure(S: Subgroup, within: Subgroup | None = None) -> Subgroup:
    """Least subgroup containing S normalized by ``within`` (default G)."""
    G = S.parent
    conj_by = np.array(G.generators if within is None else within.gens, dtype=np.int64)
    gens = list(S.gens)
    mask = _closure_mask(G, np.array(gens, dtype=np.int64))
    changed = True
    while changed:
        changed = False
        cur = np.array(gens, dtype=np.int64)
        if len(cur) == 0:
            break
        conj = G.conj(cur[:, None], conj_by[None, :]).ravel()
        new = np.unique(conj[~mask[conj]])
        if len(new):
            gens.append(int(new[0]))
            mask = _closure_mask(G, np.array(gens, dtype=np.int64), start=mask)
            changed = True
    return Subgroup(G, mask, gens=tuple(gens), verify=False)


def centralizer(S: Subgroup, X) -> Subgroup:
    """Elements of S commuting with every element of X."""
    G = S.parent
    xs = X.gens if isinstance(X, Subgroup) else _members(X)
    xs = np.array(xs, dtype=np.int64)
    cand = S.members
    if len(xs) == 0:
        return S
    ok = (G.mul(cand[:, None], xs[None, :]) == G.mul(xs[None, :], cand[:, None])).all(axis=1)
    return Subgroup(G, G.mask(cand[ok]), verify=False)


def center(G: Group, S: Subgroup | None = None) -> Subgroup:
    S = G.whole() if S is None else S
    return centralizer(S, S)


def commutator_subgroup(G: Group, X: Subgroup, Y: Subgroup) -> Subgroup:
    """``[X, Y]`` for X, Y normal in G: normal closure of generator commutators."""
    xs = np.array(X.gens, dtype=np.int64)
    ys = np.array(Y.gens, dtype=np.int64)
    if len(xs) == 0 or len(ys) == 0:
        return G.trivial()
    comms = np.unique(G.commutator(xs[:, None], ys[None, :]).ravel())
    return normal_closure(closure(G, comms))


def derived_subgroup(G: Group, S: Subgroup | None = None) -> Subgroup:
    S = G.whole() if S is None else S
    xs = np.array(S.gens, dtype=np.int64)
    if len(xs) == 0:
        return G.trivial()
    comms = np.unique(G.commutator(xs[:, None], xs[None, :]).ravel())
    return normal_closure(closure(G, comms), within=S)


def center_and_series(G: Group):
    """Return ``(center, derived_series, lower_central_series, class or None)``."""
    Z = center(G)
    derived = [G.whole()]
    while True:
        D = derived_subgroup(G, derived[-1])
        if D.order == derived[-1].order:
            break
        derived.append(D)
    lower = [G.whole()]
    whole = lower[0]
    while True:
        nxt = commutator_subgroup(G, lower[-1], whole)
        if nxt.order == lower[-1].order:
            break
        lower.append(nxt)
    nil_class = len(lower) - 1 if lower[-1].order == 1 else None
    return Z, derived, lower, nil_class


def is_abelian(S: Subgroup) -> bool:
    G = S.parent
    g = np.array(S.gens, dtype=np.int64)
    if len(g) == 0:
        return True
    return bool((G.mul(g[:, None], g[None, :]) == G.mul(g[None, :], g[:, None])).all())


def is_elementary_abelian(S: Subgroup) -> bool:
    if S.order == 1:
        return True
    pp = prime_power(S.order)
    if pp is None or not is_abelian(S):
        return False
    p = pp[0]
    return bool((S.parent.power(S.members, p) == 0).all())


def conjugacy_classes(G: Group) -> np.ndarray:
    """Class label (least element of the class) for every element."""
    e = G.elements
    rows, cols = [], []
    for s in G.generators:
        rows.append(e)
        cols.append(G.conj(e, s))
    if not rows:
        return e.copy()
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(G.order, G.order))
    _, labels = connected_components(graph, directed=True, connection="weak")
    least = np.full(labels.max() + 1, G.order, dtype=np.int64)
    np.minimum.at(least, labels, e)
    return least[labels]


def element_order_histogram(G: Group) -> dict[int, int]:
    return dict(sorted(Counter(G.element_orders().tolist()).items()))


def _quotient_orders(G: Group, N: Subgroup) -> list[int]:
    """Orders of the elements of G/N, one per coset."""
    cs = CosetSystem(N)
    reps = cs.reps
    orders = np.ones(len(reps), dtype=np.int64)
    cur = reps.copy()
    live = ~N.mask[cur]
    k = 1
    while live.any():
        k += 1
        cur[live] = G.mul(cur[live], reps[live])
        done = live & N.mask[cur]
        orders[done] = k
        live &= ~done
    return orders.tolist()


def abelian_invariants_from_orders(orders: Iterable[int]) -> tuple[int, ...]:
    """Elementary divisors of an abelian group, read off its order multiset.

    ``|Q[p^i]| = p^(sum_j min(i, e_j))``, so successive differences of the
    logarithms count the cyclic factors of exponent >= i.
    """
    orders = list(orders)
    out: list[int] = []
    for p, e in factorize(len(orders)).items():
        logs = [round(math.log(sum(1 for o in orders if p ** i % o == 0), p))
                for i in range(e + 2)]
        at_least = [logs[i] - logs[i - 1] for i in range(1, e + 2)]
        for i in range(1, e + 1):
            out += [p ** i] * (at_least[i - 1] - at_least[i])
    return tuple(sorted(out))


def abelianization_invariants(G: Group) -> tuple[int, ...]:
    D = derived_subgroup(G)
    return abelian_invariants_from_orders(_quotient_orders(G, D))


def frattini_p(G: Group, p: int) -> Subgroup:
    """``[G, G] G^p``, the Frattini subgroup of a p-group."""
    D = derived_subgroup(G)
    powers = np.unique(G.power(G.elements, p))
    return normal_closure(closure(G, list(D.gens) + powers.tolist()))


def index_p_subgroups(G: Group, p: int, budget: int = 100_000) -> list[Subgroup]:
    """All subgroups of index p of the p-group G."""
    pp = prime_power(G.order)
    if pp is None or pp[0] != p:
        raise InputError(f"{G.name} is not a {p}-group")
    Phi = frattini_p(G, p)
    r = round(math.log(G.order // Phi.order, p))
    count = (p ** r - 1) // (p - 1)
    if count > budget:
        raise BudgetExceeded(f"{count} index-{p} subgroups exceed budget")
    # basis of G/Phi and coordinates of every element
    basis: list[int] = []
    span = Phi.mask.copy()
    for g in G.elements:
        if not span[g]:
            basis.append(int(g))
            span = _closure_mask(G, np.array(basis), start=Phi.mask)
        if len(basis) == r:
            break
    coords = np.full((G.order, r), -1, dtype=np.int64)
    phi = Phi.members
    for vec in np.ndindex(*([p] * r)):
        g = 0
        for b, e in zip(basis, vec):
            if e:
                g = int(G.mul(g, G.power(b, e)))
        coset = G.mul(g, phi)
        coords[coset] = vec
    out = []
    for lam in _projective_points(p, r):
        vals = (coords @ np.array(lam)) % p
        out.append(Subgroup(G, vals == 0, verify=False))
    out.sort(key=lambda S: S.canonical())
    return out


def _projective_points(p: int, r: int):
    """Nonzero vectors of GF(p)^r with leading nonzero entry 1."""
    for vec in np.ndindex(*([p] * r)):
        nz = [v for v in vec if v]
        if nz and nz[0] == 1:
            yield vec


def sylow_subgroup(G: Group, p: int, within: Subgroup | None = None) -> Subgroup:
    """Sylow p-subgroup grown by normalizer ascent."""
    S = G.whole() if within is None else within
    target = 1
    n = S.order
    while n % p == 0:
        n //= p
        target *= p
    if target == 1:
        raise InputError(f"{p} does not divide {S.order}")
    if target == S.order:
        return S
    P = G.trivial()
    while P.order < target:
        N = normalizer(P, within=S)
        found = None
        cand = N.members[~P.mask[N.members]]
        for x in cand:
            # order of x modulo P
            k, y = 1, int(x)
            while not P.mask[y]:
                y = int(G.mul(y, x))
                k += 1
            if k % p == 0:
                found = int(G.power(x, k // p))
                break
        if found is None:  # pragma: no cover - Sylow theory forbids this
            raise VerificationFailure("normalizer ascent stalled")
        P = Subgroup(G, _closure_mask(G, np.array(list(P.gens) + [found])),
                     gens=tuple(P.gens) + (found,), verify=False)
    return P


# -- group files --------------------------------------------------------------

def group_loads(text: str, name: str = "G") -> DenseGroup:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or rows[0][0] != "GROUP" or len(rows[0]) != 2:
        raise InputError("group file must start with 'GROUP n'")
    try:
        n = int(rows[0][1])
        table = np.array([[int(v) for v in r] for r in rows[1:]], dtype=np.int64)
    except ValueError:
        raise InputError("group file contains a non-integer entry") from None
    if table.shape != (n, n):
        raise InputError(f"expected {n} rows of {n} entries")
    return DenseGroup(table, name=name, check=True)


def group_load(path) -> DenseGroup:
    return group_loads(Path(path).read_text(), name=Path(path).stem)
