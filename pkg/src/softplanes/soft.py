"""Verification of soft triples ``(G, A, B, M)``.

A soft triple satisfies

* ``|A| = |B| = |M| = nk`` and ``|G| = n^3 k`` where ``k = |A ∩ B|``, n > 1;
* ``AM`` and ``BM`` are subgroups of order ``n^2 k``;
* ``G = AMB``;
* ``AB ∩ BA = A ∪ B``.

Every check here is exact set arithmetic on boolean masks.  The verifier
refuses (rather than samples) when a product set would need more than
``PAIR_BUDGET`` multiplications.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import BudgetExceeded, VerificationFailure
from .groups import Group, Subgroup, _closure_mask, product_set

PAIR_BUDGET = 10 ** 8
LEMMA_EXHAUSTIVE = 1000


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""

    def line(self) -> str:
        if self.passed:
            status = "PASS"
        else:
            status = f"FAIL({self.witness})" if self.witness is not None else "FAIL"
        tail = f"  # {self.detail}" if self.detail else ""
        return f"{self.name}: {status}{tail}"


@dataclass
class ConditionReport:
    """Ordered list of named checks; ``ok`` iff all passed."""

    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name, passed, witness=None, detail="") -> Check:
        c = Check(name, bool(passed), witness, detail)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def format(self) -> str:
        return "\n".join([f"[{self.title}]"] + [c.line() for c in self.checks])

    def merge(self, other: "ConditionReport") -> "ConditionReport":
        out = ConditionReport(self.title, list(self.checks))
        out.checks += other.checks
        return out


class NotSoft(VerificationFailure):
    """Raised when a candidate triple fails a soft condition."""

    def __init__(self, report: ConditionReport):
        bad = report.failures()
        msg = "; ".join(c.line() for c in bad) or "not soft"
        super().__init__(msg, witness=bad[0].witness if bad else None)
        self.report = report


COND_ORDERS = "orders |A|=|B|=|M|=nk, |G|=n^3k"
COND_SUBGROUPS = "AM, BM subgroups of order n^2k"
COND_FACTOR = "G = AMB"
COND_INTERSECT = "AB ∩ BA = A ∪ B"
CONDITIONS = (COND_ORDERS, COND_SUBGROUPS, COND_FACTOR, COND_INTERSECT)


@dataclass
class SoftTriple:
    G: Group
    A: Subgroup
    B: Subgroup
    M: Subgroup
    n: int
    k: int
    report: ConditionReport | None = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.report is not None and self.report.ok

    def __repr__(self):
        return f"<SoftTriple {self.name or self.G.name} n={self.n} k={self.k} |G|={self.G.order}>"

    @property
    def AM(self) -> Subgroup:
        if "_AM" not in self.meta:
            self.meta["_AM"] = Subgroup(self.G, product_set(self.G, self.A, self.M), verify=False)
        return self.meta["_AM"]

    @property
    def BM(self) -> Subgroup:
        if "_BM" not in self.meta:
            self.meta["_BM"] = Subgroup(self.G, product_set(self.G, self.B, self.M), verify=False)
        return self.meta["_BM"]

    def ab_mask(self) -> np.ndarray:
        return product_set(self.G, self.A, self.B)

    def dual(self) -> "SoftTriple":
        return verify_soft_triple(self.G, self.B, self.A, self.M, name=f"dual({self.name})")


def _check_budget(X: Subgroup | np.ndarray, Y: Subgroup | np.ndarray):
    nx = X.order if isinstance(X, Subgroup) else int(np.count_nonzero(X))
    ny = Y.order if isinstance(Y, Subgroup) else int(np.count_nonzero(Y))
    if nx * ny > PAIR_BUDGET:
        raise BudgetExceeded(f"product set of {nx}x{ny} exceeds {PAIR_BUDGET} pair products")


def _factor(G: Group, g: int, X: np.ndarray, Y: np.ndarray):
    """Some ``(x, y)`` with ``x*y == g``; ``y = x^-1 g`` must land in Y."""
    ys = G.mul(G.inv(X), g)
    hit = np.flatnonzero(np.isin(ys, Y))
    if len(hit) == 0:
        return None
    return int(X[hit[0]]), int(ys[hit[0]])


def check_conditions(G: Group, A: Subgroup, B: Subgroup, M: Subgroup) -> ConditionReport:
    """Evaluate the four soft conditions, each with a witness on failure."""
    rep = ConditionReport("soft conditions")
    k = int(np.count_nonzero(A.mask & B.mask))
    nk = A.order
    n = nk // k if nk % k == 0 else None
    sizes = dict(A=A.order, B=B.order, M=M.order, G=G.order, k=k)
    ok1 = (n is not None and n > 1 and B.order == nk and M.order == nk
           and G.order == n ** 3 * k)
    rep.add(COND_ORDERS, ok1, None if ok1 else sizes, f"n={n}, k={k}")
    n_eff = n if n is not None else 0

    for X, Y, label in ((A, M, "AM"), (B, M, "BM")):
        _check_budget(X, Y)
    am = product_set(G, A, M)
    ma = product_set(G, M, A)
    bm = product_set(G, B, M)
    mb = product_set(G, M, B)
    target = n_eff ** 2 * k
    witness = None
    for label, xy, yx in (("AM", am, ma), ("BM", bm, mb)):
        diff = np.flatnonzero(xy ^ yx)
        if len(diff):
            witness = (label, "not closed", int(diff[0]))
            break
        if int(xy.sum()) != target:
            witness = (label, "order", int(xy.sum()))
            break
    rep.add(COND_SUBGROUPS, witness is None, witness,
            f"|AM|={int(am.sum())}, |BM|={int(bm.sum())}")

    _check_budget(am, B)
    amb = product_set(G, am, B)
    missing = np.flatnonzero(~amb)
    rep.add(COND_FACTOR, len(missing) == 0,
            int(missing[0]) if len(missing) else None, f"|AMB|={int(amb.sum())}")

    _check_budget(A, B)
    ab = product_set(G, A, B)
    ba = product_set(G, B, A)
    inter = ab & ba
    union = A.mask | B.mask
    extra = np.flatnonzero(inter & ~union)
    lacking = np.flatnonzero(union & ~inter)
    if len(extra):
        g = int(extra[0])
        a, b = _factor(G, g, A.members, B.members)
        b2, a2 = _factor(G, g, B.members, A.members)
        w = {"element": g, "ab": (a, b), "b'a'": (b2, a2)}
    elif len(lacking):
        w = {"element": int(lacking[0]), "missing_from": "AB ∩ BA"}
    else:
        w = None
    rep.add(COND_INTERSECT, w is None, w,
            f"|AB∩BA|={int(inter.sum())}, |A∪B|={int(union.sum())}")
    return rep


def verify_soft_triple(G: Group, A: Subgroup, B: Subgroup, M: Subgroup,
                       name: str = "", meta: dict | None = None) -> SoftTriple:
    """Return a verified :class:`SoftTriple` or raise :class:`NotSoft`."""
    rep = check_conditions(G, A, B, M)
    if not rep.ok:
        raise NotSoft(rep)
    k = int(np.count_nonzero(A.mask & B.mask))
    return SoftTriple(G, A, B, M, A.order // k, k, rep, name=name, meta=dict(meta or {}))


def derive_M(G: Group, A: Subgroup, B: Subgroup) -> Subgroup:
    """The unique M completing ``(G, A, B)`` to a soft triple, if any.

    ``AM`` is forced to be ``G \\ A(B\\A)A`` and ``BM`` to be
    ``G \\ B(A\\B)B``; M is their intersection.
    """
    gen = _closure_mask(G, np.array(A.gens + B.gens, dtype=np.int64))
    if not gen.all():
        raise VerificationFailure("A and B do not generate G", int(np.flatnonzero(~gen)[0]))
    b_minus_a = B.mask & ~A.mask
    a_minus_b = A.mask & ~B.mask
    if not b_minus_a.any():
        raise VerificationFailure("B is contained in A: no soft completion")
    am = ~product_set(G, product_set(G, A, b_minus_a), A)
    bm = ~product_set(G, product_set(G, B, a_minus_b), B)
    M = Subgroup(G, am & bm)  # verifies closure, raises if not a subgroup
    verify_soft_triple(G, A, B, M)
    return M


def corollary_checks(t: SoftTriple) -> ConditionReport:
    """Identities forced by the soft conditions, recomputed from scratch."""
    G, A, B, M = t.G, t.A, t.B, t.M
    rep = ConditionReport("derived identities")
    ab = A.mask & B.mask
    am_ = A.mask & M.mask
    bm_ = B.mask & M.mask
    rep.add("A∩M = A∩B = B∩M", np.array_equal(am_, ab) and np.array_equal(bm_, ab),
            None if np.array_equal(am_, ab) and np.array_equal(bm_, ab)
            else int(np.flatnonzero((am_ ^ ab) | (bm_ ^ ab))[0]))
    AM = product_set(G, A, M)
    BM = product_set(G, B, M)
    c1 = AM & B.mask
    c2 = BM & A.mask
    good = np.array_equal(c1, ab) and np.array_equal(c2, ab)
    rep.add("AM∩B = A∩B = BM∩A", good,
            None if good else int(np.flatnonzero((c1 ^ ab) | (c2 ^ ab))[0]))
    inter = AM & BM
    good = np.array_equal(inter, M.mask)
    rep.add("AM∩BM = M", good, None if good else int(np.flatnonzero(inter ^ M.mask)[0]),
            f"|AM∩BM|={int(inter.sum())}, |M|={M.order}")
    comp_a = ~product_set(G, product_set(G, A, B.mask & ~A.mask), A)
    comp_b = ~product_set(G, product_set(G, B, A.mask & ~B.mask), B)
    good = np.array_equal(comp_a, AM) and np.array_equal(comp_b, BM)
    rep.add("AM = G∖A(B∖A)A, BM = G∖B(A∖B)B", good,
            None if good else int(np.flatnonzero((comp_a ^ AM) | (comp_b ^ BM))[0]))
    abm = product_set(G, A, B)
    abab = product_set(G, abm, abm)
    gen = _closure_mask(G, np.array(A.gens + B.gens, dtype=np.int64))
    good = bool(abab.all() and gen.all())
    rep.add("G = ABAB = <A,B>", good,
            None if good else int(np.flatnonzero(~(abab & gen))[0]))
    return rep


def _pairs(xs: np.ndarray, ys: np.ndarray, budget: int):
    """All pairs when small enough, else a deterministic sample of ``budget``."""
    if len(xs) * len(ys) <= budget:
        return np.repeat(xs, len(ys)), np.tile(ys, len(xs)), True
    rng = np.random.default_rng(0)
    return rng.choice(xs, budget), rng.choice(ys, budget), False


def super_noncommutativity_check(t: SoftTriple, sample_budget: int = 10 ** 6) -> ConditionReport:
    """``ab`` is never in ``BA`` for ``a ∈ A∖B``, ``b ∈ B∖A``.

    The second entry re-derives ``AB ∩ BA ⊆ A ∪ B`` from the scan: products
    with a factor in ``A ∩ B`` already lie in ``A ∪ B``.
    """
    G, A, B = t.G, t.A, t.B
    rep = ConditionReport("super-noncommutativity")
    xs = np.flatnonzero(A.mask & ~B.mask)
    ys = np.flatnonzero(B.mask & ~A.mask)
    ba = product_set(G, B, A)
    a, b, exhaustive = _pairs(xs, ys, sample_budget)
    prod = G.mul(a, b)
    bad = np.flatnonzero(ba[prod])
    w = None
    if len(bad):
        i = bad[0]
        g = int(prod[i])
        b2, a2 = _factor(G, g, B.members, A.members)
        w = (int(a[i]), int(b[i]), b2, a2)
    rep.add("ab ∉ BA for a∈A∖B, b∈B∖A", w is None, w,
            f"{len(a)} pairs, {'exhaustive' if exhaustive else 'sampled'}")
    # products ab with a or b in A∩B
    k = np.flatnonzero(A.mask & B.mask)
    rest = np.concatenate([G.mul(k[:, None], B.members[None, :]).ravel(),
                           G.mul(A.members[:, None], k[None, :]).ravel()])
    union = A.mask | B.mask
    ok = bool(union[rest].all()) and w is None and exhaustive
    rep.add("AB ∩ BA ⊆ A ∪ B (from scan)", ok,
            None if ok else "scan incomplete or violated")
    return rep


def lemma_checks(t: SoftTriple) -> ConditionReport:
    """Conjugate intersections and the commutator criterion."""
    G, A, B = t.G, t.A, t.B
    rep = ConditionReport("lemmas")
    abk = A.mask & B.mask
    a_out = np.flatnonzero(A.mask & ~B.mask)
    if len(a_out) > LEMMA_EXHAUSTIVE:
        a_out = np.random.default_rng(0).choice(a_out, LEMMA_EXHAUSTIVE, replace=False)
    conj = G.conj(B.members[None, :], a_out[:, None])
    in_b = B.mask[conj]
    bad = np.argwhere(in_b & ~abk[conj])
    w = None if len(bad) == 0 else (int(a_out[bad[0][0]]), int(conj[bad[0][0], bad[0][1]]))
    rep.add("B^a ∩ B ≤ A∩B for a∈A∖B", w is None, w, f"{len(a_out)} conjugators")

    AM = product_set(G, A, t.M)
    ba = product_set(G, B, A)
    a, b, _ = _pairs(A.members, B.members, 10 ** 6)
    comm = G.commutator(a, b)
    sel = AM[comm] & ~A.mask[comm]
    prod = G.mul(a[sel], b[sel])
    bad = np.flatnonzero(ba[prod])
    w = None if len(bad) == 0 else (int(a[sel][bad[0]]), int(b[sel][bad[0]]))
    rep.add("[a,b] ∈ AM∖A ⟹ ab ∉ BA", w is None, w, f"{int(sel.sum())} qualifying pairs")
    return rep


def full_report(t: SoftTriple) -> ConditionReport:
    """Conditions plus every derived-identity and lemma check."""
    rep = check_conditions(t.G, t.A, t.B, t.M)
    for extra in (corollary_checks(t), super_noncommutativity_check(t), lemma_checks(t)):
        rep = rep.merge(extra)
    rep.title = "certificate"
    return rep


def subgroup_from_ids(G: Group, ids) -> Subgroup:
    return Subgroup(G, G.mask(np.asarray(ids, dtype=np.int64)))
