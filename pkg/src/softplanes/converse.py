"""From planes back to groups: extraction, orbit census, feasibility, search."""
from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .algebra import prime_power
from .analysis import contains_collineations, full_axial_elations
from .errors import BudgetExceeded, InputError, VerificationFailure
from .groups import (DENSE_CAP, Group, PermutationCarrier, Subgroup, _closure_mask, center,
                     closure, conjugate_subgroup, index_p_subgroups, is_normal, product_set,
                     sylow_subgroup)
from .plane import (CollineationGroup, ProjectivePlane, build_plane, is_isomorphism,
                    permutation_action, right_action)
from .soft import NotSoft, SoftTriple, check_conditions, derive_M, verify_soft_triple

SEARCH_CAP = 1024


# -- orbits -------------------------------------------------------------------

def _orbit_labels(size: int, images: list[np.ndarray]) -> np.ndarray:
    """Orbit label of each of ``size`` objects given generator image arrays."""
    if not images:
        return np.arange(size)
    r = np.concatenate([np.arange(size)] * len(images))
    c = np.concatenate(images)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(size, size))
    return connected_components(graph, directed=True, connection="weak")[1]


def _flag_table(plane: ProjectivePlane):
    """All flags as (point, line) arrays plus a lookup ``fid[line, point]``."""
    lines, points = np.nonzero(plane.inc)
    fid = np.full(plane.inc.shape, -1, dtype=np.int64)
    fid[lines, points] = np.arange(len(lines))
    return points, lines, fid


def _generator_images(H: CollineationGroup):
    gens = list(H.carrier.generators)
    if not gens:
        return np.zeros((0, H.plane.n_points), dtype=np.int64), np.zeros((0, H.plane.n_lines), dtype=np.int64)
    return H.point_images(gens).astype(np.int64), H.line_images(gens).astype(np.int64)


def flag_orbits(plane: ProjectivePlane, H: CollineationGroup):
    points, lines, fid = _flag_table(plane)
    gp, gl = _generator_images(H)
    images = [fid[gl[j][lines], gp[j][points]] for j in range(len(gp))]
    return points, lines, _orbit_labels(len(points), images)


def opposite_flag_census(plane: ProjectivePlane, H: CollineationGroup, inf_point: int = 0,
                         inf_line: int = 0) -> Counter:
    """Orbit sizes of H on flags (w, W) with w off L∞ and ∞ off W."""
    n = plane.n
    points, lines, labels = flag_orbits(plane, H)
    opposite = ~plane.inc[inf_line, points] & ~plane.inc[lines, inf_point]
    if int(opposite.sum()) != n ** 3:
        raise VerificationFailure(f"{int(opposite.sum())} opposite flags, expected {n ** 3}")
    lab = labels[opposite]
    # orbits of opposite flags stay opposite only if H fixes the flag
    sizes = Counter(labels.tolist())
    inside = Counter(lab.tolist())
    if any(inside[x] != sizes[x] for x in inside):
        raise VerificationFailure("group does not fix the distinguished flag")
    return Counter(sorted(inside.values()))


# -- extraction ---------------------------------------------------------------

@dataclass
class ExtractionResult:
    triple: SoftTriple
    flag: tuple[int, int]               # (point Ā, line B̄)
    ideal_line: int
    ideal_point: int
    fixed_point: int
    fixed_line: int
    plane: ProjectivePlane              # rebuilt from the triple
    point_map: np.ndarray               # π̄ point -> rebuilt point
    line_map: np.ndarray
    action: CollineationGroup = None
    meta: dict = field(default_factory=dict)


def as_permutation_action(plane: ProjectivePlane, H: CollineationGroup) -> CollineationGroup:
    if isinstance(H.carrier, PermutationCarrier):
        return H
    ker = H.kernel()
    if len(ker) != 1:
        raise VerificationFailure("collineation group is not faithful", int(ker[1]))
    return H.abstract()


def restrict_action(plane: ProjectivePlane, H: CollineationGroup, S: Subgroup,
                    name: str = "") -> CollineationGroup:
    """The subgroup S (of H's carrier) as a permutation group on the plane."""
    rows = H.point_images(S.members)
    carrier = PermutationCarrier(rows, name=name or f"{H.name}|{S.order}", check=False)
    return permutation_action(plane, carrier, name=carrier.name)


def _unique(idx: np.ndarray, what: str) -> int:
    if len(idx) != 1:
        raise VerificationFailure(f"expected a unique {what}, found {len(idx)}")
    return int(idx[0])


def extract_soft_triple(plane: ProjectivePlane, H: CollineationGroup) -> ExtractionResult:
    """Recover a soft triple from a plane and a group with an n³ flag orbit."""
    H = as_permutation_action(plane, H)
    n = plane.n
    G = H.carrier
    points, lines, labels = flag_orbits(plane, H)
    sizes = np.bincount(labels)
    good = np.flatnonzero(sizes[labels] == n ** 3)
    if not len(good):
        raise VerificationFailure(f"no flag orbit of size n³ = {n ** 3}",
                                  sorted(Counter(sizes.tolist()).items()))
    first = good[np.lexsort((lines[good], points[good]))[0]]
    Abar, Bbar = int(points[first]), int(lines[first])
    pp, lp = H.point_images(), H.line_images()
    A = Subgroup(G, pp[:, Abar] == Abar)
    B = Subgroup(G, lp[:, Bbar] == Bbar)
    R = np.zeros(plane.n_points, dtype=bool)
    R[pp[:, Abar]] = True
    B_orbit = np.zeros(plane.n_lines, dtype=bool)
    B_orbit[lp[:, Bbar]] = True
    on_A = plane.point_lines[Abar]
    J = _unique(on_A[~B_orbit[on_A]], "line on Ā outside the orbit of B̄")
    on_B = plane.line_points[Bbar]
    i = _unique(on_B[~R[on_B]], "point on B̄ outside the orbit of Ā")
    L = _unique(np.flatnonzero(~(plane.inc[:, R]).any(axis=1)), "line missing the orbit of Ā")
    p = _unique(np.flatnonzero(~(plane.inc[B_orbit]).any(axis=0)), "point off every line of B̄'s orbit")
    if not plane.inc[L, p]:
        raise VerificationFailure("fixed point is not on the fixed line", (p, L))
    if not ((pp[:, p] == p).all() and (lp[:, L] == L).all()):
        raise VerificationFailure("group does not fix the recovered flag", (p, L))
    M = Subgroup(G, (lp[:, J] == J) & (pp[:, i] == i))
    try:
        t = verify_soft_triple(G, A, B, M, name=f"extracted({plane.name})")
    except NotSoft as exc:
        raise VerificationFailure("extracted subgroups are not soft (library bug)",
                                  exc.report.failures) from None
    rebuilt = build_plane(t)
    cos = rebuilt.meta["cosets"]
    n2 = n * n
    pmap = np.full(plane.n_points, -1, dtype=np.int64)
    lmap = np.full(plane.n_lines, -1, dtype=np.int64)
    e = np.arange(G.order)
    for img, target, table in ((pp[:, Abar], 1 + cos["A"].index[e], pmap),
                               (pp[:, i], 1 + n2 + cos["BM"].index[e], pmap),
                               (lp[:, Bbar], 1 + cos["B"].index[e], lmap),
                               (lp[:, J], 1 + n2 + cos["AM"].index[e], lmap)):
        order = np.lexsort((target, img))
        img_s, tgt_s = img[order], target[order]
        starts = np.flatnonzero(np.r_[True, img_s[1:] != img_s[:-1]])
        ends = np.r_[starts[1:], len(img_s)]
        if np.any(tgt_s[starts] != tgt_s[ends - 1]):
            raise VerificationFailure("coset map is not well defined")
        table[img_s[starts]] = tgt_s[starts]
    pmap[p], lmap[L] = 0, 0
    if (pmap < 0).any() or (lmap < 0).any() or not is_isomorphism(plane, rebuilt, pmap, lmap):
        raise VerificationFailure("constructed map is not an isomorphism (library bug)")
    return ExtractionResult(t, (Abar, Bbar), J, i, p, L, rebuilt, pmap, lmap, H)


def sylow_reduction(t: SoftTriple, p: int, plane: ProjectivePlane | None = None,
                    action: CollineationGroup | None = None) -> ExtractionResult:
    """Extract a soft triple from a Sylow p-subgroup acting on the plane of t."""
    pp = prime_power(t.n)
    if t.G.order % p:
        raise InputError(f"{p} does not divide |G| = {t.G.order}")
    if pp is None or pp[0] != p:
        raise InputError(f"n = {t.n} is not a power of {p}")
    plane = plane or build_plane(t)
    action = action or right_action(t, plane)
    P = sylow_subgroup(t.G, p)
    sub = restrict_action(plane, action, P, name=f"Sylow{p}({t.G.name})")
    census = opposite_flag_census(plane, sub)
    if census != Counter({t.n ** 3: 1}):
        raise VerificationFailure(f"Sylow subgroup is not transitive on opposite flags: {dict(census)}")
    res = extract_soft_triple(plane, sub)
    res.meta["sylow"] = P
    return res


# -- order feasibility ----------------------------------------------------------

@dataclass
class OrderFeasibility:
    n: int
    verdicts: dict                      # name -> (passed, reason)

    @property
    def feasible(self) -> bool:
        return all(ok for ok, _ in self.verdicts.values() if ok is not None)

    def reasons(self) -> list[str]:
        return [reason for ok, reason in self.verdicts.values() if ok is False]

    def format(self) -> str:
        rows = [f"n = {self.n}: {'feasible' if self.feasible else 'infeasible'}"]
        for name, (ok, reason) in self.verdicts.items():
            state = {True: "pass", False: "FAIL", None: "n/a"}[ok]
            rows.append(f"  {name}: {state}  # {reason}")
        return "\n".join(rows)


def two_squares(n: int):
    a = 0
    while a * a <= n:
        b = int(round((n - a * a) ** 0.5))
        for c in (b - 1, b, b + 1):
            if c >= 0 and a * a + c * c == n:
                return a, c
        a += 1
    return None


def order_feasibility(n: int, assume_M_normal: bool = False) -> OrderFeasibility:
    if n < 2:
        raise InputError("plane order must be at least 2")
    v = {}
    if n % 4 == 2 and n != 2:
        v["n ≡ 2 (mod 4)"] = (False, f"{n} ≡ 2 (mod 4) and soft planes of such order have n = 2")
    else:
        v["n ≡ 2 (mod 4)"] = (True, f"{n} ≡ {n % 4} (mod 4)" if n != 2 else "n = 2")
    if n % 4 == 1:
        sq = two_squares(n)
        v["sum of two squares"] = (sq is not None,
                                   f"{n} = {sq[0]}² + {sq[1]}²" if sq else
                                   f"{n} ≡ 1 (mod 4) is not a sum of two squares")
    else:
        v["sum of two squares"] = (None, f"{n} ≢ 1 (mod 4): not applicable")
    if assume_M_normal:
        N = n ** 3
        ok = N % 2 == 1 or N & (N - 1) == 0
        v["M normal: n³ odd or a power of 2"] = (ok, f"n³ = {N}")
    else:
        v["M normal: n³ odd or a power of 2"] = (None, "not assumed")
    return OrderFeasibility(n, v)


# -- search -------------------------------------------------------------------

def subgroups_of_order(G: Group, order: int, budget: int = 200_000) -> list[Subgroup]:
    """All subgroups of the given order, grown by adjoining one element at a time."""
    if order == 1:
        return [G.trivial()]
    start = G.trivial()
    seen = {start.key}
    layer = [start]
    found = {}
    work = 0
    while layer:
        nxt = []
        for S in layer:
            for g in np.flatnonzero(~S.mask):
                work += 1
                if work > budget:
                    raise BudgetExceeded(f"subgroup enumeration exceeded {budget} steps")
                try:
                    mask = _closure_mask(G, np.array(list(S.gens) + [int(g)], dtype=np.int64),
                                         start=S.mask, budget=order)
                except BudgetExceeded:
                    continue
                size = int(mask.sum())
                if order % size:
                    continue
                T = Subgroup(G, mask, gens=tuple(S.gens) + (int(g),), verify=False)
                if T.key in seen:
                    continue
                seen.add(T.key)
                if size == order:
                    found[T.key] = T
                else:
                    nxt.append(T)
        layer = nxt
    return sorted(found.values(), key=lambda S: S.canonical())


def _conjugates_key(G: Group, subgroups) -> tuple:
    """Least tuple of canonical member lists over all simultaneous conjugates."""
    best = None
    for g in range(G.order):
        key = tuple(tuple(int(x) for x in np.sort(G.conj(S.members, g))) for S in subgroups)
        if best is None or key < best:
            best = key
    return best


def _lemma_prune(G: Group, A: Subgroup, B: Subgroup) -> bool:
    """True when B^a ∩ B ⊆ A∩B for every a in A∖B (a necessary condition)."""
    AB = A.mask & B.mask
    for a in A.members[~B.mask[A.members]]:
        conj = G.conj(B.members, a)
        inter = conj[B.mask[conj]]
        if not AB[inter].all():
            return False
    return True


def _intersection_condition(G: Group, A: Subgroup, B: Subgroup) -> bool:
    ab = product_set(G, A, B)
    ba = product_set(G, B, A)
    return bool(np.array_equal(ab & ba, A.mask | B.mask))


@dataclass
class SearchResult:
    triples: list
    canonical: list
    log: list = field(default_factory=list)


def candidate_shapes(order: int):
    """(n, k) with n³k = order, n ≥ 2, passing the order filters."""
    out = []
    n = 2
    while n ** 3 <= order:
        if order % n ** 3 == 0 and order_feasibility(n).feasible:
            out.append((n, order // n ** 3))
        n += 1
    return out


def search_soft_triples(G: Group, n: int | None = None, k: int | None = None,
                        cap: int = SEARCH_CAP, prune: bool = True, progress_path=None) -> SearchResult:
    """Soft triples of G up to simultaneous conjugacy."""
    if G.backend != "dense":
        raise InputError("search needs a dense (Cayley table) group")
    if G.order > cap:
        raise BudgetExceeded(f"|G| = {G.order} exceeds the search cap {cap}")
    shapes = [(a, b) for a, b in candidate_shapes(G.order)
              if (n is None or a == n) and (k is None or b == k)]
    if not shapes:
        return SearchResult([], [], ["no feasible (n, k) factorization"])
    done, triples, keys, log = _load_progress(progress_path)
    for nn, kk in shapes:
        subs = subgroups_of_order(G, nn * kk)
        reps, seen = [], set()
        for S in subs:
            ck = _conjugates_key(G, [S])
            if ck not in seen:
                seen.add(ck)
                reps.append(S)
        log.append(f"n={nn} k={kk}: {len(subs)} subgroups of order {nn * kk}, {len(reps)} classes")
        for A in reps:
            tag = f"{nn},{kk}:{A.canonical()}"
            if tag in done:
                continue
            for B in subs:
                if int((A.mask & B.mask).sum()) != kk or B == A:
                    continue
                if prune and not (_lemma_prune(G, A, B) and _intersection_condition(G, A, B)):
                    continue
                try:
                    M = derive_M(G, A, B)
                    t = verify_soft_triple(G, A, B, M)
                except (VerificationFailure, BudgetExceeded):
                    continue
                key = _conjugates_key(G, [t.A, t.B, t.M])
                if key not in keys:
                    keys.add(key)
                    triples.append(t)
            done.add(tag)
            _save_progress(progress_path, done, triples, keys, log)
    canon = sorted(keys)
    # fresh re-verification of everything found
    for t in triples:
        if not check_conditions(G, t.A, t.B, t.M).ok:
            raise VerificationFailure("a logged triple failed re-verification (library bug)")
    return SearchResult(triples, canon, log)


def brute_force_soft_triples(G: Group) -> set:
    """Canonical forms of all soft triples, from every subgroup triple, no pruning."""
    out = set()
    for nn, kk in candidate_shapes(G.order):
        subs = subgroups_of_order(G, nn * kk)
        for A in subs:
            for B in subs:
                for M in subs:
                    if check_conditions(G, A, B, M).ok:
                        out.add(_conjugates_key(G, [A, B, M]))
    return out


def _load_progress(path):
    done, triples, keys, log = set(), [], set(), []
    if path and os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        done = set(data.get("done", []))
        keys = {tuple(tuple(s) for s in key) for key in data.get("found", [])}
        log = list(data.get("log", []))
    return done, triples, keys, log


def _save_progress(path, done, triples, keys, log):
    if not path:
        return
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump({"done": sorted(done), "found": sorted([list(map(list, k)) for k in keys]),
                   "log": log}, fh)
    os.replace(tmp, path)


# -- decorated subgroups ----------------------------------------------------------

@dataclass
class DecoratedHit:
    subgroup: Subgroup
    extraction: ExtractionResult
    is_base: bool
    M_normal: bool
    AM_normal: bool
    BM_normal: bool
    center_order: int
    contains_translations: bool

    @property
    def carrier(self) -> Group:
        return self.extraction.triple.G


@dataclass
class DecoratedSearch:
    hits: list
    rejected: list                      # (subgroup, census)
    translation_order: int


def decorated_subgroup_search(t: SoftTriple, budget: int = 100_000) -> DecoratedSearch:
    """Soft index-p subgroups of a decorated p-group ``G<α>``."""
    G = t.G
    pp = prime_power(G.order)
    if pp is None:
        raise InputError("decorated group is not a p-group")
    p = pp[0]
    if "base" not in t.meta:
        raise InputError("triple was not built by extend_by_automorphism")
    base_order = t.meta["base"].G.order
    plane = build_plane(t)
    action = right_action(t, plane)
    T = full_axial_elations(plane, 0)
    hits, rejected = [], []
    for S in index_p_subgroups(G, p, budget=budget):
        sub = restrict_action(plane, action, S)
        census = opposite_flag_census(plane, sub)
        if census != Counter({t.n ** 3: 1}):
            rejected.append((S, census))
            continue
        res = extract_soft_triple(plane, sub)
        u = res.triple
        hits.append(DecoratedHit(
            subgroup=S, extraction=res, is_base=bool(S.mask[:base_order].all()),
            M_normal=is_normal(u.M), AM_normal=is_normal(u.AM), BM_normal=is_normal(u.BM),
            center_order=center(u.G).order,
            contains_translations=contains_collineations(sub.point_images(), T.points)))
    return DecoratedSearch(hits, rejected, T.order)


def conjugate_triple(t: SoftTriple, g: int) -> SoftTriple:
    return verify_soft_triple(t.G, conjugate_subgroup(t.A, g), conjugate_subgroup(t.B, g),
                              conjugate_subgroup(t.M, g), name=f"{t.name}^{g}")


def generated_by(G: Group, gens) -> Subgroup:
    return closure(G, gens)


__all__ = [
    "DENSE_CAP", "ExtractionResult", "OrderFeasibility", "SearchResult", "DecoratedHit",
    "DecoratedSearch", "extract_soft_triple", "sylow_reduction", "order_feasibility",
    "search_soft_triples", "brute_force_soft_triples", "opposite_flag_census",
    "decorated_subgroup_search", "subgroups_of_order", "restrict_action",
]
