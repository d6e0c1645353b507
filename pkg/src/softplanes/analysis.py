"""Elations, translation planes, the structure battery and group invariants."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .algebra import p_part, prime_power
from .errors import BudgetExceeded, VerificationFailure
from .groups import (Group, PermutationCarrier, Subgroup, _closure_mask, _greedy_generators,
                     abelianization_invariants, center_and_series, closure,
                     conjugacy_classes, element_order_histogram, is_abelian,
                     is_elementary_abelian, is_normal, product_set)
from .plane import CollineationGroup, ProjectivePlane, coordinatize_ptr, ideal_indices
from .soft import SoftTriple

FULL_ELATION_MAX_ORDER = 32
ABELIAN_NORMAL_BUDGET = 400
ABELIAN_NORMAL_ATTEMPTS = 5000
ABELIAN_NORMAL_MAX_GROUP = 4096


# -- elation groups -----------------------------------------------------------

@dataclass
class ElationGroup:
    plane: ProjectivePlane
    center: int | None            # None: union over centers on the axis
    axis: int | None              # None: union over axes through the center
    points: np.ndarray            # (order, points) images
    lines: np.ndarray
    ids: np.ndarray | None = None  # carrier ids when taken from a group

    @property
    def order(self) -> int:
        return len(self.points)

    def __repr__(self):
        return f"<ElationGroup center={self.center} axis={self.axis} order={self.order}>"

    def transitive_off_axis(self) -> bool:
        """Transitive on the points off the axis (axis must be fixed)."""
        off = np.flatnonzero(~self.plane.inc[self.axis])
        return bool(np.array_equal(np.unique(self.points[:, off[0]]), off))

    def check_fixed_structure(self):
        """Each nonidentity element fixes exactly one line pointwise (the axis)
        and exactly the lines through one point on it (the center)."""
        plane = self.plane
        for i in range(self.order):
            fp = np.flatnonzero(self.points[i] == np.arange(plane.n_points))
            fl = np.flatnonzero(self.lines[i] == np.arange(plane.n_lines))
            if len(fp) == plane.n_points:
                continue
            kind = classify_central(plane, fp, fl)
            if kind is None or kind[0] != "elation":
                raise VerificationFailure("element is not an elation", i)
            _, c, a = kind
            if (self.axis is not None and a != self.axis) or \
                    (self.center is not None and c != self.center):
                raise VerificationFailure("elation has the wrong center or axis", i)


def classify_central(plane: ProjectivePlane, fixed_points, fixed_lines):
    """('elation'|'homology', center, axis) for a central collineation, else None."""
    n = plane.n
    fp, fl = np.asarray(fixed_points), np.asarray(fixed_lines)
    axis = None
    if len(fp) >= 2:
        cand = plane.join[fp[0], fp[1]]
        if plane.inc[cand, fp].all() and plane.inc[cand].sum() <= len(fp):
            axis = int(cand)
    if axis is None:
        return None
    ctr = None
    if len(fl) >= 2:
        cand = plane.meet[fl[0], fl[1]]
        if plane.inc[fl, cand].all() and plane.inc[:, cand].sum() <= len(fl):
            ctr = int(cand)
    if ctr is None:
        return None
    if len(fp) == n + 1 and len(fl) == n + 1 and plane.inc[axis, ctr]:
        return ("elation", ctr, axis)
    if len(fp) == n + 2 and len(fl) == n + 2 and not plane.inc[axis, ctr]:
        return ("homology", ctr, axis)
    return None


def _fixing(H: CollineationGroup, points=None, lines=None) -> np.ndarray:
    ok = np.ones(H.order, dtype=bool)
    if points is not None and len(points):
        pts = np.asarray(points)
        ok &= (H.point_images()[:, pts] == pts).all(axis=1)
    if lines is not None and len(lines):
        ls = np.asarray(lines)
        ok &= (H.line_images()[:, ls] == ls).all(axis=1)
    return ok


def _as_group(H: CollineationGroup, ids, center, axis) -> ElationGroup:
    ids = np.asarray(ids, dtype=np.int64)
    return ElationGroup(H.plane, center, axis, H.point_images()[ids], H.line_images()[ids], ids)


def elations_in_group(t: SoftTriple | None, plane: ProjectivePlane, action: CollineationGroup,
                      w: int, W: int) -> ElationGroup:
    """Γ(w, W) ∩ G: elements fixing every point of W and every line on w."""
    ids = np.flatnonzero(_fixing(action, plane.line_points[W], plane.point_lines[w]))
    return _as_group(action, ids, w, W)


def axis_elations(action: CollineationGroup, W: int) -> ElationGroup:
    """Γ(W) ∩ G: union over centers on W (identity included)."""
    plane = action.plane
    fix_axis = _fixing(action, points=plane.line_points[W])
    ok = np.zeros(action.order, dtype=bool)
    lp = action.line_images()
    for c in plane.line_points[W]:
        pencil = plane.point_lines[c]
        ok |= fix_axis & (lp[:, pencil] == pencil).all(axis=1)
    return _as_group(action, np.flatnonzero(ok), None, W)


def center_elations(action: CollineationGroup, w: int) -> ElationGroup:
    """Γ(w) ∩ G: elations with center w, union over axes through w."""
    plane = action.plane
    fix_pencil = _fixing(action, lines=plane.point_lines[w])
    ok = np.zeros(action.order, dtype=bool)
    pp = action.point_images()
    for L in plane.point_lines[w]:
        pts = plane.line_points[L]
        ok |= fix_pencil & (pp[:, pts] == pts).all(axis=1)
    return _as_group(action, np.flatnonzero(ok), w, None)


def central_collineations(action: CollineationGroup):
    """Element ids of all elations and homologies of the group, with (center, axis)."""
    plane = action.plane
    pp, lp = action.point_images(), action.line_images()
    fixp = pp == np.arange(plane.n_points)
    fixl = lp == np.arange(plane.n_lines)
    cp, cl = fixp.sum(axis=1), fixl.sum(axis=1)
    n = plane.n
    elations, homologies = {}, {}
    for g in np.flatnonzero(((cp == n + 1) & (cl == n + 1)) | ((cp == n + 2) & (cl == n + 2))):
        kind = classify_central(plane, np.flatnonzero(fixp[g]), np.flatnonzero(fixl[g]))
        if kind is None:
            continue
        (elations if kind[0] == "elation" else homologies)[int(g)] = kind[1:]
    return elations, homologies


def full_axial_elations(plane: ProjectivePlane, W: int, max_order: int = FULL_ELATION_MAX_ORDER) -> ElationGroup:
    """All elations of the plane with axis W, synthesized geometrically.

    For a center c on W and points p, p' on a line through c (both off W)
    the only candidate elation sends x to ``cx ∩ p'(px ∩ W)``; points on
    the line cp are moved through a second pair (q, q').  Candidates that
    fail to be collineations are discarded.
    """
    if plane.n > max_order:
        raise BudgetExceeded(f"plane order {plane.n} exceeds {max_order}")
    J, Mt, inc = plane.join, plane.meet, plane.inc
    N = plane.n_points
    on_W = inc[W]
    off = np.flatnonzero(~on_W)
    p = int(off[0])
    everything = np.arange(N)
    found = [everything.copy()]
    for c in plane.line_points[W]:
        cp = J[c, p]
        q = int(np.flatnonzero(~on_W & ~inc[cp])[0])
        main = ~on_W & ~inc[cp]
        xs = np.flatnonzero(main)
        for p2 in plane.line_points[cp]:
            if p2 == p or on_W[p2]:
                continue
            img = everything.copy()
            img[xs] = Mt[J[c, xs], J[p2, Mt[J[p, xs], W]]]
            q2 = img[q]
            ys = np.flatnonzero(inc[cp] & ~on_W)
            img[ys] = Mt[J[c, ys], J[q2, Mt[J[q, ys], W]]]
            if np.any(img < 0) or len(np.unique(img)) != N:
                continue
            lines = J[img[plane.line_points[:, 0]], img[plane.line_points[:, 1]]]
            if np.array_equal(inc[np.ix_(lines, img)], inc):
                found.append(img)
    perms = np.array(found)
    carrier = PermutationCarrier(perms, name=f"elations(axis {W})", check=False)
    # greedy generation inside the set doubles as the closure check
    _greedy_generators(carrier, np.arange(carrier.order), within=np.ones(carrier.order, dtype=bool))
    lines = J[perms[:, plane.line_points[:, 0]], perms[:, plane.line_points[:, 1]]]
    E = ElationGroup(plane, None, W, perms, lines)
    E.carrier = carrier
    E.check_fixed_structure()
    return E


def translation_group(plane: ProjectivePlane) -> ElationGroup:
    return full_axial_elations(plane, 0)


def is_translation_plane(plane: ProjectivePlane, W: int = 0) -> bool:
    return full_axial_elations(plane, W).transitive_off_axis()


def contains_collineations(big: np.ndarray, small: np.ndarray) -> bool:
    """Every row (point permutation) of ``small`` occurs in ``big``."""
    b = {row.tobytes() for row in np.ascontiguousarray(big, dtype=np.int64)}
    return all(row.tobytes() in b for row in np.ascontiguousarray(small, dtype=np.int64))


# -- structure battery ----------------------------------------------------------

@dataclass
class Outcome:
    key: str
    hypothesis: bool | None
    conclusion: bool | None = None
    detail: str = ""
    witness: object = None

    @property
    def status(self) -> str:
        if self.hypothesis is None:
            return "not evaluated"
        if not self.hypothesis:
            return "vacuous"
        if self.conclusion is None:
            return "not evaluated"
        return "verified" if self.conclusion else "CONTRADICTION"


@dataclass
class StructureReport:
    items: list = field(default_factory=list)

    def add(self, key, hypothesis, conclusion=None, detail="", witness=None) -> Outcome:
        o = Outcome(key, None if hypothesis is None else bool(hypothesis),
                    None if conclusion is None else bool(conclusion), detail, witness)
        self.items.append(o)
        return o

    def __getitem__(self, key) -> Outcome:
        for o in self.items:
            if o.key == key:
                return o
        raise KeyError(key)

    @property
    def contradictions(self) -> list[Outcome]:
        return [o for o in self.items if o.status == "CONTRADICTION"]

    @property
    def ok(self) -> bool:
        return not self.contradictions

    def format(self) -> str:
        rows = ["[structure battery]"]
        for o in self.items:
            hyp = {None: "?", True: "met", False: "unmet"}[o.hypothesis]
            row = f"{o.key}: {o.status} (hypothesis {hyp})"
            if o.detail:
                row += f"  # {o.detail}"
            if o.witness is not None and o.status == "CONTRADICTION":
                row += f"  witness={o.witness}"
            rows.append(row)
        return "\n".join(rows)

    def to_json(self) -> str:
        return json.dumps([dict(key=o.key, hypothesis=o.hypothesis, conclusion=o.conclusion,
                                status=o.status, detail=o.detail,
                                witness=None if o.witness is None else str(o.witness))
                           for o in self.items], indent=2, ensure_ascii=False)


def _ids_subgroup(G: Group, ids) -> Subgroup:
    return Subgroup(G, G.mask(np.asarray(ids, dtype=np.int64)))


def _normal_closure_under(G: Group, S: Subgroup, X: Subgroup) -> Subgroup:
    """<S^X>: generated by conjugates of S's generators by elements of X."""
    gens = np.array(S.gens, dtype=np.int64)
    if not len(gens):
        return G.trivial()
    conj = np.unique(G.conj(gens[:, None], X.members[None, :]).ravel())
    return closure(G, conj.tolist())


def _core_in(G: Group, M: Subgroup, classes: np.ndarray) -> np.ndarray:
    """Mask of the largest G-normal subgroup inside M (union of classes within M)."""
    inside = np.ones(G.order, dtype=bool)
    outside_labels = np.unique(classes[~M.mask])
    inside[np.isin(classes, outside_labels)] = False
    return inside & M.mask


def _p_of(order: int):
    pp = prime_power(order)
    return None if pp is None else pp[0]


def abelian_normal_subgroups(G: Group, classes: np.ndarray, budget: int = ABELIAN_NORMAL_BUDGET,
                             attempts: int = ABELIAN_NORMAL_ATTEMPTS):
    """All abelian normal subgroups, grown one conjugacy class at a time.

    Every abelian normal subgroup is reached through a chain of abelian
    normal subgroups, each adding one class, so the search is complete
    unless a budget is hit.
    """
    if G.order > ABELIAN_NORMAL_MAX_GROUP:
        raise BudgetExceeded(f"|G| = {G.order} exceeds {ABELIAN_NORMAL_MAX_GROUP}")
    labels = np.unique(classes)
    members = {int(c): np.flatnonzero(classes == c) for c in labels if c != 0}
    self_commuting = {c: _commute(G, m, m) for c, m in members.items()}
    start = G.trivial()
    seen = {start.key: start}
    queue = [start]
    tried = 0
    while queue:
        N = queue.pop()
        gens = np.array(N.gens, dtype=np.int64)
        for c, m in members.items():
            if N.mask[c] or not self_commuting[c]:
                continue
            tried += 1
            if tried > attempts:
                raise BudgetExceeded(f"more than {attempts} extension attempts")
            if len(gens) and not _commute(G, m, gens):
                continue
            S = closure(G, list(N.gens) + m.tolist())
            if S.key in seen:
                continue
            seen[S.key] = S
            if len(seen) > budget:
                raise BudgetExceeded(f"more than {budget} abelian normal subgroups")
            queue.append(S)
    return list(seen.values())


def _commute(G: Group, xs, ys) -> bool:
    xs, ys = np.asarray(xs)[:, None], np.asarray(ys)[None, :]
    return bool(np.array_equal(G.mul(xs, ys), G.mul(ys, xs)))


def proposition_battery(t: SoftTriple, plane: ProjectivePlane, action: CollineationGroup,
                        abelian_budget: int = ABELIAN_NORMAL_BUDGET,
                        full_elation_max: int = FULL_ELATION_MAX_ORDER) -> StructureReport:
    """Structural consequences of softness, each checked hypothesis-first."""
    rep = StructureReport()
    G, A, B, M, n, k = t.G, t.A, t.B, t.M, t.n, t.k
    AM, BM = t.AM, t.BM
    J_line, i_point = ideal_indices(plane)

    gam_linf = axis_elations(action, 0)
    gam_inf = center_elations(action, 0)
    A0g = elations_in_group(t, plane, action, 0, J_line)
    B0g = elations_in_group(t, plane, action, i_point, 0)
    M0g = elations_in_group(t, plane, action, 0, 0)
    elations, homologies = central_collineations(action)
    el_mask = np.zeros(G.order, dtype=bool)
    el_mask[list(elations)] = True
    el_mask[0] = True
    L_mask = G.mask(gam_linf.ids)
    I_mask = G.mask(gam_inf.ids)
    M0_mask = G.mask(M0g.ids)
    B0_mask = G.mask(B0g.ids)
    A0_mask = G.mask(A0g.ids)
    classes = conjugacy_classes(G)

    full_T = None
    if plane.n <= full_elation_max:
        full_T = full_axial_elations(plane, 0, max_order=full_elation_max)

    # translation plane when <B^A> <= BM
    BA = _normal_closure_under(G, B, A)
    hyp = BA.is_subgroup_of(BM)
    concl = detail = None
    if hyp:
        GL = _ids_subgroup(G, gam_linf.ids)
        trans = gam_linf.transitive_off_axis()
        concl = prime_power(n) is not None and is_normal(BM) and trans and GL.is_subgroup_of(BM)
        detail = f"|Γ(L∞)∩G|={GL.order}, transitive={trans}"
        if full_T is not None:
            full_trans = full_T.transitive_off_axis()
            concl = concl and full_trans and full_T.order == n * n and \
                contains_collineations(gam_linf.points, full_T.points)
            detail += f", full translation group order {full_T.order}"
    rep.add("translation plane when <B^A> ≤ BM", hyp, concl, detail or f"|<B^A>|={BA.order}")

    # semifield plane when AM, BM normal or [A, B] <= M
    normal_both = is_normal(AM) and is_normal(BM)
    comm = G.commutator(A.members[:, None], B.members[None, :]).ravel()
    ab_in_m = bool(M.mask[comm].all())
    hyp = normal_both or ab_in_m
    concl = None
    detail = f"AM,BM normal={normal_both}, [A,B]≤M={ab_in_m}"
    if hyp:
        ring = coordinatize_ptr(plane)
        concl = ring.kind in ("semifield", "field")
        detail += f", coordinate ring: {ring.kind}"
    rep.add("semifield plane when AM, BM normal or [A,B] ≤ M", hyp, concl, detail)

    # BM abelian
    hyp = is_abelian(BM)
    concl = None
    if hyp:
        concl = (prime_power(n) is not None and is_elementary_abelian(BM) and BM.order == n * n
                 and is_normal(BM) and np.array_equal(L_mask, BM.mask)
                 and gam_linf.transitive_off_axis())
    rep.add("BM abelian: BM is the translation group", hyp, concl, f"|BM|={BM.order}")

    # abelian normal subgroups of order >= n^2
    try:
        subs = abelian_normal_subgroups(G, classes, budget=abelian_budget)
    except BudgetExceeded as exc:
        rep.add("abelian normal N of order ≥ n²", None, None, f"not evaluated ({exc})")
    else:
        big = [N for N in subs if N.order >= n * n]
        bad = None
        for N in big:
            if not _abelian_normal_alternatives(t, plane, action, N, L_mask, I_mask):
                bad = N.canonical()[:8]
                break
        rep.add("abelian normal N of order ≥ n²", bool(big), bad is None if big else None,
                f"{len(subs)} abelian normal subgroups, {len(big)} of order ≥ n²", bad)

    # elation subgroups of A, B, M
    A0 = A.mask & el_mask
    B0 = B.mask & el_mask
    M0 = M.mask & el_mask
    checks = {
        "elations of A = Γ(∞,𝔍)": np.array_equal(A0, A0_mask),
        "elations of B = Γ(𝔦,L∞)": np.array_equal(B0, B0_mask),
        "elations of M = Γ(∞,L∞)": np.array_equal(M0, M0_mask),
    }
    M0s = _ids_subgroup(G, M0g.ids)
    A0s = _ids_subgroup(G, A0g.ids)
    B0s = _ids_subgroup(G, B0g.ids)
    checks["M₀ normal"] = is_normal(M0s)
    checks["M₀ contains every G-normal subgroup of M"] = bool(
        np.all(M0_mask[_core_in(G, M, classes)]))
    mg = np.array(M.gens, dtype=np.int64)
    checks["M normalizes A₀ and B₀"] = bool(
        A0_mask[G.conj(A0s.members[:, None], mg[None, :])].all()
        and B0_mask[G.conj(B0s.members[:, None], mg[None, :])].all()) if len(mg) else True
    checks["|A₀|, |B₀|, |M₀| divide n"] = all(n % S.order == 0 for S in (A0s, B0s, M0s))
    checks["every elation lies in Γ(∞) ∪ Γ(L∞)"] = bool(np.all((L_mask | I_mask)[el_mask]))
    failed = [k_ for k_, v in checks.items() if not v]
    rep.add("elation subgroups A₀, B₀, M₀", True, not failed,
            f"|A₀|={A0s.order}, |B₀|={B0s.order}, |M₀|={M0s.order}", failed or None)

    # partition of Γ(L∞) when B₀ != 1
    hyp = B0s.order > 1
    concl, detail, witness = None, "", None
    if hyp:
        concl, detail, witness = _translation_partition(t, plane, action, gam_linf, gam_inf,
                                                        M0s, A0s, B0s, L_mask, I_mask)
    rep.add("Γ(L∞) partition by conjugates of B₀", hyp, concl, detail, witness)

    # involutions when n even and (k odd or n nonsquare)
    square = int(round(n ** 0.5)) ** 2 == n
    hyp = n % 2 == 0 and (k % 2 == 1 or not square)
    concl, detail = None, ""
    if hyp:
        orders = G.element_orders()
        inv = np.flatnonzero(orders == 2)
        in_union = bool(np.all((L_mask | I_mask)[inv]))
        GL, GI = _ids_subgroup(G, gam_linf.ids), _ids_subgroup(G, gam_inf.ids)
        ea = is_elementary_abelian(GL) and is_elementary_abelian(GI)
        contains = B0s.is_subgroup_of(GL) and M0s.is_subgroup_of(GL) and \
            A0s.is_subgroup_of(GI) and M0s.is_subgroup_of(GI)
        cls2 = _class_at_most_two(G, GI, GL)
        concl = in_union and ea and contains and cls2
        detail = f"{len(inv)} involutions, all in Γ(∞)∪Γ(L∞)={in_union}"
    rep.add("involutions are elations (n even, k odd or n nonsquare)", hyp, concl, detail)

    # n = 2 mod 4
    hyp = n % 4 == 2
    rep.add("n ≡ 2 (mod 4) forces n = 2", hyp, (n == 2) if hyp else None, f"n={n}")

    # M normal
    Mn = is_normal(M)
    concl, detail = None, ""
    if Mn:
        parts = {
            "M = M₀ = Γ(∞,L∞)": np.array_equal(M.mask, M0_mask) and np.array_equal(M0, M.mask),
            "A∩B = 1": k == 1,
            "|M| = n": M.order == n,
            "|G| = n³": G.order == n ** 3,
            "|G| odd or a power of 2": G.order % 2 == 1 or G.order & (G.order - 1) == 0,
            "unique factorization amb": _unique_amb(G, A, M, B),
        }
        concl = all(parts.values())
        detail = ", ".join(f"{key}={val}" for key, val in parts.items())
    rep.add("M normal: A∩B = 1, |G| = n³, unique amb", Mn, concl, detail)

    # C_B(M) != 1 (under M normal)
    cbm = B.members[(G.mul(B.members[:, None], M.members[None, :]) ==
                     G.mul(M.members[None, :], B.members[:, None])).all(axis=1)]
    hyp = Mn and len(cbm) > 1
    rep.add("C_B(M) ≠ 1 with M normal: M elementary abelian of order n", hyp,
            (is_elementary_abelian(M) and M.order == n) if hyp else None, f"|C_B(M)|={len(cbm)}")

    # homologies
    hom_orders = sorted({int(G.element_orders(np.array([g]))[0]) for g in homologies})
    rep.add("homology orders divide n-1", bool(homologies),
            all((n - 1) % o == 0 for o in hom_orders) if homologies else None,
            f"{len(homologies)} homologies, orders {hom_orders}")

    # full translation group elementary abelian when transitive
    if full_T is None:
        rep.add("full translation group elementary abelian when transitive", None, None,
                f"not evaluated (order {n} > {full_elation_max})")
    else:
        trans = full_T.transitive_off_axis()
        ea = None
        if trans:
            T = full_T.carrier
            e = np.arange(T.order)
            comm_ok = bool(np.array_equal(T.mul(e[:, None], e[None, :]), T.mul(e[None, :], e[:, None])))
            pw = _p_of(T.order)
            ea = comm_ok and pw is not None and bool((T.power(e, pw) == 0).all()) and T.order == n * n
        rep.add("full translation group elementary abelian when transitive", trans, ea,
                f"order {full_T.order}")
    return rep


def _class_at_most_two(G: Group, X: Subgroup, Y: Subgroup) -> bool:
    """XY is a subgroup of class at most 2."""
    prod = product_set(G, X, Y)
    gens = np.array(X.gens + Y.gens, dtype=np.int64)
    if not len(gens):
        return True
    if not np.array_equal(_closure_mask(G, gens), prod):
        return False
    # commutators of generators central => S/Z(S) abelian
    comm = np.unique(G.commutator(gens[:, None], gens[None, :]).ravel())
    return _commute(G, comm, gens)


def _unique_amb(G: Group, A: Subgroup, M: Subgroup, B: Subgroup) -> bool:
    if A.order * M.order * B.order != G.order:
        return False
    am = G.mul(A.members[:, None], M.members[None, :]).ravel()
    amb = G.mul(am[:, None], B.members[None, :]).ravel()
    return len(np.unique(amb)) == G.order


def _abelian_normal_alternatives(t, plane, action, N: Subgroup, L_mask, I_mask) -> bool:
    n = t.n
    G = t.G
    pp, lp = action.point_images(), action.line_images()
    off_pts = np.arange(1, 1 + n * n)
    pts_orbit = np.unique(pp[N.members, 1])
    line_orbit = np.unique(lp[N.members, 1])
    trans_pts = np.array_equal(pts_orbit, off_pts)
    trans_lines = np.array_equal(line_orbit, off_pts)
    # translation group N (axis L∞) or dual translation group N (center ∞)
    if N.order == n * n and trans_pts and bool(L_mask[N.members].all()):
        return True
    if N.order == n * n and trans_lines and bool(I_mask[N.members].all()):
        return True
    third = (N.order == n * n and trans_pts and trans_lines
             and (t.A.mask & N.mask).sum() == 1 and (t.B.mask & N.mask).sum() == 1
             and product_set(G, t.A, N).all() and product_set(G, t.B, N).all())
    return bool(third)


def _translation_partition(t, plane, action, gam_linf, gam_inf, M0s, A0s, B0s, L_mask, I_mask):
    G, A, n = t.G, t.A, t.n
    GL = _ids_subgroup(G, gam_linf.ids)
    parts: dict[str, bool] = {}
    p = _p_of(GL.order)
    parts["Γ(L∞) elementary abelian p-group"] = p is not None and is_elementary_abelian(GL)
    if p is None:
        return False, "Γ(L∞) is not a p-group", GL.order
    # conjugates of B0 by A
    b0 = B0s.members
    blocks = {}
    for a in A.members:
        conj = np.sort(G.conj(b0, a))
        blocks[conj.tobytes()] = conj[conj != 0]
    blocks = list(blocks.values())
    union = np.concatenate(blocks)
    target = np.flatnonzero(L_mask & ~G.mask(M0s.members))
    partition = len(blocks) == n and len(union) == len(np.unique(union)) and \
        np.array_equal(np.sort(union), target)
    # G-invariance: conjugating by generators permutes the blocks
    keys = {np.sort(b).tobytes() for b in blocks}
    invariant = all(np.sort(G.conj(b, g)).tobytes() in keys for b in blocks for g in G.generators)
    parts["{B₀^a∖1} partitions Γ(L∞)∖M₀ into n blocks, G-invariant"] = bool(partition and invariant)
    lhs = n * (B0s.order - 1)
    rhs = (GL.order // M0s.order - 1) * M0s.order
    parts["n/|M₀| = (|Γ(L∞):M₀|-1)/(|B₀|-1)"] = GL.order % M0s.order == 0 and lhs == rhs
    np_ = p_part(n, p)
    parts["|M₀| = n_p ≥ |B₀| > 1"] = M0s.order == np_ >= B0s.order > 1
    detail = (f"p={p}, n/|M₀|={n}/{M0s.order}, (|Γ(L∞):M₀|-1)/(|B₀|-1)="
              f"({GL.order // M0s.order}-1)/({B0s.order}-1)")
    if np_ != n:
        m = n // np_ - 1
        parts["n determines |B₀|"] = B0s.order == p_part(m, p)
        if A0s.order > 1:
            GI = _ids_subgroup(G, gam_inf.ids)
            parts["|A₀| = |B₀|, |Γ(∞)| = |Γ(L∞)|"] = A0s.order == B0s.order and GI.order == GL.order
            parts["Γ(∞)Γ(L∞) class 2 with center M₀"] = _class_at_most_two(G, GI, GL)
            x = GI.members[~M0s.mask[GI.members]]
            y = GL.members[~M0s.mask[GL.members]]
            parts["Γ(∞)∖M₀ and Γ(L∞)∖M₀ never commute"] = not bool(
                np.any(G.mul(x[:, None], y[None, :]) == G.mul(y[None, :], x[:, None])))
    failed = [key for key, v in parts.items() if not v]
    return not failed, detail, failed or None


# -- non-isomorphism certificates ----------------------------------------------

def group_invariants(G: Group) -> list[tuple[str, object]]:
    Z, derived, lower, cls = center_and_series(G)
    return [
        ("order", G.order),
        ("abelian", Z.order == G.order),
        ("center order", Z.order),
        ("abelianization", abelianization_invariants(G)),
        ("element orders", element_order_histogram(G)),
        ("derived series orders", tuple(S.order for S in derived)),
        ("lower central series orders", tuple(S.order for S in lower)),
        ("nilpotency class", cls),
    ]


def noniso_certificate(G1: Group, G2: Group):
    """First invariant on which the groups differ, or None (inconclusive)."""
    if G1.order != G2.order:
        return {"invariant": "order", "left": G1.order, "right": G2.order}
    for (name, a), (_, b) in zip(group_invariants(G1), group_invariants(G2)):
        if a != b:
            return {"invariant": name, "left": a, "right": b}
    return None

