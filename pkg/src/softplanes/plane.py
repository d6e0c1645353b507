"""Projective planes: coset construction, axiom checks, actions, coordinates.

Incidence is a boolean matrix ``inc[line, point]``.  Planes built from a soft
triple carry the distinguished flag at index 0 on both sides: point 0 is
``∞`` and line 0 is ``L∞``.  Points 1..n² are the right cosets ``Ax`` and
points n²+1..n²+n the cosets ``BMx``; lines 1..n² are ``By`` and the rest
``AMy``.  Within each block cosets are ordered by least representative.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import field_of_order, prime_power
from .errors import BudgetExceeded, InputError, VerificationFailure
from .groups import Group, PermutationCarrier, Subgroup, coset_system
from .soft import ConditionReport, SoftTriple

FULL_CACHE = 40_000_000   # max cached permutation entries per side
ISO_GENERIC_MAX = 9


# -- planes -------------------------------------------------------------------

class ProjectivePlane:
    def __init__(self, inc, flag: bool = False, point_labels=None, line_labels=None,
                 name: str = "", check: bool = True):
        self.inc = np.ascontiguousarray(np.asarray(inc, dtype=bool))
        self.n_lines, self.n_points = self.inc.shape
        self.flag = flag
        self.name = name
        self.point_labels = point_labels
        self.line_labels = line_labels
        self.meta: dict = {}
        if check:
            self.n = verify_plane_axioms(self.inc)
        else:
            self.n = int(self.inc[0].sum()) - 1
        if flag and not self.inc[0, 0]:
            raise VerificationFailure("point 0 is not on line 0: no distinguished flag")
        self._join = self._meet = None

    def __repr__(self):
        return f"<ProjectivePlane {self.name} order={self.n} flag={self.flag}>"

    @property
    def line_points(self) -> np.ndarray:
        """(lines, n+1) sorted point indices of each line."""
        if "_lp" not in self.meta:
            self.meta["_lp"] = np.nonzero(self.inc)[1].reshape(self.n_lines, -1)
        return self.meta["_lp"]

    @property
    def point_lines(self) -> np.ndarray:
        if "_pl" not in self.meta:
            self.meta["_pl"] = np.nonzero(self.inc.T)[1].reshape(self.n_points, -1)
        return self.meta["_pl"]

    @property
    def join(self) -> np.ndarray:
        """``join[p, q]`` = the line through distinct points p, q (-1 on the diagonal)."""
        if self._join is None:
            self._join = _pair_table(self.line_points, self.n_points)
        return self._join

    @property
    def meet(self) -> np.ndarray:
        if self._meet is None:
            self._meet = _pair_table(self.point_lines, self.n_lines)
        return self._meet

    def dumps(self) -> str:
        head = f"PLANE {self.n}" + (" FLAG" if self.flag else "")
        rows = [" ".join(map(str, r)) for r in self.line_points]
        return "\n".join([head] + rows) + "\n"

    def incidence_matrix_text(self) -> str:
        return "\n".join(" ".join("1" if b else "0" for b in row) for row in self.inc) + "\n"


def _pair_table(blocks: np.ndarray, size: int) -> np.ndarray:
    table = np.full((size, size), -1, dtype=np.int32)
    idx = np.arange(len(blocks))[:, None, None]
    table[blocks[:, :, None], blocks[:, None, :]] = np.broadcast_to(idx, (len(blocks),) + (blocks.shape[1],) * 2)
    np.fill_diagonal(table, -1)
    return table


def plane_loads(text: str, name: str = "") -> ProjectivePlane:
    rows = [r.split() for r in text.splitlines() if r.strip() and not r.startswith("#")]
    if not rows or rows[0][0] != "PLANE" or len(rows[0]) < 2:
        raise InputError("plane file must start with 'PLANE n'")
    try:
        n = int(rows[0][1])
        lines = [[int(x) for x in r] for r in rows[1:]]
    except ValueError as exc:
        raise InputError(f"malformed plane file: {exc}") from None
    flag = "FLAG" in rows[0][2:]
    N = n * n + n + 1
    if len(lines) != N:
        raise InputError(f"expected {N} lines, found {len(lines)}")
    inc = np.zeros((N, N), dtype=bool)
    for i, pts in enumerate(lines):
        if len(pts) != n + 1 or min(pts) < 0 or max(pts) >= N:
            raise InputError(f"line {i} must list {n + 1} point indices below {N}")
        inc[i, pts] = True
    return ProjectivePlane(inc, flag=flag, name=name)


def plane_load(path) -> ProjectivePlane:
    with open(path) as fh:
        return plane_loads(fh.read(), name=str(path))


def verify_plane_axioms(inc) -> int:
    """Order n of the plane, or VerificationFailure with a witness."""
    inc = np.asarray(inc, dtype=bool)
    nl, npt = inc.shape
    if nl != npt or nl < 7:
        raise VerificationFailure(f"need equally many points and lines (>= 7); got {npt}, {nl}")
    m = inc.astype(np.int32)
    pp = m.T @ m
    np.fill_diagonal(pp, 1)
    bad = np.argwhere(pp != 1)
    if len(bad):
        p, q = map(int, bad[0])
        raise VerificationFailure(f"points {p}, {q} share {pp[p, q]} lines", (p, q))
    ll = m @ m.T
    np.fill_diagonal(ll, 1)
    bad = np.argwhere(ll != 1)
    if len(bad):
        a, b = map(int, bad[0])
        raise VerificationFailure(f"lines {a}, {b} share {ll[a, b]} points", (a, b))
    if find_quadrilateral(inc) is None:
        raise VerificationFailure("degenerate: no four points with no three collinear")
    sizes = m.sum(axis=1)
    n = int(sizes[0]) - 1
    if not (sizes == n + 1).all() or nl != n * n + n + 1:
        raise VerificationFailure("line sizes are inconsistent with the point count")
    return n


def find_quadrilateral(inc, max_triangles: int = 10_000):
    """Least four points (lexicographically by triangle) with no three collinear."""
    inc = np.asarray(inc, dtype=bool)
    npt = inc.shape[1]
    tried = 0
    for a, b, c in itertools.combinations(range(npt), 3):
        sides = [inc[:, a] & inc[:, b], inc[:, a] & inc[:, c], inc[:, b] & inc[:, c]]
        if (sides[0] & inc[:, c]).any():
            continue
        covered = np.zeros(npt, dtype=bool)
        for s in sides:
            covered |= inc[s].any(axis=0)
        free = np.flatnonzero(~covered)
        if len(free):
            return a, b, c, int(free[0])
        tried += 1
        if tried >= max_triangles:
            break
    return None


def collinear_points(plane: ProjectivePlane, pts) -> bool:
    return bool(np.any(plane.inc[:, list(pts)].all(axis=1)))


# -- coset construction -------------------------------------------------------

def build_plane(t: SoftTriple, check: bool = True) -> ProjectivePlane:
    """Plane whose points and lines are the cosets of the triple."""
    G, n = t.G, t.n
    cA, cB = coset_system(t.A), coset_system(t.B)
    cAM, cBM = coset_system(t.AM), coset_system(t.BM)
    n2 = n * n
    if not (len(cA) == len(cB) == n2 and len(cAM) == len(cBM) == n):
        raise VerificationFailure("coset counts do not match n^2, n")
    N = n2 + n + 1
    inc = np.zeros((N, N), dtype=bool)
    inc[0, 0] = True
    inc[0, 1 + n2:] = True        # BMx on L∞
    inc[1 + n2:, 0] = True        # AMy on ∞
    ab = t.ab_mask()
    am, bm = t.AM.mask, t.BM.mask

    def quotient_in(xs, ys, mask):
        # x y^-1 in mask, as a (len(ys), len(xs)) boolean block
        return mask[G.mul(xs[None, :], G.inv(ys)[:, None])]

    inc[1:1 + n2, 1:1 + n2] = quotient_in(cA.reps, cB.reps, ab)
    inc[1 + n2:, 1:1 + n2] = quotient_in(cA.reps, cAM.reps, am)
    inc[1:1 + n2, 1 + n2:] = quotient_in(cBM.reps, cB.reps, bm)
    point_labels = [("inf",)] + [("A", int(r)) for r in cA.reps] + [("BM", int(r)) for r in cBM.reps]
    line_labels = [("Linf",)] + [("B", int(r)) for r in cB.reps] + [("AM", int(r)) for r in cAM.reps]
    plane = ProjectivePlane(inc, flag=True, point_labels=point_labels,
                            line_labels=line_labels, name=f"plane({t.name})", check=check)
    plane.meta.update(triple=t, cosets={"A": cA, "B": cB, "AM": cAM, "BM": cBM})
    return plane


def literal_incidence(t: SoftTriple) -> np.ndarray:
    """Incidence from literal coset intersections, for cross-checking.

    A coset pair meets iff some g lies in both, so the pairs
    ``(coset_of_g, coset_of_g)`` over all g list exactly the meeting pairs.
    """
    n = t.n
    n2 = n * n
    N = n2 + n + 1
    cA, cB = coset_system(t.A), coset_system(t.B)
    cAM, cBM = coset_system(t.AM), coset_system(t.BM)
    inc = np.zeros((N, N), dtype=bool)
    inc[0, 0] = True
    inc[0, 1 + n2:] = True
    inc[1 + n2:, 0] = True
    inc[1 + cB.index, 1 + cA.index] = True
    inc[1 + n2 + cAM.index, 1 + cA.index] = True
    inc[1 + cB.index, 1 + n2 + cBM.index] = True
    return inc


def containment_incidence(t: SoftTriple) -> np.ndarray:
    """Incidence from the containment rules Ax ⊂ AMy and By ⊂ BMx."""
    inc = literal_incidence(t)
    n2 = t.n * t.n
    cA, cAM = coset_system(t.A), coset_system(t.AM)
    cB, cBM = coset_system(t.B), coset_system(t.BM)
    # Ax ⊂ AMy iff every element of Ax lies in AMy: the AM-coset index is
    # constant on each A-coset
    block = np.zeros((len(cAM), len(cA)), dtype=bool)
    for i in range(len(cA)):
        idx = np.unique(cAM.index[cA.index == i])
        if len(idx) == 1:
            block[idx[0], i] = True
    inc[1 + n2:, 1:1 + n2] = block
    block = np.zeros((len(cB), len(cBM)), dtype=bool)
    for j in range(len(cB)):
        idx = np.unique(cBM.index[cB.index == j])
        if len(idx) == 1:
            block[j, idx[0]] = True
    inc[1:1 + n2, 1 + n2:] = block
    return inc


# -- collineations ------------------------------------------------------------

@dataclass
class Collineation:
    points: np.ndarray
    lines: np.ndarray

    def preserves(self, plane: ProjectivePlane) -> bool:
        return bool(np.array_equal(plane.inc[np.ix_(self.lines, self.points)], plane.inc))

    def is_identity(self) -> bool:
        return bool((self.points == np.arange(len(self.points))).all())

    def compose(self, other: "Collineation") -> "Collineation":
        """Apply self, then other."""
        return Collineation(other.points[self.points], other.lines[self.lines])


def lines_from_points(plane: ProjectivePlane, point_perms: np.ndarray) -> np.ndarray:
    """Line permutations induced by point permutations (rows)."""
    lp = plane.line_points
    return plane.join[point_perms[..., lp[:, 0]], point_perms[..., lp[:, 1]]]


class CollineationGroup:
    """A group carrier acting on a plane through point images.

    ``point_fn(ids)`` returns a ``(len(ids), points)`` array; line images are
    supplied by ``line_fn`` or derived from the point images.
    """

    def __init__(self, plane: ProjectivePlane, carrier: Group, point_fn, line_fn=None,
                 name: str = ""):
        self.plane = plane
        self.carrier = carrier
        self._point_fn = point_fn
        self._line_fn = line_fn
        self.name = name or carrier.name
        self._pp = self._lp = None
        self.meta: dict = {}

    @property
    def order(self) -> int:
        return self.carrier.order

    def __repr__(self):
        return f"<CollineationGroup {self.name} order={self.order} on {self.plane.name}>"

    def point_images(self, ids=None) -> np.ndarray:
        if ids is None:
            if self._pp is None:
                self._pp = self._all(self._point_fn, self.plane.n_points)
            return self._pp
        if self._pp is not None:
            return self._pp[np.asarray(ids)]
        return np.asarray(self._point_fn(np.atleast_1d(np.asarray(ids, dtype=np.int64))))

    def line_images(self, ids=None) -> np.ndarray:
        fn = self._line_fn or (lambda g: lines_from_points(self.plane, self.point_images(g)))
        if ids is None:
            if self._lp is None:
                self._lp = self._all(fn, self.plane.n_lines)
            return self._lp
        if self._lp is not None:
            return self._lp[np.asarray(ids)]
        return np.asarray(fn(np.atleast_1d(np.asarray(ids, dtype=np.int64))))

    def _all(self, fn, width) -> np.ndarray:
        if self.order * width > FULL_CACHE:
            raise BudgetExceeded(f"caching {self.order} x {width} images exceeds {FULL_CACHE}")
        G = self.carrier
        gens = np.array(G.generators, dtype=np.int64)
        out = np.empty((self.order, width), dtype=np.int32)
        if isinstance(G, PermutationCarrier) or len(gens) == 0:
            step = max(1, 2_000_000 // width)
            for a in range(0, self.order, step):
                b = min(self.order, a + step)
                out[a:b] = fn(np.arange(a, b, dtype=np.int64))
            return out
        # breadth-first over the Cayley graph: images of g·s are images of g
        # followed by those of s, so only the generators call ``fn``
        gen_img = np.asarray(fn(gens), dtype=np.int32)
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        out[0] = np.arange(width)
        frontier = np.array([0], dtype=np.int64)
        while len(frontier):
            nxt = []
            for j, s in enumerate(gens):
                prod = G.mul(frontier, s)
                new = ~seen[prod]
                prod, src = prod[new], frontier[new]
                prod, first = np.unique(prod, return_index=True)
                src = src[first]
                seen[prod] = True
                out[prod] = gen_img[j][out[src]]
                nxt.append(prod)
            frontier = np.concatenate(nxt)
        if not seen.all():
            raise VerificationFailure("generators do not generate the carrier")
        return out

    def element(self, g: int) -> Collineation:
        return Collineation(self.point_images([g])[0].astype(np.int64),
                            self.line_images([g])[0].astype(np.int64))

    @property
    def generators(self) -> list[Collineation]:
        return [self.element(g) for g in self.carrier.generators]

    def verify_generators(self):
        for g in self.carrier.generators:
            c = self.element(g)
            if not c.preserves(self.plane):
                raise VerificationFailure(f"element {g} does not preserve incidence", g)
            if not (_is_perm(c.points) and _is_perm(c.lines)):
                raise VerificationFailure(f"element {g} is not a permutation", g)

    def kernel(self) -> np.ndarray:
        pp = self.point_images()
        return np.flatnonzero((pp == np.arange(pp.shape[1])).all(axis=1))

    def stabilizer_of_point(self, p: int) -> np.ndarray:
        return np.flatnonzero(self.point_images()[:, p] == p)

    def stabilizer_of_line(self, L: int) -> np.ndarray:
        return np.flatnonzero(self.line_images()[:, L] == L)

    def flag_orbit(self, p: int, L: int) -> int:
        pairs = self.point_images()[:, p].astype(np.int64) * self.plane.n_lines + self.line_images()[:, L]
        return len(np.unique(pairs))

    def abstract(self, name: str = "") -> "CollineationGroup":
        """The same collineations as a bare permutation group on points."""
        pp = self.point_images()
        carrier = PermutationCarrier(pp, name=name or f"perm({self.name})")
        return permutation_action(self.plane, carrier, name=carrier.name)


def _is_perm(a: np.ndarray) -> bool:
    return bool(np.array_equal(np.sort(a), np.arange(len(a))))


def permutation_action(plane: ProjectivePlane, carrier: PermutationCarrier,
                       name: str = "") -> CollineationGroup:
    H = CollineationGroup(plane, carrier, lambda g: carrier.perms[g], name=name)
    H._pp = carrier.perms
    return H


def right_action(t: SoftTriple, plane: ProjectivePlane, check: bool = True) -> CollineationGroup:
    """Right multiplication ``coset -> coset·g`` on points and lines."""
    if plane.meta.get("triple") is not t:
        raise InputError("plane was not built from this triple")
    G, n = t.G, t.n
    n2 = n * n
    cos = plane.meta["cosets"]

    def images(first, second, g):
        g = np.asarray(g, dtype=np.int64)
        out = np.zeros((len(g), n2 + n + 1), dtype=np.int64)
        out[:, 1:1 + n2] = 1 + first.index[G.mul(first.reps[None, :], g[:, None])]
        out[:, 1 + n2:] = 1 + n2 + second.index[G.mul(second.reps[None, :], g[:, None])]
        return out

    H = CollineationGroup(plane, G, lambda g: images(cos["A"], cos["BM"], g),
                          lambda g: images(cos["B"], cos["AM"], g), name=f"right({G.name})")
    H.meta["triple"] = t
    if check:
        H.verify_generators()
        ker = H.kernel()
        if len(ker) != 1:
            raise VerificationFailure("action is not faithful", int(ker[1]))
        orbit = H.flag_orbit(1, 1)
        if orbit != n ** 3:
            raise VerificationFailure(f"flag (A, B) has orbit {orbit}, expected {n ** 3}")
        H.meta["flag_orbit"] = orbit
        pp, lp = H.point_images(), H.line_images()
        H.meta["flag_stabilizer"] = np.flatnonzero((pp[:, 1] == 1) & (lp[:, 1] == 1))
    return H


# -- reference planes ---------------------------------------------------------

def _normalized_vectors(F, first: bool):
    q = F.order
    out = []
    for v in itertools.product(range(q), repeat=3):
        nz = [c for c in v if c]
        if not nz:
            continue
        lead = nz[0] if first else nz[-1]
        if lead == 1:
            out.append(v)
    if first:
        out.sort()
    else:
        out.sort(key=lambda v: v[::-1])
    return np.array(out, dtype=np.int64)


def build_desarguesian(q: int) -> ProjectivePlane:
    """PG(2, q) with point (0,0,1) and line x = 0 as the distinguished flag."""
    if prime_power(q) is None:
        raise InputError(f"{q} is not a prime power")
    if q > 32:
        raise InputError("desarguesian reference planes are limited to q <= 32")
    F = field_of_order(q)
    P = _normalized_vectors(F, first=True)
    L = _normalized_vectors(F, first=False)
    dot = np.zeros((len(L), len(P)), dtype=np.int64)
    for i in range(3):
        dot = F.add(dot, F.mul(L[:, None, i], P[None, :, i]))
    plane = ProjectivePlane(dot == 0, flag=True, name=f"PG(2,{q})",
                            point_labels=[tuple(map(int, v)) for v in P],
                            line_labels=[tuple(map(int, v)) for v in L])
    plane.meta.update(field=F, point_vectors=P, line_vectors=L)
    return plane


def _normalize_rows(F, V):
    # scale each row so its first nonzero coordinate is 1
    lead = np.where(V[:, 0] != 0, V[:, 0], np.where(V[:, 1] != 0, V[:, 1], V[:, 2]))
    return F.mul(V, F.inv(lead)[:, None])


def projective_linear_group(plane: ProjectivePlane, budget: int = 20_000) -> CollineationGroup:
    """PGL(3, q) acting on ``build_desarguesian(q)`` (small q only)."""
    F = plane.meta.get("field")
    if F is None:
        raise InputError("plane was not built by build_desarguesian")
    q = F.order
    size = (q ** 3 - 1) * (q ** 3 - q) * (q ** 3 - q * q) // (q - 1)
    if size > budget:
        raise BudgetExceeded(f"|PGL(3,{q})| = {size} exceeds {budget}")
    P = plane.meta["point_vectors"]
    code = {tuple(v): i for i, v in enumerate(P.tolist())}
    seen, perms = set(), []
    for entries in itertools.product(range(q), repeat=9):
        X = np.array(entries, dtype=np.int64).reshape(3, 3)
        # row-vector convention v -> v X so products compose left to right
        img = np.zeros_like(P)
        for j in range(3):
            col = np.zeros(len(P), dtype=np.int64)
            for i in range(3):
                col = F.add(col, F.mul(P[:, i], X[i, j]))
            img[:, j] = col
        if (img == 0).all(axis=1).any():
            continue
        perm = tuple(code[tuple(v)] for v in _normalize_rows(F, img).tolist())
        if len(set(perm)) != len(P) or perm in seen:
            continue
        seen.add(perm)
        perms.append(perm)
    perms.sort(key=lambda p: p != tuple(range(len(P))))
    carrier = PermutationCarrier(np.array(perms), name=f"PGL(3,{q})")
    return permutation_action(plane, carrier, name=carrier.name)


# -- isomorphism --------------------------------------------------------------

def is_isomorphism(p1: ProjectivePlane, p2: ProjectivePlane, pmap, lmap) -> bool:
    pmap, lmap = np.asarray(pmap), np.asarray(lmap)
    if p1.inc.shape != p2.inc.shape or not (_is_perm(pmap) and _is_perm(lmap)):
        return False
    return bool(np.array_equal(p2.inc[np.ix_(lmap, pmap)], p1.inc))


def planes_isomorphic(p1: ProjectivePlane, p2: ProjectivePlane, pin_flag: bool = False,
                      node_budget: int = 200_000):
    """First isomorphism ``(point_map, line_map)`` found by backtracking, or None."""
    if p1.n != p2.n:
        return None
    if pin_flag and not (p1.flag and p2.flag):
        raise InputError("pinning needs distinguished flags on both planes")
    if not pin_flag and p1.n > ISO_GENERIC_MAX:
        raise InputError(f"generic isomorphism search is capped at order {ISO_GENERIC_MAX}")
    N = p1.n_points
    J1, J2, inc1, inc2 = p1.join, p2.join, p1.inc, p2.inc
    f = np.full(N, -1, dtype=np.int64)
    finv = np.full(N, -1, dtype=np.int64)
    g = np.full(N, -1, dtype=np.int64)
    ginv = np.full(N, -1, dtype=np.int64)
    nodes = 0

    def assign(p, pp):
        mapped = np.flatnonzero(f >= 0)
        Ls, Lps = J1[p, mapped].astype(np.int64), J2[pp, f[mapped]].astype(np.int64)
        if len(mapped):
            pairs = np.unique(Ls * N + Lps)
            if len(pairs) != len(np.unique(Ls)) or len(pairs) != len(np.unique(Lps)):
                return None
            Ls, Lps = pairs // N, pairs % N
            if np.any((g[Ls] >= 0) & (g[Ls] != Lps)) or np.any((ginv[Lps] >= 0) & (ginv[Lps] != Ls)):
                return None
        new = g[Ls] < 0
        g[Ls[new]] = Lps[new]
        ginv[Lps[new]] = Ls[new]
        f[p], finv[pp] = pp, p
        return Ls[new]

    def undo(p, lines):
        finv[f[p]] = -1
        f[p] = -1
        ginv[g[lines]] = -1
        g[lines] = -1

    def search() -> bool:
        nonlocal nodes
        free = np.flatnonzero(f < 0)
        if not len(free):
            return True
        mapped_lines = g >= 0
        counts = inc1[mapped_lines][:, free].sum(axis=0) if mapped_lines.any() else np.zeros(len(free))
        p = int(free[int(np.argmax(counts))])
        cand = finv < 0
        for L in p1.point_lines[p]:
            if g[L] >= 0:
                cand &= inc2[g[L]]
            else:
                # an unmapped line through p must not go to an already used line
                pass
        for pp in np.flatnonzero(cand):
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded(f"isomorphism search exceeded {node_budget} nodes")
            lines = assign(p, int(pp))
            if lines is None:
                continue
            if search():
                return True
            undo(p, lines)
        return False

    if pin_flag:
        assign(0, 0)
        g[0], ginv[0] = 0, 0
    if not search():
        return None
    if (g < 0).any():
        return None
    if not is_isomorphism(p1, p2, f, g):
        raise VerificationFailure("backtracking produced a non-isomorphism (library bug)")
    return f, g


# -- coordinates --------------------------------------------------------------

@dataclass
class TernaryRing:
    n: int
    T: np.ndarray                 # T[x, m, b]
    quadrilateral: tuple
    labels: np.ndarray            # point index of each label on the diagonal
    props: dict = field(default_factory=dict)

    @property
    def add(self) -> np.ndarray:
        return self.T[:, 1, :]

    @property
    def mul(self) -> np.ndarray:
        return self.T[:, :, 0]

    @property
    def kind(self) -> str:
        return self.props["kind"]


def default_quadrilateral(plane: ProjectivePlane):
    """(O, X, Y, E): flag-aligned for coset planes, else least admissible."""
    labels = plane.point_labels or []
    if plane.flag and labels and labels[0] == ("inf",):
        Y = 0
        X = next(i for i, lab in enumerate(labels) if lab[0] == "BM")
        O = next(i for i, lab in enumerate(labels) if lab[0] == "A")
    elif plane.flag:
        Y = 0
        X = int(plane.line_points[0][plane.line_points[0] != 0][0])
        O = int(np.flatnonzero(~plane.inc[0])[0])
    else:
        Y = 0
        L = int(plane.point_lines[0][0])
        X = int(plane.line_points[L][plane.line_points[L] != 0][0])
        O = int(np.flatnonzero(~plane.inc[L])[0])
    linf = plane.join[X, Y]
    off = ~plane.inc[linf] & ~plane.inc[plane.join[O, X]] & ~plane.inc[plane.join[O, Y]]
    E = int(np.flatnonzero(off)[0])
    return O, X, Y, E


def coordinatize_ptr(plane: ProjectivePlane, quadrilateral=None) -> TernaryRing:
    """Hall coordinates ``T(x, m, b)`` from a quadrilateral (O, X, Y, E).

    Line XY is at infinity, OE carries the labels (O = 0, E = 1), and
    ``T(x, m, b)`` is the y-coordinate where the line of slope m through
    (0, b) meets the vertical line through x.  When T is linear, ``T(x,1,b)``
    is addition and ``T(x,m,0)`` is multiplication x·m.
    """
    O, X, Y, E = quadrilateral if quadrilateral is not None else default_quadrilateral(plane)
    if len({O, X, Y, E}) < 4 or any(collinear_points(plane, c) for c in itertools.combinations((O, X, Y, E), 3)):
        raise InputError("quadrilateral has three collinear points")
    n, J, Mt, inc = plane.n, plane.join, plane.meet, plane.inc
    linf = J[X, Y]
    diag = J[O, E]
    on_diag = plane.line_points[diag]
    rest = [int(p) for p in on_diag if p not in (O, E) and not inc[linf, p]]
    labels = np.array([O, E] + rest, dtype=np.int64)
    if len(labels) != n:
        raise VerificationFailure("diagonal does not carry n affine points")
    label_of = np.full(plane.n_points, -1, dtype=np.int64)
    label_of[labels] = np.arange(n)
    # affine point (a, b): vertical through label a meets horizontal through label b
    vert = J[Y, labels]                # vertical line x = a
    horiz = J[X, labels]               # horizontal line y = b
    pt = Mt[vert[:, None], horiz[None, :]]          # pt[a, b]
    yc = label_of[Mt[J[pt, X], diag]]               # y(point) via horizontal
    # slope point (m) = (O, (1, m)) ∩ XY
    slope = Mt[J[O, pt[1, :]], linf]
    # line through (m) and (0, b); meet with vertical x
    lines_mb = J[slope[:, None], pt[0][None, :]]    # [m, b]
    T = np.empty((n, n, n), dtype=np.int64)
    for x in range(n):
        P = Mt[lines_mb, vert[x]]                    # [m, b]
        # y-coordinate of P: horizontal through P meets the diagonal
        T[x] = label_of[Mt[J[P, X], diag]]
    del yc
    ring = TernaryRing(n, T, (O, X, Y, E), labels)
    ring.props = classify_ptr(T)
    return ring


def classify_ptr(T: np.ndarray) -> dict:
    n = T.shape[0]
    e = np.arange(n)
    add, mul = T[:, 1, :], T[:, :, 0]
    linear = bool(np.array_equal(T, add[mul[:, :, None], e[None, None, :]]))
    add_assoc = bool(np.array_equal(add[add[:, :, None], e[None, None, :]],
                                    add[e[:, None, None], add[None, :, :]]))
    add_comm = bool(np.array_equal(add, add.T))
    # with T(x, m, b) = x·m + b:  (x + y)·m = x·m + y·m  and  x·(m + k) = x·m + x·k
    right_dist = bool(np.array_equal(mul[add[:, :, None], e[None, None, :]],
                                     add[mul[:, None, :], mul[None, :, :]]))
    left_dist = bool(np.array_equal(mul[e[:, None, None], add[None, :, :]],
                                    add[mul[:, :, None], mul[:, None, :]]))
    nz = e[1:]
    mul_assoc = bool(np.array_equal(mul[mul[:, :, None], e[None, None, :]],
                                    mul[e[:, None, None], mul[None, :, :]]))
    mul_comm = bool(np.array_equal(mul, mul.T))
    del nz
    semifield = linear and add_assoc and right_dist and left_dist
    if semifield and mul_assoc and mul_comm:
        kind = "field"
    elif semifield:
        kind = "semifield"
    else:
        kind = "other"
    return dict(linear=linear, additive_group=add_assoc, additive_commutative=add_comm,
                right_distributive=right_dist, left_distributive=left_dist,
                mul_associative=mul_assoc, mul_commutative=mul_comm, kind=kind)


def is_desarguesian(plane: ProjectivePlane, quadrilateral=None) -> bool:
    return coordinatize_ptr(plane, quadrilateral).kind == "field"


# -- ideal line and point -----------------------------------------------------

def ideal_indices(plane: ProjectivePlane):
    """(line 𝔍 = AM, point 𝔦 = BM) of a coset plane."""
    n2 = plane.n ** 2
    return 1 + n2 + plane.meta["cosets"]["AM"].index[0], 1 + n2 + plane.meta["cosets"]["BM"].index[0]


def ideal_checks(t: SoftTriple, plane: ProjectivePlane, action: CollineationGroup) -> ConditionReport:
    rep = ConditionReport("ideal line and point")
    G, n = t.G, t.n
    n2 = n * n
    cA = plane.meta["cosets"]["A"]
    J_line, i_point = ideal_indices(plane)
    expected = {0} | {1 + int(c) for c in np.unique(cA.index[t.M.members])}
    got = set(map(int, plane.line_points[J_line]))
    rep.add("points of line AM = {Am} ∪ {∞}", got == expected,
            None if got == expected else sorted(got ^ expected))
    pp, lp = action.point_images(), action.line_images()
    stab_J = lp[:, J_line] == J_line
    stab_i = pp[:, i_point] == i_point
    rep.add("stabilizer of line AM is AM", bool(np.array_equal(stab_J, t.AM.mask)),
            _first_diff(stab_J, t.AM.mask))
    rep.add("stabilizer of point BM is BM", bool(np.array_equal(stab_i, t.BM.mask)),
            _first_diff(stab_i, t.BM.mask))
    rep.add("joint stabilizer is M", bool(np.array_equal(stab_J & stab_i, t.M.mask)),
            _first_diff(stab_J & stab_i, t.M.mask))
    orbit_pts = np.unique(pp[t.BM.members, 1])
    ok = np.array_equal(orbit_pts, np.arange(1, 1 + n2))
    rep.add("BM transitive on points off L∞", bool(ok), None if ok else len(orbit_pts))
    orbit_lines = np.unique(lp[t.AM.members, 1])
    ok = np.array_equal(orbit_lines, np.arange(1, 1 + n2))
    rep.add("AM transitive on lines off ∞", bool(ok), None if ok else len(orbit_lines))
    witness = None
    for m in t.M.members:
        q = 1 + int(cA.index[m])
        if q == 1:
            continue
        common = np.flatnonzero(plane.inc[:, 1] & plane.inc[:, q])
        if list(common) != [J_line]:
            witness = (int(m), common.tolist())
            break
    rep.add("A and Am (m ∈ M) lie only on line AM", witness is None, witness)
    return rep


def _first_diff(a, b):
    d = np.flatnonzero(np.asarray(a) != np.asarray(b))
    return None if not len(d) else int(d[0])
