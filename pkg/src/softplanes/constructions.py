"""Explicit soft groups: Heisenberg groups, likeable groups, decorations.

All carriers are :class:`~softplanes.groups.StructuredGroup` instances whose
element codes are mixed-radix integers over coordinate tuples, with the
identity encoded as 0.  Each carrier exposes ``decode``/``encode`` and an
``entrywise`` hook used by :func:`extend_by_automorphism`.
"""
from __future__ import annotations

import numpy as np

from .algebra import (FieldAutomorphism, FiniteField, SemifieldTable, additive_map_table,
                      field_eval_f, field_of_order, prime_power)
from .errors import InputError, VerificationFailure
from .groups import StructuredGroup, Subgroup
from .soft import SoftTriple, verify_soft_triple


def _additive_basis(ring) -> list[int]:
    return [ring.p ** i for i in range(ring.m)]


def _subgroup(G, codes, gens) -> Subgroup:
    return Subgroup(G, G.mask(codes), gens=gens, verify=True)


# -- Heisenberg groups ----------------------------------------------------------

def heisenberg_group(ring) -> StructuredGroup:
    """Upper unitriangular 3x3 matrices over a field or semifield.

    The element ``(a, b, c)`` is the matrix with a at (1,2), b at (1,3) and
    c at (2,3); its code is ``a + q b + q^2 c`` and

        (a, b, c)(a', b', c') = (a + a', b + b' + a·c', c + c').

    Associativity needs only the two distributive laws of the ring, which
    :class:`SemifieldTable` verifies exhaustively when loaded.
    """
    q = ring.order

    def decode(x):
        x = np.asarray(x, dtype=np.int64)
        return x % q, (x // q) % q, x // (q * q)

    def encode(a, b, c):
        return a + q * b + q * q * c

    def mul(x, y):
        a, b, c = decode(x)
        a2, b2, c2 = decode(y)
        return encode(ring.add(a, a2), ring.add(ring.add(b, b2), ring.mul(a, c2)),
                      ring.add(c, c2))

    def inv(x):
        a, b, c = decode(x)
        return encode(ring.neg(a), ring.sub(ring.mul(a, c), b), ring.neg(c))

    basis = np.array(_additive_basis(ring))
    gens = list(basis) + list(q * q * basis)
    G = StructuredGroup(q ** 3, mul, inv, name=f"Heis({ring!r})", gens=gens)
    G.decode, G.encode, G.ring = decode, encode, ring

    def entrywise(x, phi):
        return encode(*(phi(c) for c in decode(x)))

    G.entrywise = entrywise
    return G


def heisenberg(ring) -> SoftTriple:
    """Soft triple A = (*,0,0), M = (0,*,0), B = (0,0,*) in the Heisenberg group."""
    if isinstance(ring, int):
        ring = field_of_order(ring)
    q = ring.order
    if q < 2:
        raise InputError("ring must have at least 2 elements")
    G = heisenberg_group(ring)
    e = ring.elements
    basis = np.array(_additive_basis(ring))
    A = _subgroup(G, e, basis)
    M = _subgroup(G, q * e, q * basis)
    B = _subgroup(G, q * q * e, q * q * basis)
    kind = "field" if isinstance(ring, FiniteField) else "semifield"
    return verify_soft_triple(G, A, B, M, name=f"heisenberg({ring!r})",
                              meta={"construction": "heisenberg", "ring": ring, "kind": kind})


# -- likeable groups ------------------------------------------------------------

class _LikeableAction:
    """The maps ``v -> v^a`` on F^4 for ``a = A(t, u)``.

    With ``[a, v] = a^-1 v^-1 a v`` and conjugation ``v^a = a^-1 v a`` one has
    ``v^a = v - [a, v]``; the commutator formula then gives

        (x, y, z, w)^A(t,u) = (x, y + xt, z + xu + yt, w + x f(t,u) + yu + zt).

    ``sign=-1`` selects the opposite convention ``v + [a, v]`` and exists so
    that tests can confirm that it does not close up into a group.
    """

    def __init__(self, F: FiniteField, l, sign: int = 1):
        self.F = F
        q = F.order
        self.q = q
        labels = np.arange(q * q)
        self.t = labels % q
        self.u = labels // q
        self.f = field_eval_f(F, self.t, self.u, l)
        self.sign = sign

    def _delta(self, lab, x, y, z):
        F = self.F
        t, u, f = self.t[lab], self.u[lab], self.f[lab]
        d = (np.zeros_like(x), F.mul(x, t), F.add(F.mul(x, u), F.mul(y, t)),
             F.add(F.add(F.mul(x, f), F.mul(y, u)), F.mul(z, t)))
        return d if self.sign == 1 else tuple(F.neg(c) for c in d)

    def apply(self, lab, x, y, z, w):
        F = self.F
        d = self._delta(lab, x, y, z)
        return x, F.add(y, d[1]), F.add(z, d[2]), F.add(w, d[3])

    def matrices(self) -> np.ndarray:
        """Images of the standard basis: shape (q^2, 4 basis vectors, 4 coords)."""
        labs = np.arange(self.q * self.q)
        out = np.zeros((len(labs), 4, 4), dtype=np.int64)
        for j in range(4):
            v = [np.zeros(len(labs), dtype=np.int64) for _ in range(4)]
            v[j] = np.ones(len(labs), dtype=np.int64)
            out[:, j, :] = np.stack(self.apply(labs, *v), axis=1)
        return out

    def law(self) -> np.ndarray:
        """Label of the composite ``v -> (v^a)^b``; raises if not closed."""
        F, q = self.F, self.q
        mats = self.matrices()
        n = q * q
        # image of basis vector j under a then b, for every pair (a, b)
        a_idx = np.repeat(np.arange(n), n)
        b_idx = np.tile(np.arange(n), n)
        comp = np.zeros((n * n, 4, 4), dtype=np.int64)
        for j in range(4):
            img = mats[a_idx, j, :]
            comp[:, j, :] = np.stack(self.apply(b_idx, *img.T), axis=1)
        # (1,0,0,0) goes to (1, t, u, f): read the label off coordinates 1, 2
        lab = comp[:, 0, 1] + q * comp[:, 0, 2]
        if not np.array_equal(comp, mats[lab]):
            bad = int(np.flatnonzero((comp != mats[lab]).any(axis=(1, 2)))[0])
            raise VerificationFailure(
                "the maps v -> v^a are not closed under composition "
                "(wrong commutator convention?)", (int(a_idx[bad]), int(b_idx[bad])))
        return lab.reshape(n, n)


def likeable_group(q: int, l=None, sign: int = 1, allow_any_q: bool = False) -> StructuredGroup:
    pp = prime_power(q)
    if pp is None:
        raise InputError(f"{q} is not a prime power")
    if q % 2 == 0 or q <= 2:
        raise InputError("likeable groups need an odd q > 2")
    if q % 3 != 2 and not allow_any_q:
        raise InputError(f"q={q} is not 2 mod 3 (pass allow_any_q to override)")
    F = field_of_order(q)
    if l is not None:
        l = additive_map_table(F, l)
    act = _LikeableAction(F, l, sign)
    law = act.law()
    nA = q * q
    nV = q ** 4
    # A must be elementary abelian of order q^2 under the induced law
    e = np.arange(nA)
    if not np.array_equal(law, law.T):
        raise VerificationFailure("induced law on A is not commutative")
    if not np.array_equal(law[law[e[:, None, None], e[None, :, None]], e[None, None, :]],
                          law[e[:, None, None], law[e[None, :, None], e[None, None, :]]]):
        raise VerificationFailure("induced law on A is not associative")
    if not (law[0] == e).all():
        raise VerificationFailure("A(0,0) is not the identity map")
    inv_lab = np.argmax(law == 0, axis=1)
    powers = e.copy()
    for _ in range(F.p - 1):
        powers = law[powers, e]
    if not (powers == 0).all():
        raise VerificationFailure("A is not elementary abelian")

    def decode_v(v):
        return v % q, (v // q) % q, (v // q ** 2) % q, v // q ** 3

    def encode_v(x, y, z, w):
        return x + q * y + q ** 2 * z + q ** 3 * w

    def decode(c):
        c = np.asarray(c, dtype=np.int64)
        lab, v = c % nA, c // nA
        x, y, z, w = decode_v(v)
        return act.t[lab], act.u[lab], x, y, z, w

    def encode(t, u, x, y, z, w):
        return (t + q * u) + nA * encode_v(x, y, z, w)

    def vadd(v1, v2):
        return encode_v(*(F.add(a, b) for a, b in zip(decode_v(v1), decode_v(v2))))

    def vneg(v):
        return encode_v(*(F.neg(a) for a in decode_v(v)))

    def mul(c1, c2):
        # (a v)(a' v') = a a' (v^a' + v')
        a1, v1 = c1 % nA, c1 // nA
        a2, v2 = c2 % nA, c2 // nA
        moved = encode_v(*act.apply(a2, *decode_v(v1)))
        return law[a1, a2] + nA * vadd(moved, v2)

    def inv(c):
        # (a v)^-1 = a^-1 ((-v)^(a^-1))
        a, v = c % nA, c // nA
        ai = inv_lab[a]
        return ai + nA * encode_v(*act.apply(ai, *decode_v(vneg(v))))

    gens = [int(encode(t, u, 0, 0, 0, 0)) for t, u in ((1, 0), (0, 1))]
    for k in range(F.m):
        gens += [int(nA * F.p ** k * q ** j) for j in range(4)]
    # tuples (t,u) may need more additive generators when q is not prime
    for k in range(1, F.m):
        gens += [int(encode(F.p ** k, 0, 0, 0, 0, 0)), int(encode(0, F.p ** k, 0, 0, 0, 0))]
    G = StructuredGroup(nA * nV, mul, inv, name=f"Likeable(q={q})", gens=gens)
    G.decode, G.encode, G.field, G.law, G.action = decode, encode, F, law, act

    def entrywise(c, phi):
        return encode(*(phi(x) for x in decode(c)))

    G.entrywise = entrywise
    return G


def likeable(q: int = 5, l=None, allow_any_q: bool = False) -> SoftTriple:
    """A = {A(t,u)}, B = (F,F,0,0), M = (0,0,F,F) inside A ⋉ F^4."""
    G = likeable_group(q, l, allow_any_q=allow_any_q)
    F = G.field
    nA = q * q
    e = F.elements
    basis = np.array(_additive_basis(F))
    t, u = np.meshgrid(e, e, indexing="ij")
    zero = np.zeros_like(t)
    A = Subgroup(G, G.mask(G.encode(t, u, zero, zero, zero, zero).ravel()), verify=True)
    B = _subgroup(G, G.encode(zero, zero, t, u, zero, zero).ravel(),
                  list(nA * basis) + list(nA * q * basis))
    M = _subgroup(G, G.encode(zero, zero, zero, zero, t, u).ravel(),
                  list(nA * q ** 2 * basis) + list(nA * q ** 3 * basis))
    return verify_soft_triple(G, A, B, M, name=f"likeable(q={q})",
                              meta={"construction": "likeable", "field": F, "q": q})


# -- decorations ----------------------------------------------------------------

def extend_by_automorphism(t: SoftTriple, alpha: FieldAutomorphism) -> SoftTriple:
    """``G<α>`` with α acting entrywise; A, B, M each pick up ``<α>``."""
    G = t.G
    if not hasattr(G, "entrywise"):
        raise InputError("base group has no entrywise field action")
    F = t.meta.get("ring") if t.meta.get("construction") == "heisenberg" else t.meta.get("field")
    if not isinstance(F, FiniteField):
        raise InputError("decoration needs a base triple over a field")
    if alpha.field.order != F.order or alpha.field.modulus != F.modulus:
        raise InputError("automorphism belongs to a different field")
    e = alpha.order
    if e == 1:
        raise InputError("automorphism is trivial: no nontrivial decoration")
    N = G.order
    phis = [alpha.power(i) for i in range(e)]
    # images of every element under α^i, precomputed once
    images = np.stack([G.entrywise(G.elements, phi) for phi in phis])

    def mul(x, y):
        g1, i = x % N, x // N
        g2, j = y % N, y // N
        return G.mul(g1, images[i, g2]) + N * ((i + j) % e)

    def inv(x):
        g, i = x % N, x // N
        ii = (-i) % e
        return images[ii, G.inv(g)] + N * ii

    alpha_code = N
    gens = list(G.generators) + [alpha_code]
    Gt = StructuredGroup(N * e, mul, inv, name=f"{G.name}<{alpha!r}>", gens=gens)
    Gt.base, Gt.alpha = G, alpha

    def lift(S: Subgroup) -> Subgroup:
        codes = (S.members[None, :] + N * np.arange(e)[:, None]).ravel()
        return Subgroup(Gt, Gt.mask(codes), gens=list(S.gens) + [alpha_code], verify=True)

    meta = dict(t.meta)
    meta.update(decorated=True, alpha=alpha, base=t)
    for key in ("_AM", "_BM"):
        meta.pop(key, None)
    return verify_soft_triple(Gt, lift(t.A), lift(t.B), lift(t.M),
                              name=f"{t.name}<α^{alpha.exponent}>", meta=meta)


def frobenius(field: FiniteField, exponent: int = 1) -> FieldAutomorphism:
    return FieldAutomorphism(field, exponent)


def semifield_heisenberg(table: SemifieldTable) -> SoftTriple:
    return heisenberg(table)
