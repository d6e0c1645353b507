"""Finite fields GF(p^m), semifield tables and field automorphisms.

Elements of a ring of order ``q = p^m`` are the integers ``0..q-1``; the
integer ``c_0 + c_1 p + ... + c_{m-1} p^{m-1}`` stands for the polynomial
(or GF(p)-vector) with coefficients ``c_i``.  Every arithmetic method is
vectorized over numpy integer arrays, which is what the group constructors
rely on.
"""
from __future__ import annotations

import itertools
import math
from pathlib import Path

import numpy as np

from .errors import InputError, VerificationFailure

MAX_FIELD_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization, ``{prime: exponent}``."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, m)`` with ``n == p**m`` or None."""
    if n < 2:
        return None
    f = factorize(n)
    if len(f) != 1:
        return None
    (p, m), = f.items()
    return p, m


def p_part(n: int, p: int) -> int:
    """Largest power of ``p`` dividing ``n``."""
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


# -- polynomials over GF(p), coefficient lists low degree first ------------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    a = _poly_trim(a)
    b = _poly_trim(b)
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % p
        a = _poly_trim(a)
    return a


def _monic_polys(p, degree):
    for low in itertools.product(range(p), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _poly_trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for cand in _monic_polys(p, d):
            if not _poly_mod(poly, cand, p):
                return False
    return True


def least_irreducible(p: int, m: int) -> list[int]:
    """Least monic irreducible of degree ``m``.

    Candidates are ordered by the integer ``sum c_i p^i`` of their lower
    coefficients, the same encoding used for field elements.
    """
    for idx in range(p ** m):
        low = [(idx // p ** i) % p for i in range(m)]
        poly = low + [1]
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class _VectorAddition:
    """Addition of base-p digit vectors, shared by fields and semifields."""

    p: int
    m: int
    order: int

    def _init_digits(self):
        q = self.order
        self._weights = self.p ** np.arange(self.m, dtype=np.int64)
        self._digits = (np.arange(q, dtype=np.int64)[:, None] // self._weights) % self.p

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return ((self._digits[a] + self._digits[b]) % self.p) @ self._weights

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        if self.m == 1:
            return (-a) % self.p
        return ((-self._digits[a]) % self.p) @ self._weights

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scalar(self, c: int, a):
        """Multiply by the prime-field integer ``c``."""
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return (c * a) % self.p
        return ((c * self._digits[a]) % self.p) @ self._weights

    def digits(self, a):
        return self._digits[np.asarray(a, dtype=np.int64)]

    @property
    def elements(self):
        return np.arange(self.order, dtype=np.int64)


class FiniteField(_VectorAddition):
    """GF(p^m) with a fixed irreducible modulus."""

    def __init__(self, p: int, m: int = 1, modulus=None):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        if m < 1:
            raise InputError("extension degree must be >= 1")
        if p ** m > MAX_FIELD_ORDER:
            raise InputError(f"field order {p ** m} exceeds {MAX_FIELD_ORDER}")
        if modulus is None:
            modulus = least_irreducible(p, m)
        modulus = [int(c) % p for c in modulus]
        modulus = _poly_trim(modulus)
        if len(modulus) != m + 1:
            raise InputError(f"modulus must have degree {m}")
        if modulus[-1] != 1:
            inv = pow(modulus[-1], -1, p)
            modulus = [c * inv % p for c in modulus]
        if not is_irreducible(modulus, p):
            raise InputError(f"modulus {modulus} is reducible over GF({p})")
        self.p, self.m, self.order = p, m, p ** m
        self.modulus = tuple(modulus)
        self._init_digits()
        self._build_log_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    @property
    def characteristic(self):
        return self.p

    def _poly_mul_int(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da = [(a // p ** i) % p for i in range(m)]
        db = [(b // p ** i) % p for i in range(m)]
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        r = _poly_mod(prod, list(self.modulus), p) if any(prod) else []
        return sum(c * p ** i for i, c in enumerate(r))

    def _build_log_tables(self):
        q = self.order
        for g in range(1, q):
            exp = [1]
            x = self._poly_mul_int(1, g)
            while x != 1:
                exp.append(x)
                x = self._poly_mul_int(x, g)
            if len(exp) == q - 1:
                break
        self.primitive = g
        self._exp = np.array(exp + exp, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[np.array(exp)] = np.arange(q - 1)
        self._log = log

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no inverse")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        out = self._exp[(self._log[a] * e) % (self.order - 1)]
        return np.where(a == 0, 0, out)

    def from_int(self, c: int) -> int:
        """Image of the integer ``c`` in the prime subfield."""
        return c % self.p

    def mul_table(self):
        e = self.elements
        return self.mul(e[:, None], e[None, :])

    def automorphism(self, e: int) -> "FieldAutomorphism":
        return FieldAutomorphism(self, e)


def field_make(p: int, m: int = 1, modulus=None) -> FiniteField:
    return FiniteField(p, m, modulus)


def field_of_order(q: int) -> FiniteField:
    pp = prime_power(q)
    if pp is None:
        raise InputError(f"{q} is not a prime power")
    return FiniteField(*pp)


class FieldAutomorphism:
    """x -> x^(p^e) on a finite field."""

    def __init__(self, field: FiniteField, exponent: int):
        self.field = field
        self.exponent = exponent % field.m

    @property
    def order(self) -> int:
        m = self.field.m
        return m // math.gcd(self.exponent, m) if self.exponent else 1

    def __call__(self, x):
        return self.field.power(x, self.field.p ** self.exponent)

    def power(self, i: int) -> "FieldAutomorphism":
        return FieldAutomorphism(self.field, self.exponent * i)

    def __repr__(self):
        return f"Frobenius^{self.exponent} on {self.field!r}"


def additive_map_table(ring, table) -> np.ndarray:
    """Validate that ``table`` (q entries) is additive on ``ring``."""
    table = np.asarray(table, dtype=np.int64)
    q = ring.order
    if table.shape != (q,) or table.min() < 0 or table.max() >= q:
        raise InputError("additive map must list q element indices")
    e = ring.elements
    lhs = table[ring.add(e[:, None], e[None, :])]
    rhs = ring.add(table[e][:, None], table[e][None, :])
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        a, b = map(int, bad[0])
        raise VerificationFailure(f"map is not additive at ({a}, {b})", (a, b))
    return table


def field_eval_f(field: FiniteField, t, u, l=None):
    """``t*u - t^3/3 + l(t)``; ``l`` is an additive table, zero by default."""
    if field.p == 3:
        raise InputError("1/3 does not exist in characteristic 3")
    third = field.inv(field.from_int(3))
    t = np.asarray(t, dtype=np.int64)
    u = np.asarray(u, dtype=np.int64)
    val = field.sub(field.mul(t, u), field.mul(third, field.power(t, 3)))
    if l is not None:
        val = field.add(val, np.asarray(l, dtype=np.int64)[t])
    return val


class SemifieldTable(_VectorAddition):
    """A finite semifield given by its multiplication table.

    Addition is GF(p)-vector addition on the base-p digits of the indices;
    0 is the zero and 1 the multiplicative identity.
    """

    def __init__(self, p: int, m: int, table, check: bool = True):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        self.p, self.m, self.order = p, m, p ** m
        table = np.asarray(table, dtype=np.int64)
        q = self.order
        if table.shape != (q, q):
            raise InputError(f"multiplication table must be {q}x{q}")
        if table.min() < 0 or table.max() >= q:
            raise InputError("table entries out of range")
        self.table = table
        self._init_digits()
        if check:
            self._verify()
        e = self.elements
        a, b, c = e[:, None, None], e[None, :, None], e[None, None, :]
        self.is_associative = bool(np.all(
            table[table[a, b], c] == table[a, table[b, c]]))
        self.is_commutative = bool(np.all(table == table.T))

    def __repr__(self):
        kind = "field-like" if self.is_associative else "proper"
        return f"SemifieldTable(order={self.order}, {kind})"

    def mul(self, a, b):
        return self.table[np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)]

    def _verify(self):
        q = self.order
        t = self.table
        e = self.elements
        if not (np.array_equal(t[1], e) and np.array_equal(t[:, 1], e)):
            bad = int(np.flatnonzero((t[1] != e) | (t[:, 1] != e))[0])
            raise VerificationFailure(f"1 is not a two-sided identity (element {bad})", (1, bad))
        a, b, c = e[:, None, None], e[None, :, None], e[None, None, :]
        left = t[a, self.add(b, c)] != self.add(t[a, b], t[a, c])
        if left.any():
            w = tuple(int(v) for v in np.argwhere(left)[0])
            raise VerificationFailure(f"left distributive law fails at {w}", w)
        right = t[self.add(a, b), c] != self.add(t[a, c], t[b, c])
        if right.any():
            w = tuple(int(v) for v in np.argwhere(right)[0])
            raise VerificationFailure(f"right distributive law fails at {w}", w)
        zero = (t[1:, 1:] == 0)
        if zero.any():
            x, y = (int(v) + 1 for v in np.argwhere(zero)[0])
            raise VerificationFailure(f"zero divisor pair ({x}, {y})", (x, y))

    @classmethod
    def from_field(cls, field: FiniteField) -> "SemifieldTable":
        return cls(field.p, field.m, field.mul_table())

    def dumps(self) -> str:
        lines = [f"SEMIFIELD {self.order} {self.p} {self.m}"]
        lines += [" ".join(str(int(v)) for v in row) for row in self.table]
        return "\n".join(lines) + "\n"


def semifield_load(path) -> SemifieldTable:
    text = Path(path).read_text()
    return semifield_loads(text)


def semifield_loads(text: str) -> SemifieldTable:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or rows[0][0] != "SEMIFIELD" or len(rows[0]) != 4:
        raise InputError("semifield file must start with 'SEMIFIELD q p m'")
    try:
        q, p, m = (int(v) for v in rows[0][1:])
        table = [[int(v) for v in r] for r in rows[1:]]
    except ValueError as exc:
        raise InputError(f"non-integer entry in semifield file: {exc}") from None
    if p ** m != q:
        raise InputError(f"header inconsistent: {p}^{m} != {q}")
    if len(table) != q or any(len(r) != q for r in table):
        raise InputError(f"expected {q} rows of {q} entries")
    return SemifieldTable(p, m, table)
