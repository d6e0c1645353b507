"""Generate the order-16 proper semifield table shipped as data/semifield16.sf.

Multiplication is x*y = L_x y for 4x4 matrices over GF(2) with
L_x = c0 I + c1 X1 + c2 X2 + c3 X3 (x has bits c0..c3).  The first column of
X_i is e_i, so element 1 is a two-sided identity.  Backtracking picks
X1, X2, X3 in increasing order of their bit encodings until every nonzero
L_x is invertible and the product is not associative.
"""
import itertools
import sys

import numpy as np


def matrix(first_col: int, rest: int) -> np.ndarray:
    m = np.zeros((4, 4), dtype=np.uint8)
    m[first_col, 0] = 1
    for j in range(1, 4):
        for i in range(4):
            m[i, j] = (rest >> (4 * (j - 1) + i)) & 1
    return m


def invertible(m: np.ndarray) -> bool:
    a = m.copy()
    row = 0
    for col in range(4):
        piv = next((r for r in range(row, 4) if a[r, col]), None)
        if piv is None:
            return False
        a[[row, piv]] = a[[piv, row]]
        for r in range(4):
            if r != row and a[r, col]:
                a[r] ^= a[row]
        row += 1
    return True


def table_from(mats) -> np.ndarray:
    L = []
    for x in range(16):
        m = np.zeros((4, 4), dtype=np.uint8)
        for i in range(4):
            if (x >> i) & 1:
                m ^= mats[i]
        L.append(m)
    T = np.zeros((16, 16), dtype=np.int64)
    for x in range(16):
        for y in range(16):
            v = np.array([(y >> i) & 1 for i in range(4)], dtype=np.uint8)
            w = (L[x].astype(int) @ v) % 2
            T[x, y] = sum(int(b) << i for i, b in enumerate(w))
    return T


def associative(T) -> bool:
    e = np.arange(16)
    return np.array_equal(T[T[:, :, None], e[None, None, :]], T[e[:, None, None], T[None, :, :]])


def search():
    I = np.eye(4, dtype=np.uint8)
    choices = [[matrix(i, r) for r in range(1 << 12)] for i in (1, 2, 3)]

    def ok(mats):
        for coeffs in itertools.product((0, 1), repeat=len(mats)):
            if not any(coeffs):
                continue
            m = np.zeros((4, 4), dtype=np.uint8)
            for c, x in zip(coeffs, mats):
                if c:
                    m ^= x
            if not invertible(m):
                return False
        return True

    def extend(mats):
        if len(mats) == 4:
            T = table_from(mats)
            return None if associative(T) else T
        for X in choices[len(mats) - 1]:
            if ok(mats + [X]):
                found = extend(mats + [X])
                if found is not None:
                    return found
        return None

    return extend([I])


def main(path):
    T = search()
    rows = ["SEMIFIELD 16 2 4"] + [" ".join(str(v) for v in row) for row in T]
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/softplanes/data/semifield16.sf")
