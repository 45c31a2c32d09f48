"""Small exact linear algebra over cyclotomic fields.

Matrices are plain lists of rows of ``CycloNumber``.  Sizes in this package
stay in the low hundreds, so straightforward Gaussian elimination is enough.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .cyclotomic import CycloNumber, as_cyclo, embed_complex

Matrix = list[list[CycloNumber]]
Vector = list[CycloNumber]


def zeros(rows: int, cols: int, d: int = 1) -> Matrix:
    return [[CycloNumber.from_rational(0, d) for _ in range(cols)] for _ in range(rows)]


def identity(n: int, d: int = 1) -> Matrix:
    return [[CycloNumber.from_rational(int(i == j), d) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                x = a[i][t]
                if x.is_zero():
                    continue
                y = b[t][j]
                if y.is_zero():
                    continue
                acc = x * y if acc is None else acc + x * y
            row.append(acc if acc is not None else as_cyclo(0, a[i][0].d if a[i] else 1))
        out.append(row)
    return out


def matvec(a: Matrix, v: Sequence[CycloNumber]) -> Vector:
    return [sum((x * y for x, y in zip(row, v)), as_cyclo(0)) for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def conj(a: Matrix) -> Matrix:
    return [[x.conjugate() for x in row] for row in a]


def conj_transpose(a: Matrix) -> Matrix:
    return transpose(conj(a))


def scale(a: Matrix, s) -> Matrix:
    return [[x * s for x in row] for row in a]


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def neg(a: Matrix) -> Matrix:
    return [[-x for x in row] for row in a]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    if len(a) != len(b):
        return False
    return all(len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def is_identity(a: Matrix) -> bool:
    return mat_eq(a, identity(len(a)))


def mat_pow(a: Matrix, n: int) -> Matrix:
    if n < 0:
        return mat_pow(inverse(a), -n)
    result = identity(len(a))
    base = a
    while n:
        if n & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        n >>= 1
    return result


def to_numpy(a: Matrix) -> np.ndarray:
    return np.array([[embed_complex(x) for x in row] for row in a], dtype=complex)


def row_reduce(a: Matrix, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form restricted to the first ``ncols`` columns."""
    rows = [list(r) for r in a]
    if not rows:
        return rows, []
    ncols = len(rows[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv if not x.is_zero() else x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y if not y.is_zero() else x for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(a: Matrix) -> int:
    return len(row_reduce(a)[1])


def solve(a: Matrix, b: Sequence[CycloNumber]) -> Vector | None:
    """One solution x of a x = b (free variables zero), or None if inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = row_reduce(aug, n)
    for i in range(len(pivots), len(red)):
        if not red[i][n].is_zero():
            return None
    x = [as_cyclo(0) for _ in range(n)]
    for i, c in enumerate(pivots):
        x[c] = red[i][n]
    return x


def kernel(a: Matrix) -> list[Vector]:
    """Basis of the right kernel {x : a x = 0}."""
    n = len(a[0]) if a else 0
    red, pivots = row_reduce(a, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [as_cyclo(0) for _ in range(n)]
        x[f] = as_cyclo(1)
        for i, c in enumerate(pivots):
            x[c] = -red[i][f]
        basis.append(x)
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    red, pivots = row_reduce(aug, n)
    if len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def det(a: Matrix) -> CycloNumber:
    rows = [list(r) for r in a]
    n = len(rows)
    result = as_cyclo(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if not rows[i][c].is_zero()), None)
        if piv is None:
            return as_cyclo(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            result = -result
        p = rows[c][c]
        result = result * p
        inv = p.inverse()
        for i in range(c + 1, n):
            if not rows[i][c].is_zero():
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return result


def common_conductor(a: Matrix) -> int:
    import math

    d = 1
    for row in a:
        for x in row:
            d = d * x.d // math.gcd(d, x.d)
    return d


def promote_matrix(a: Matrix, d: int) -> Matrix:
    return [[x.promote(d) for x in row] for row in a]
