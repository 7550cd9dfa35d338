"""Exact dense linear algebra over any field with Python operator arithmetic.

Works for fractions.Fraction, coeffring.Cyc, and the small finite-field
wrappers; `zero` and `one` are exemplar elements of the field.  Sizes stay in
the dozens at desk scale, so plain Gaussian elimination is enough.
"""

from __future__ import annotations

from typing import Optional, Sequence


def rref(rows: list[list], zero, one) -> list[int]:
    """Reduce in place to reduced row echelon form; returns pivot columns."""
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != zero:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != zero:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(rows: Sequence[Sequence], zero, one) -> int:
    work = [list(r) for r in rows]
    return len(rref(work, zero, one))


def nullspace(rows: Sequence[Sequence], ncols: int, zero, one) -> list[list]:
    """Basis of the right kernel of the matrix given by `rows`."""
    work = [list(r) for r in rows]
    pivots = rref(work, zero, one)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for r, c in enumerate(pivots):
            vec[c] = zero - work[r][f]
        basis.append(vec)
    return basis


def solve_augmented(rows: Sequence[Sequence], zero, one) -> Optional[list]:
    """Solve A x = b for [A | b] rows; returns one solution or None."""
    work = [list(r) for r in rows]
    if not work:
        return []
    ncols = len(work[0]) - 1
    pivots = rref(work, zero, one)
    # inconsistent if a pivot lands in the b column
    if ncols in pivots:
        return None
    sol = [zero] * ncols
    for r, c in enumerate(pivots):
        sol[c] = work[r][ncols]
    return sol


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence], zero):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = zero
            for t in range(k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_identity(n: int, zero, one):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_inv(a: Sequence[Sequence], zero, one) -> Optional[list[list]]:
    n = len(a)
    work = [list(a[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    pivots = rref(work, zero, one)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in work]


def mat_scalar(a: Sequence[Sequence], s, zero):
    return [[s * x for x in row] for row in a]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_pow(a, n: int, zero, one):
    size = len(a)
    result = mat_identity(size, zero, one)
    base = [list(r) for r in a]
    while n:
        if n & 1:
            result = mat_mul(result, base, zero)
        base = mat_mul(base, base, zero)
        n >>= 1
    return result


def charpoly_berkowitz(a: Sequence[Sequence], zero, one) -> list:
    """Characteristic polynomial det(xI - A), ascending coefficients.

    Berkowitz's division-free algorithm; valid over any commutative ring.
    """
    n = len(a)
    if n == 0:
        return [one]
    dp = [one, zero - a[0][0]]  # descending coefficients
    for i in range(1, n):
        # principal (i+1)x(i+1) submatrix, partitioned [[M, c], [r, a_ii]]
        r = [a[i][j] for j in range(i)]
        c = [a[j][i] for j in range(i)]
        m = [[a[x][y] for y in range(i)] for x in range(i)]
        # Toeplitz column: [1, -a_ii, -(r c), -(r M c), ..., -(r M^(i-1) c)]
        q = [one, zero - a[i][i]]
        vec = c
        for _ in range(i):
            acc = zero
            for x in range(i):
                acc = acc + r[x] * vec[x]
            q.append(zero - acc)
            vec = [
                _dot(m[x], vec, zero)
                for x in range(i)
            ]
        new = []
        for t in range(i + 2):
            acc = zero
            for s in range(len(q)):
                if 0 <= t - s <= i:
                    acc = acc + q[s] * dp[t - s]
            new.append(acc)
        dp = new
    return list(reversed(dp))


def _dot(row, vec, zero):
    acc = zero
    for x, y in zip(row, vec):
        acc = acc + x * y
    return acc
