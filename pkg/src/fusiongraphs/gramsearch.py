"""Nonnegative integer factorizations ``M = A A^T`` up to column permutation.

Matrices are plain tuples of row tuples of Python ints.  Columns of every
returned factor are sorted lexicographically non-increasing; the search
enforces that order while it runs, so no two results differ by a column
permutation.
"""

from __future__ import annotations

from math import gcd, isqrt
from typing import Sequence

__all__ = [
    "IntMatrix",
    "as_matrix",
    "transpose",
    "matmul_t",
    "is_psd_exact",
    "gram_factorizations",
    "canonical_columns",
]

IntMatrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def transpose(A: IntMatrix, nrows: int | None = None) -> IntMatrix:
    if not A:
        return ()
    return tuple(zip(*A)) if A[0] else ()


def columns_of(A: IntMatrix) -> list[tuple[int, ...]]:
    return [tuple(col) for col in zip(*A)] if A and A[0] else []


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
    if not cols:
        return tuple(() for _ in range(nrows))
    return tuple(tuple(c[i] for c in cols) for i in range(nrows))


def matmul_t(A: IntMatrix) -> IntMatrix:
    """``A A^T``."""
    return tuple(tuple(sum(x * y for x, y in zip(ra, rb)) for rb in A) for ra in A)


def _check_symmetric(M: IntMatrix) -> None:
    n = len(M)
    for row in M:
        if len(row) != n:
            raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(i):
            if M[i][j] != M[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i}, {j})")


def _psd(rows: list[list[int]]) -> bool:
    # Fraction-free LDL^T: after pivoting on p > 0 the Schur complement is
    # scaled by p, which preserves the sign pattern of the remaining pivots.
    rows = [r[:] for r in rows]
    while rows:
        n = len(rows)
        k = max(range(n), key=lambda i: rows[i][i])
        p = rows[k][k]
        if p < 0:
            return False
        if p == 0:
            # zero diagonal forces a zero row in a PSD matrix
            return all(x == 0 for r in rows for x in r)
        pk = rows[k]
        rest = [i for i in range(n) if i != k]
        new = []
        for a in rest:
            ra, ca = rows[a], pk[a]
            new.append([p * ra[b] - ca * pk[b] for b in rest])
        g = 0
        for r in new:
            for x in r:
                g = gcd(g, x)
        if g > 1:
            new = [[x // g for x in r] for r in new]
        rows = new
    return True


def is_psd_exact(M: Sequence[Sequence[int]]) -> bool:
    """Exact positive-semidefiniteness of a symmetric integer matrix."""
    M = as_matrix(M)
    _check_symmetric(M)
    return _psd([list(r) for r in M])


def _cheap_feasible(R: list[list[int]], start: int) -> bool:
    n = len(R)
    for i in range(start, n):
        Ri = R[i]
        di = Ri[i]
        if di < 0:
            return False
        for j in range(start, i):
            x = Ri[j]
            if x < 0 or x * x > di * R[j][j]:
                return False
    return True


def gram_factorizations(M: Sequence[Sequence[int]], max_cols: int | None = None, *,
                        psd_prune: bool = True) -> list[IntMatrix]:
    """All nonnegative integer ``A`` with ``A A^T = M``, one per column-permutation class.

    ``max_cols`` defaults to ``trace(M)``; zero columns never appear.
    """
    M = as_matrix(M)
    _check_symmetric(M)
    n = len(M)
    if any(x < 0 for row in M for x in row):
        return []
    if max_cols is None:
        max_cols = sum(M[i][i] for i in range(n))
    if psd_prune and not _psd([list(r) for r in M]):
        return []

    results: list[tuple[tuple[int, ...], ...]] = []
    cols: list[tuple[int, ...]] = []

    def search(R: list[list[int]], prev: tuple[int, ...] | None) -> None:
        i0 = next((i for i in range(n) if R[i][i] > 0), None)
        if i0 is None:
            if all(x == 0 for r in R for x in r):
                results.append(tuple(cols))
            return
        if len(cols) >= max_cols:
            return
        # rows before i0 have zero residual, so every remaining column vanishes
        # there; descending order means the next column must touch row i0.
        tight = prev is not None and all(prev[i] == 0 for i in range(i0))
        c = [0] * n

        def build(i: int, tight: bool) -> None:
            if i == n:
                col = tuple(c)
                R2 = [[R[a][b] - col[a] * col[b] for b in range(n)] for a in range(n)]
                if not _cheap_feasible(R2, i0):
                    return
                if psd_prune and not _psd([row[i0:] for row in R2[i0:]]):
                    return
                cols.append(col)
                search(R2, col)
                cols.pop()
                return
            hi = isqrt(R[i][i])
            for j in range(i0, i):
                cj = c[j]
                if cj:
                    hi = min(hi, R[i][j] // cj)
            if tight:
                hi = min(hi, prev[i])
            lo = 1 if i == i0 else 0
            for v in range(hi, lo - 1, -1):
                c[i] = v
                build(i + 1, tight and v == prev[i])
            c[i] = 0

        build(i0, tight)

    search([list(r) for r in M], None)
    out = [from_columns(sol, n) for sol in results]
    out.sort(key=lambda A: columns_of(A), reverse=True)
    return out


def canonical_columns(A: Sequence[Sequence[int]]) -> IntMatrix:
    """Sort the columns of ``A`` lexicographically non-increasing."""
    A = as_matrix(A)
    cols = sorted(columns_of(A), reverse=True)
    return from_columns(cols, len(A))
