"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[Fraction]]


def solve(rows: Matrix, rhs: list[Fraction]) -> list[Fraction] | None:
    """One solution of rows * x = rhs, or None if inconsistent.

    Underdetermined systems get free variables set to zero.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for row, col in pivots:
        x[col] = a[row][n]
    return x


def in_span(vectors: list[list[Fraction]], target: list[Fraction]) -> list[Fraction] | None:
    """Coordinates of target in the span of the vectors, or None."""
    if not vectors:
        return None if any(v != 0 for v in target) else []
    dim = len(target)
    rows = [[Fraction(vec[i]) for vec in vectors] for i in range(dim)]
    return solve(rows, [Fraction(v) for v in target])


def rank(vectors: list[list[Fraction]]) -> int:
    if not vectors:
        return 0
    a = [[Fraction(v) for v in row] for row in vectors]
    m, n = len(a), len(a[0])
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return r
