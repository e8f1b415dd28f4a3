"""Exact linear algebra over Q with ``Fraction`` entries."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fractions(m: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in m]


def rref(m: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    a = to_fractions(m)
    if not a:
        return a, []
    rows, cols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        if pv != 1:
            a[r] = [x / pv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of {x : m x = 0}, one vector per free column."""
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    a, pivots = rref(m)
    n = len(a[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][f]
        basis.append(v)
    return basis


def least_norm_solution(m: Sequence[Sequence], b: Sequence, ncols: int) -> list[Fraction] | None:
    """Minimum Euclidean-norm solution of m x = b, or None if inconsistent."""
    if not m:
        return [Fraction(0)] * ncols
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    # independent rows, then x = A^T (A A^T)^{-1} b restricted to them
    a = [row[:ncols] for row in red[: len(pivots)]]
    rhs = [row[ncols] for row in red[: len(pivots)]]
    if not a:
        return [Fraction(0)] * ncols
    gram = [[sum(x * y for x, y in zip(r1, r2)) for r2 in a] for r1 in a]
    y = solve_square(gram, rhs)
    return [sum(a[i][j] * y[i] for i in range(len(a))) for j in range(ncols)]


def solve_square(m: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    n = len(m)
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [red[i][n] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def transpose(a: Sequence[Sequence]):
    return [list(col) for col in zip(*a)]
