"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction


class SingularMatrix(ArithmeticError):
    pass


def solve_exact(A, b) -> list[Fraction]:
    """Solve ``A x = b`` for square nonsingular ``A`` with Fraction entries."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix(f"no pivot in column {col}")
        M[col], M[pivot] = M[pivot], M[col]
        pr = M[col]
        inv = 1 / pr[col]
        for j in range(col, n + 1):
            pr[j] *= inv
        for r in range(n):
            if r == col or M[r][col] == 0:
                continue
            factor = M[r][col]
            row = M[r]
            for j in range(col, n + 1):
                if pr[j]:
                    row[j] -= factor * pr[j]
    return [M[i][n] for i in range(n)]
