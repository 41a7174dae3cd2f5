"""Exact linear algebra over the rationals (dense, fraction-free scale)."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

Matrix = List[List[Fraction]]


class SingularMatrix(Exception):
    pass


def _copy(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return [[Fraction(x) for x in row] for row in a]


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction]:
    """Solve the square system a x = b exactly.  Raises SingularMatrix."""
    n = len(a)
    if n == 0:
        return []
    m = _copy(a)
    rhs = [Fraction(x) for x in b]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix(f"no pivot in column {col}")
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            rhs[col], rhs[pivot] = rhs[pivot], rhs[col]
        p = m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f == 0:
                continue
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
            rhs[r] -= f * rhs[col]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        s = rhs[r]
        for c in range(r + 1, n):
            s -= m[r][c] * x[c]
        x[r] = s / m[r][r]
    return x


def det(a: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction Gaussian elimination."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = _copy(a)
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f == 0:
                continue
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return result


def rank(a: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank via row echelon reduction."""
    if not a:
        return 0
    m = _copy(a)
    rows, cols = len(m), len(m[0])
    r = 0
    for col in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][col]
        for i in range(r + 1, rows):
            f = m[i][col] / p
            if f == 0:
                continue
            for c in range(col, cols):
                m[i][c] -= f * m[r][c]
        r += 1
        if r == rows:
            break
    return r


def is_integral(xs: Sequence[Fraction]) -> bool:
    return all(x.denominator == 1 for x in xs)


def nearest_integers(
    xs: Sequence[Fraction], eps: Fraction, ambiguity_factor: int = 10
) -> Optional[List[int]]:
    """Round each coordinate to the nearest integer within eps.

    Returns None if some coordinate is farther than eps from every integer.
    Raises ValueError if a distance falls in the band [eps, ambiguity_factor*eps),
    where rounding would be a silent misclassification.
    """
    out: List[int] = []
    far = False
    for x in xs:
        n = round(x)
        d = abs(x - n)
        if d < eps:
            out.append(int(n))
        elif d < ambiguity_factor * eps:
            raise ValueError("coordinate inside the ambiguity band around an integer")
        else:
            far = True
            out.append(int(n))
    return None if far else out
