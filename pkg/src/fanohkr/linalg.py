"""Exact linear algebra over the rationals and small integer-lattice helpers.

Everything here works on lists of lists of Python ints (or Fractions), so
results are exact. Matrix sizes in this package are small (at most a few
hundred rows), which keeps fraction-free elimination cheap.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.polys.domains import ZZ


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer (or Fraction) matrix given as rows."""
    mat = [_integral_row(r) for r in rows if any(r)]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        prow = mat[r]
        p = prow[col]
        for i in range(r + 1, len(mat)):
            row = mat[i]
            f = row[col]
            if f:
                new = [p * x - f * y for x, y in zip(row, prow)]
                g = 0
                for x in new:
                    if x:
                        g = gcd(g, x)
                        if g == 1:
                            break
                if g > 1:
                    new = [x // g for x in new]
                mat[i] = new
        r += 1
        if r == len(mat):
            break
    return r


def _integral_row(row: Sequence) -> list[int]:
    if all(isinstance(x, int) for x in row):
        return list(row)
    fr = [Fraction(x) for x in row]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    return [int(x * den) for x in fr]


def nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[list[Fraction]]:
    """Basis (as column vectors) of {x : A x = 0} over Q."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    basis = Matrix(rows).nullspace()
    return [[Fraction(int(v.p), int(v.q)) for v in b] for b in basis]


def solve_square(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction] | None:
    """Unique rational solution of a square system, or None if singular."""
    n = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [aug[i][n] for i in range(n)]


def smith(mat: Sequence[Sequence[int]]):
    """Smith decomposition ``S * A * T = D`` as plain nested int lists."""
    d, s, t = smith_normal_decomp(Matrix([[int(x) for x in row] for row in mat]), domain=ZZ)
    return _plain(d), _plain(s), _plain(t)


def _plain(m) -> list[list[int]]:
    return [[int(x) for x in row] for row in m.tolist()]


def inverse_unimodular(mat: Sequence[Sequence[int]]) -> list[list[int]]:
    inv = Matrix(mat).inv()
    out = [[int(x) for x in inv.row(i)] for i in range(inv.rows)]
    if any(x.q != 1 for x in inv):
        raise ValueError("matrix is not unimodular")
    return out


def det(mat: Sequence[Sequence[int]]) -> int:
    return int(Matrix(mat).det())


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def transpose(a: Sequence[Sequence[int]]) -> list[list[int]]:
    return [list(col) for col in zip(*a)]
