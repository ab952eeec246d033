"""Exact linear algebra over the rationals.

Rows are reduced with integer arithmetic and gcd normalization, which keeps
entries small for the 0/1 matrices that local polytopes produce.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Echelon",
    "affine_rank",
    "independent_rows",
    "integer_row",
    "inverse",
    "primitive",
    "rank",
]


def integer_row(values: Iterable) -> list[int]:
    """Scale a rational row by the lcm of its denominators."""
    fr = [Fraction(v) for v in values]
    den = 1
    for v in fr:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in fr]


def primitive(row: Sequence[int]) -> list[int]:
    """Divide an integer row by the gcd of its entries (no sign change)."""
    g = 0
    for v in row:
        g = math.gcd(g, v)
    if g in (0, 1):
        return list(row)
    return [v // g for v in row]


class Echelon:
    """Incrementally grown row echelon basis with integer rows."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, list[int]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Sequence) -> list[int]:
        r = primitive(integer_row(row))
        while True:
            lead = next((j for j, v in enumerate(r) if v), None)
            if lead is None or lead not in self.pivots:
                return r
            b = self.pivots[lead]
            bl, rl = b[lead], r[lead]
            r = primitive([bl * x - rl * y for x, y in zip(r, b)])

    def add(self, row: Sequence) -> bool:
        """Add ``row`` to the basis; return False if it is dependent."""
        r = self.reduce(row)
        lead = next((j for j, v in enumerate(r) if v), None)
        if lead is None:
            return False
        self.pivots[lead] = r
        return True


def independent_rows(rows: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal linearly independent subset, chosen greedily in order."""
    if not rows:
        return []
    ech = Echelon(len(rows[0]))
    return [i for i, row in enumerate(rows) if ech.add(row)]


def rank(rows: Sequence[Sequence]) -> int:
    return len(independent_rows(rows))


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of ``points``."""
    if not points:
        raise ValueError("affine_dim of an empty point set is undefined")
    base = [Fraction(v) for v in points[0]]
    diffs = [[Fraction(v) - b for v, b in zip(p, base)] for p in points[1:]]
    return rank(diffs) if diffs else 0


def inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse of a square rational matrix by Gauss-Jordan elimination."""
    n = len(matrix)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        if pv != 1:
            a[col] = [v / pv for v in a[col]]
        prow = a[col]
        nz = [j for j, v in enumerate(prow) if v]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                row = a[r]
                for j in nz:
                    row[j] -= f * prow[j]
    return [row[n:] for row in a]


def pivot_columns(rows: Sequence[Sequence], prefer: Sequence[int] = ()) -> list[int]:
    """Columns forming a basis of the column space, trying ``prefer`` first."""
    if not rows:
        return []
    ncols = len(rows[0])
    order = list(prefer) + [j for j in range(ncols) if j not in set(prefer)]
    cols = [[row[j] for row in rows] for j in order]
    keep = independent_rows(cols)
    return sorted(order[i] for i in keep)
