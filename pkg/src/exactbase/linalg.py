"""Small exact linear-algebra and seeding helpers."""
from __future__ import annotations

import hashlib
from math import gcd
from fractions import Fraction
from typing import Sequence


def subseed(seed: int, name: str) -> int:
    """Stable named sub-seed; independent of PYTHONHASHSEED."""
    digest = hashlib.sha256(f"{int(seed)}/{name}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank over the rationals by Gaussian elimination on Fractions."""
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        p = mat[rank][col]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col] / p
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def row_reduce(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Nonzero rows of the reduced row echelon form (full row rank result)."""
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return []
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        p = mat[rank][col]
        mat[rank] = [a / p for a in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return mat[:rank]


def fmt_fraction(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        raise ValueError("floating-point values are not accepted; use 'p/q' strings")
    return Fraction(str(s))


class IntegerEchelon:
    """Incremental exact rank of integer row vectors (fraction-free elimination)."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[tuple[int, list[int]]] = []  # (pivot column, row)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, row: Sequence[int]) -> bool:
        """Insert ``row``; True when it increased the rank."""
        v = [int(a) for a in row]
        for col, piv in self.rows:
            a = v[col]
            if a:
                p = piv[col]
                v = [p * x - a * y for x, y in zip(v, piv)]
                g = 0
                for x in v:
                    if x:
                        g = gcd(g, x)
                if g > 1:
                    v = [x // g for x in v]
        lead = next((i for i, a in enumerate(v) if a), None)
        if lead is None:
            return False
        self.rows.append((lead, v))
        return True


def integer_row(values: Sequence) -> list[int]:
    """Scale a rational row to a primitive integer row."""
    fr = [Fraction(v) for v in values]
    den = 1
    for f in fr:
        den = den * f.denominator // gcd(den, f.denominator)
    return [int(f * den) for f in fr]
