"""Exact linear algebra over the rationals and over prime fields.

Everything here is deliberately small and dependency-free: matrices are lists
of rows, rational entries are :class:`fractions.Fraction`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

Row = List[Fraction]
Matrix = List[Row]


def as_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows: Sequence[Sequence[Fraction]]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        lead = mat[r][c]
        if lead != 1:
            mat[r] = [v / lead for v in mat[r]]
        prow = mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                factor = mat[i][c]
                mat[i] = [a - factor * b for a, b in zip(mat[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """Basis (as rows) of {v : rows @ v = 0}."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def row_space_key(rows: Sequence[Sequence[Fraction]]) -> Tuple[Tuple[Fraction, ...], ...]:
    """Canonical hashable key of a row space (its RREF)."""
    red, _ = rref(rows)
    return tuple(tuple(r) for r in red)


# -- prime fields -----------------------------------------------------------


def fp_rank(mat: Sequence[Sequence[int]], p: int) -> int:
    """Rank of a dense integer matrix over F_p by Gaussian elimination."""
    rows = [[v % p for v in row] for row in mat]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


SparseColumn = Dict[int, int]


def sparse_fp_rank(columns: Sequence[SparseColumn], p: int) -> int:
    """Rank over F_p of a matrix given as sparse columns ``{row: value}``.

    Standard column reduction with a pivot table keyed on the lowest row.
    For p == 2 the columns are packed into Python ints and reduced by XOR.
    """
    if p == 2:
        return _rank_gf2([sum(1 << r for r, v in col.items() if v % 2) for col in columns])
    pivots: Dict[int, Dict[int, int]] = {}
    rk = 0
    for col in columns:
        work = {r: v % p for r, v in col.items() if v % p}
        while work:
            low = max(work)
            other = pivots.get(low)
            if other is None:
                inv = pow(work[low], p - 2, p)
                pivots[low] = {r: (v * inv) % p for r, v in work.items()}
                rk += 1
                break
            f = work[low]
            for r, v in other.items():
                nv = (work.get(r, 0) - f * v) % p
                if nv:
                    work[r] = nv
                else:
                    work.pop(r, None)
    return rk


def _rank_gf2(columns: Sequence[int]) -> int:
    pivots: Dict[int, int] = {}
    rk = 0
    for col in columns:
        while col:
            low = col.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = col
                rk += 1
                break
            col ^= other
    return rk
