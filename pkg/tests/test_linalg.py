from fractions import Fraction

import numpy as np
from hypothesis import given, strategies as st

from configlike.linalg import fp_rank, nullspace, rank, rref, row_space_key, sparse_fp_rank


def test_fp_rank_examples():
    eye = [[int(i == j) for j in range(5)] for i in range(5)]
    assert fp_rank(eye, 3) == 5
    assert fp_rank([[0, 0], [0, 0]], 5) == 0
    assert fp_rank([[1, 1], [1, 1]], 2) == 1


def test_rank_depends_on_characteristic():
    m = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert fp_rank(m, 2) == 2
    assert fp_rank(m, 3) == 3


def test_rref_and_nullspace():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(7)]]
    red, piv = rref(rows)
    assert piv == [0, 2]
    ns = nullspace(rows, 3)
    assert len(ns) == 1
    for r in rows:
        assert sum(a * b for a, b in zip(r, ns[0])) == 0


matrices = st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=5)


@given(matrices)
def test_rational_rank_matches_numpy(m):
    assert rank([[Fraction(v) for v in r] for r in m]) == np.linalg.matrix_rank(np.array(m, float))


@given(matrices, st.sampled_from([2, 3, 5, 7]))
def test_sparse_matches_dense(m, p):
    dense = [[v % p for v in r] for r in m]
    cols = [{i: dense[i][j] for i in range(len(dense)) if dense[i][j]} for j in range(4)]
    assert sparse_fp_rank(cols, p) == fp_rank(dense, p)


@given(matrices)
def test_row_space_key_ignores_row_operations(m):
    rows = [[Fraction(v) for v in r] for r in m]
    mixed = [list(r) for r in rows]
    if len(mixed) > 1:
        mixed[0] = [a + 3 * b for a, b in zip(mixed[0], mixed[1])]
    mixed.reverse()
    assert row_space_key(rows) == row_space_key(mixed)
