
import pytest

from configlike.arrangements import (ArrangementError, SubspaceArrangement, admissible_partition_count,
                                     intersection_lattice, k_equal_arrangement, v1_arrangement)
from configlike.linalg import rank


def stirling2(n, k):
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def test_k_equal_shapes():
    assert k_equal_arrangement(3, 3).dimensions() == [1]
    assert k_equal_arrangement(4, 3).dimensions() == [2] * 4
    assert k_equal_arrangement(3, 2).dimensions() == [2] * 3


def test_v1_shapes():
    a = v1_arrangement(2, 3, 2)
    assert a.ambient == 6 and a.dimensions() == [3, 3, 3]
    assert v1_arrangement(2, 3, 3).dimensions() == [2]


@pytest.mark.parametrize("m,q,k", [(m, q, k) for m in (2, 3, 4) for q in range(2, 5)
                                   for k in range(2, q + 1) if m * q <= 16])
def test_v1_dimension_formula(m, q, k):
    arr = v1_arrangement(m, q, k)
    assert all(d == m + q - k for d in arr.dimensions())


def test_v1_ambient_limit():
    with pytest.raises(ArrangementError):
        v1_arrangement(3, 6, 3)


def test_rejects_duplicates_and_dependent_rows():
    with pytest.raises(ArrangementError):
        SubspaceArrangement.from_rows(3, [[[1, 0, 0]], [[2, 0, 0]]])
    with pytest.raises(ArrangementError):
        SubspaceArrangement.from_rows(3, [[[1, 0, 0], [2, 0, 0]]])


def test_lattice_sizes():
    assert len(intersection_lattice(k_equal_arrangement(3, 3))) == 2
    L = intersection_lattice(k_equal_arrangement(4, 3))
    assert len(L) == 6
    assert sorted(L.codims()) == [0, 2, 2, 2, 2, 3]
    assert len(intersection_lattice(k_equal_arrangement(4, 2))) == sum(stirling2(4, j) for j in range(5))


@pytest.mark.parametrize("q,k", [(q, k) for q in range(2, 7) for k in range(2, q + 1)])
def test_lattice_matches_partitions(q, k):
    assert len(intersection_lattice(k_equal_arrangement(q, k))) == admissible_partition_count(q, k)


def test_partition_count_independent_formula():
    # partitions of [q] with blocks of size 1 or >= k, by summing over the non-singleton part
    from math import comb

    def count(q, k):
        total = [1] + [0] * q
        for n in range(1, q + 1):
            total[n] = sum(comb(n - 1, s - 1) * total[n - s] for s in range(k, n + 1))
        return sum(comb(q, n) * total[n] for n in range(q + 1))

    for q in range(2, 8):
        for k in range(2, q + 1):
            assert admissible_partition_count(q, k) == count(q, k)


def test_lattice_is_intersection_closed():
    L = intersection_lattice(k_equal_arrangement(5, 3))
    keys = {tuple(map(tuple, e.equations)) for e in L.elements}
    from configlike.linalg import rref
    for a in L.elements:
        for b in L.elements:
            red, _ = rref(list(a.equations) + list(b.equations))
            assert tuple(map(tuple, red)) in keys


def test_order_matches_containment():
    L = intersection_lattice(v1_arrangement(2, 3, 2))
    for i, a in enumerate(L.elements):
        for j, b in enumerate(L.elements):
            contained = rank(list(a.equations) + list(b.equations)) == b.codim
            assert L.leq(i, j) == contained
