"""Diagonals, configuration-like spaces and their classification maps.

All predicates are exact on rational tuples. On float tuples two coordinate
vectors coincide when their max-norm distance is at most ``eps`` and the
coincidence pattern is the transitive closure of that relation.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from .groups import GroupSubset, GroupTable, OrbitTuple, act_on_tuple

DEFAULT_EPS = 1e-9
# floor of the ambiguity band, in units of machine epsilon times the tuple scale
ROUNDOFF_ULPS = 64


class AmbiguousPattern(ValueError):
    """Two float clusters are closer than the safety margin but farther than eps."""


class NotInW(ValueError):
    """The maximum is attained at least k times."""


class KTooSmall(ValueError):
    pass


class NotInStratum(ValueError):
    pass


@dataclass(frozen=True)
class CoincidencePattern:
    blocks: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, blocks) -> "CoincidencePattern":
        canon = sorted(tuple(sorted(b)) for b in blocks if b)
        return cls(tuple(canon))

    def __len__(self):
        return len(self.blocks)

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    def largest_block(self) -> int:
        return max(len(b) for b in self.blocks)

    def act(self, group: GroupTable, g: int) -> "CoincidencePattern":
        row = group.mult[g]
        return CoincidencePattern.from_blocks([[row[i] for i in b] for b in self.blocks])


@dataclass(frozen=True)
class TopBlockResult:
    m: int
    M: GroupSubset


def _check_k(phi: OrbitTuple, k: int):
    if not 2 <= k <= phi.q:
        raise ValueError(f"k must lie in 2..{phi.q}, got {k}")


def _distance(a, b) -> float:
    return max(abs(x - y) for x, y in zip(a, b))


def coincidence_pattern(phi: OrbitTuple, eps: float = DEFAULT_EPS) -> CoincidencePattern:
    """Equality classes of the coordinates of ``phi``."""
    if phi.exact:
        classes: Dict[tuple, List[int]] = {}
        for i, v in enumerate(phi.values):
            classes.setdefault(v, []).append(i)
        return CoincidencePattern.from_blocks(classes.values())

    q = phi.q
    parent = list(range(q))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    dist = [[_distance(phi.values[i], phi.values[j]) for j in range(q)] for i in range(q)]
    for i in range(q):
        for j in range(i + 1, q):
            if dist[i][j] <= eps:
                parent[find(i)] = find(j)
    scale = max((abs(c) for v in phi.values for c in v), default=0.0)
    upper = max(10 * eps, ROUNDOFF_ULPS * np.finfo(float).eps * max(scale, 1.0))
    for i in range(q):
        for j in range(i + 1, q):
            if find(i) != find(j) and eps < dist[i][j] <= upper:
                raise AmbiguousPattern(
                    f"coordinates {i} and {j} are {dist[i][j]:.3g} apart, inside ({eps:.3g}, {upper:.3g}]")
    groups: Dict[int, List[int]] = {}
    for i in range(q):
        groups.setdefault(find(i), []).append(i)
    return CoincidencePattern.from_blocks(groups.values())


def distinct_count(phi: OrbitTuple, eps: float = DEFAULT_EPS) -> int:
    return len(coincidence_pattern(phi, eps))


def in_U(phi: OrbitTuple, l: int, eps: float = DEFAULT_EPS) -> bool:
    """Membership in U(Y, q, l): at least l distinct coordinate values."""
    return distinct_count(phi, eps) >= l


def in_kwise_diagonal(phi: OrbitTuple, k: int, eps: float = DEFAULT_EPS) -> bool:
    """Some k coordinates coincide."""
    _check_k(phi, k)
    return coincidence_pattern(phi, eps).largest_block() >= k


def _max_multiplicity(vals, exact: bool, eps: float) -> Tuple[int, List[int]]:
    top = max(vals)
    if exact:
        idx = [i for i, v in enumerate(vals) if v == top]
    else:
        idx = [i for i, v in enumerate(vals) if top - v <= eps]
    return len(idx), idx


def in_max_diagonal(phi: OrbitTuple, k: int, eps: float = DEFAULT_EPS) -> bool:
    """The maximum of a scalar tuple is attained at k or more coordinates."""
    if phi.dim != 1:
        raise ValueError("the maximum diagonal is defined for scalar tuples only")
    _check_k(phi, k)
    return _max_multiplicity(phi.scalars(), phi.exact, eps)[0] >= k


def in_U_M(phi: OrbitTuple, M: GroupSubset) -> bool:
    """phi(g) > phi(h) for all g in M and h outside M (strict)."""
    vals = phi.scalars()
    inside = [vals[g] for g in M.members]
    outside = [vals[h] for h in range(phi.q) if h not in M.members]
    if not inside or not outside:
        return False
    return min(inside) > max(outside)


def top_block_classify(phi: OrbitTuple, k: int, eps: float = DEFAULT_EPS) -> TopBlockResult:
    """Place a point of W(q, k) in V_m with minimal m and return its top block M."""
    if phi.dim != 1:
        raise ValueError("classification needs a scalar tuple")
    _check_k(phi, k)
    m, idx = _max_multiplicity(phi.scalars(), phi.exact, eps)
    if m >= k:
        raise NotInW(f"maximum attained {m} >= {k} times")
    M = GroupSubset(phi.group, frozenset(idx))
    if phi.exact:
        assert in_U_M(phi, M)
    return TopBlockResult(m, M)


def majority_block(phi: OrbitTuple, k: int, eps: float = DEFAULT_EPS) -> GroupSubset:
    """The unique k-element set of coinciding coordinates, for k > q/2."""
    if 2 * k <= phi.q:
        raise KTooSmall(f"k={k} must exceed q/2 = {phi.q / 2}")
    pattern = coincidence_pattern(phi, eps)
    sizes = [len(b) for b in pattern.blocks]
    big = max(sizes)
    if big < k:
        raise NotInStratum(f"no {k}-fold coincidence")
    if big > k:
        raise NotInStratum(f"a {big}-fold coincidence exceeds k={k}")
    block = next(b for b in pattern.blocks if len(b) == k)
    return GroupSubset(phi.group, frozenset(block))


def k_block_partitions(p: int, k: int):
    """All partitions of range(p) into exactly k nonempty blocks."""

    def rec(i, blocks):
        if i == p:
            if len(blocks) == k:
                yield CoincidencePattern.from_blocks(blocks)
            return
        if len(blocks) + (p - i) < k:
            return
        for b in range(len(blocks)):
            blocks[b].append(i)
            yield from rec(i + 1, blocks)
            blocks[b].pop()
        if len(blocks) < k:
            blocks.append([i])
            yield from rec(i + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def pattern_action_fixed_points(group: GroupTable, k: int) -> List[CoincidencePattern]:
    """Patterns with exactly k blocks that every group element fixes."""
    fixed = []
    for pat in k_block_partitions(group.order, k):
        if all(pat.act(group, g) == pat for g in group.elements):
            fixed.append(pat)
    return fixed


# -- the orbit map ----------------------------------------------------------


def hat_map(f: Callable, action, x, scalar_kind: str = "float") -> OrbitTuple:
    """Tuple whose entry at g is f(g^-1 x).

    ``action`` is anything with ``group`` and ``apply(g, x)``; ``f`` returns a
    scalar or a sequence.
    """
    G = action.group
    rows = []
    for g in G.elements:
        val = f(action.apply(G.inv(g), x))
        if np.ndim(val) == 0:
            val = (val,)
        rows.append(tuple(val) if scalar_kind == "rational" else tuple(float(c) for c in val))
    return OrbitTuple(G, tuple(rows), scalar_kind)


def in_A(f: Callable, action, x, k: int, scalar_kind="float", eps=DEFAULT_EPS) -> bool:
    return in_kwise_diagonal(hat_map(f, action, x, scalar_kind), k, eps)


def in_A_prime(f: Callable, action, x, k: int, scalar_kind="float", eps=DEFAULT_EPS) -> bool:
    return in_max_diagonal(hat_map(f, action, x, scalar_kind), k, eps)


# -- batch cover verification ---------------------------------------------


def subset_masks(q: int, m: int) -> np.ndarray:
    """Boolean matrix whose rows are the indicator vectors of all m-subsets of range(q)."""
    rows = []
    for S in combinations(range(q), m):
        r = np.zeros(q, dtype=bool)
        r[list(S)] = True
        rows.append(r)
    return np.array(rows, dtype=bool).reshape(-1, q)


def u_m_membership(values: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """(N, len(masks)) boolean array: does sample n lie in U_M for each M, straight from the definition."""
    big = np.where(masks[None, :, :], values[:, None, :], np.inf).min(axis=2)
    small = np.where(~masks[None, :, :], values[:, None, :], -np.inf).max(axis=2)
    return big > small


def batch_top_block(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised classification of exact (integer) samples: (multiplicity, top-block mask)."""
    top = values.max(axis=1, keepdims=True)
    mask = values == top
    return mask.sum(axis=1), mask
