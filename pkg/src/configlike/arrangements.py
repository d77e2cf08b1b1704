"""Rational linear subspace arrangements and their intersection lattices."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import Matrix, as_fraction_matrix, nullspace, rank, row_space_key, rref

MAX_SUBSPACES = 64


class ArrangementError(ValueError):
    pass


@dataclass(frozen=True)
class SubspaceArrangement:
    """A finite family of linear subspaces of Q^d, each given by spanning rows.

    ``family`` / ``params`` are descriptive metadata used by reports
    (e.g. ``family="k-equal", params={"q": 4, "k": 3}``).
    """

    ambient: int
    bases: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]
    family: str = "custom"
    params: Dict[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        seen = set()
        for basis in self.bases:
            if any(len(row) != self.ambient for row in basis):
                raise ArrangementError("basis row has wrong length")
            if rank(basis) != len(basis):
                raise ArrangementError("basis rows are not linearly independent")
            if len(basis) >= self.ambient:
                raise ArrangementError("subspace must be proper")
            key = row_space_key(basis)
            if key in seen:
                raise ArrangementError("duplicate subspace")
            seen.add(key)

    @classmethod
    def from_rows(cls, ambient: int, bases: Sequence[Sequence[Sequence]], family="custom",
                  params=None) -> "SubspaceArrangement":
        frozen = tuple(tuple(tuple(r) for r in as_fraction_matrix(b)) for b in bases)
        return cls(ambient, frozen, family, dict(params or {}))

    def dimensions(self) -> List[int]:
        return [len(b) for b in self.bases]

    def equations(self, i: int) -> Matrix:
        """Rows spanning the annihilator of subspace ``i``."""
        return nullspace(self.bases[i], self.ambient)


def k_equal_arrangement(q: int, k: int) -> SubspaceArrangement:
    """Subspaces {y in R^q : y_i equal for i in S} over all k-subsets S."""
    if not (2 <= k <= q <= 8):
        raise ArrangementError(f"need 2 <= k <= q <= 8, got q={q}, k={k}")
    bases = []
    for S in combinations(range(q), k):
        rows = [[1 if j in S else 0 for j in range(q)]]
        rows += [[1 if j == i else 0 for j in range(q)] for i in range(q) if i not in S]
        bases.append(rows)
    return SubspaceArrangement.from_rows(q, bases, "k-equal", {"q": q, "k": k})


def v1_arrangement(m: int, q: int, k: int) -> SubspaceArrangement:
    """The arrangement whose complement is V_1(m, q, k) inside (R^m)^q.

    Coordinates are family-major: coordinate ``c*q + i`` is component ``c``
    of point ``i``. A subspace asks for a k-fold equality among first
    components at positions S and full equality of every other component.
    """
    if m < 2 or not (2 <= k <= q):
        raise ArrangementError(f"need m >= 2 and 2 <= k <= q, got m={m}, q={q}, k={k}")
    d = m * q
    if d > 16:
        raise ArrangementError(f"ambient dimension {d} exceeds 16")

    def unit(idx):
        return [1 if j == idx else 0 for j in range(d)]

    bases = []
    for S in combinations(range(q), k):
        rows = [[1 if j in S else 0 for j in range(d)]]
        rows += [unit(i) for i in range(q) if i not in S]
        for c in range(1, m):
            rows.append([1 if c * q <= j < (c + 1) * q else 0 for j in range(d)])
        bases.append(rows)
    return SubspaceArrangement.from_rows(d, bases, "v1", {"m": m, "q": q, "k": k})


@dataclass
class LatticeElement:
    equations: Matrix          # RREF rows of the annihilator
    codim: int
    atoms: int                 # bitmask of arrangement subspaces containing this flat

    def basis(self, ambient: int) -> Matrix:
        return nullspace(self.equations, ambient)


@dataclass
class ArrangementLattice:
    """Intersection poset ordered by reverse inclusion; element 0 is the ambient space.

    ``below[j]`` lists the elements strictly below j; ``covers[j]`` the ones j covers.
    Elements are sorted by codimension, which is a linear extension of the order.
    """

    ambient: int
    elements: List[LatticeElement]
    below: List[List[int]]
    covers: List[List[int]]

    def __len__(self):
        return len(self.elements)

    def leq(self, i: int, j: int) -> bool:
        a, b = self.elements[i].atoms, self.elements[j].atoms
        return a & ~b == 0

    def open_interval(self, x: int) -> List[int]:
        """Elements strictly between the bottom and ``x``."""
        return [y for y in self.below[x] if y != 0]

    def codims(self) -> List[int]:
        return [e.codim for e in self.elements]

    def moebius_from_bottom(self) -> List[int]:
        mu = [0] * len(self.elements)
        mu[0] = 1
        for j in range(1, len(self.elements)):
            mu[j] = -sum(mu[i] for i in self.below[j])
        return mu


def _intersect(eqs_a: Matrix, eqs_b: Matrix) -> Tuple[Matrix, tuple]:
    red, _ = rref(list(eqs_a) + list(eqs_b))
    return red, tuple(tuple(r) for r in red)


def intersection_lattice(arr: SubspaceArrangement) -> ArrangementLattice:
    """Close the family under intersection using exact rational elimination."""
    n = len(arr.bases)
    if n > MAX_SUBSPACES:
        raise ArrangementError(f"at most {MAX_SUBSPACES} subspaces supported")
    atom_eqs = [rref(arr.equations(i))[0] for i in range(n)]

    keys: Dict[tuple, int] = {(): 0}
    eqs: List[Matrix] = [[]]
    masks: List[int] = [0]
    queue = deque()
    for i, e in enumerate(atom_eqs):
        key = tuple(tuple(r) for r in e)
        if key not in keys:
            keys[key] = len(eqs)
            eqs.append(e)
            masks.append(0)
            queue.append(keys[key])
    while queue:
        x = queue.popleft()
        for i, e in enumerate(atom_eqs):
            red, key = _intersect(eqs[x], e)
            if key == tuple(tuple(r) for r in eqs[x]):
                masks[x] |= 1 << i
                continue
            if key not in keys:
                keys[key] = len(eqs)
                eqs.append(red)
                masks.append(0)
                queue.append(keys[key])

    order = sorted(range(len(eqs)), key=lambda j: (len(eqs[j]), masks[j].bit_count(), masks[j]))
    elements = [LatticeElement(eqs[j], len(eqs[j]), masks[j]) for j in order]
    below: List[List[int]] = [[] for _ in elements]
    for j, ej in enumerate(elements):
        for i in range(j):
            ei = elements[i]
            if ei.codim < ej.codim and ei.atoms & ~ej.atoms == 0:
                below[j].append(i)
    covers: List[List[int]] = []
    for j in range(len(elements)):
        bj = set(below[j])
        inner = set()
        for i in below[j]:
            inner.update(below[i])
        covers.append(sorted(bj - inner))
    return ArrangementLattice(arr.ambient, elements, below, covers)


def admissible_partition_count(q: int, k: int) -> int:
    """Number of set partitions of [q] whose blocks have size 1 or >= k (brute force)."""
    count = 0
    for blocks in set_partitions(list(range(q))):
        if all(len(b) == 1 or len(b) >= k for b in blocks):
            count += 1
    return count


def set_partitions(items: List[int]):
    """Yield all set partitions of ``items`` as lists of lists."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
