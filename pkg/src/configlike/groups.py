"""Finite groups as multiplication tables, and their action on Map(G, Y).

Group elements are the integers ``0..q-1`` and 0 is always the identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import FrozenSet, Iterable, List, Sequence, Tuple, Union

MAX_ORDER = 4096

Scalar = Union[Fraction, float]


class GroupError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class GroupTable:
    order: int
    mult: Tuple[Tuple[int, ...], ...]
    inverses: Tuple[int, ...]
    label: str
    identity: int = 0

    def __post_init__(self):
        q = self.order
        if not (1 <= q <= MAX_ORDER):
            raise GroupError(f"group order {q} outside 1..{MAX_ORDER}")
        if len(self.mult) != q or any(len(r) != q for r in self.mult) or len(self.inverses) != q:
            raise GroupError("table shape does not match the order")

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def element_order(self, g: int) -> int:
        n, x = 1, g
        while x != self.identity:
            x = self.mult[x][g]
            n += 1
        return n

    def axiom_violations(self, limit: int = 1) -> List[str]:
        """Group-law failures found by exhaustive search (empty when the table is a group)."""
        q, mult, e = self.order, self.mult, self.identity
        found: List[str] = []
        for a in range(q):
            if mult[e][a] != a or mult[a][e] != a:
                found.append(f"identity fails at {a}")
            if mult[a][self.inverses[a]] != e or mult[self.inverses[a]][a] != e:
                found.append(f"inverse fails at {a}")
            if sorted(mult[a]) != list(range(q)):
                found.append(f"row {a} is not a permutation")
            if len(found) >= limit:
                return found
        if q <= 64:
            for a in range(q):
                ra = mult[a]
                for b in range(q):
                    ab = ra[b]
                    rb = mult[b]
                    for c in range(q):
                        if mult[ab][c] != ra[rb[c]]:
                            found.append(f"associativity fails at ({a},{b},{c})")
                            if len(found) >= limit:
                                return found
        return found

    def is_group(self) -> bool:
        return not self.axiom_violations()

    def left_perm(self, g: int) -> Tuple[int, ...]:
        """Index map of the coordinate action: (g.phi)(h) = phi(perm[h])."""
        gi = self.inverses[g]
        return tuple(self.mult[gi][h] for h in range(self.order))

    def descriptor(self) -> dict:
        return {"label": self.label, "order": self.order}


def make_cyclic(q: int) -> GroupTable:
    if q < 1:
        raise GroupError("cyclic group needs q >= 1")
    mult = tuple(tuple((i + j) % q for j in range(q)) for i in range(q))
    inverses = tuple((-i) % q for i in range(q))
    return GroupTable(q, mult, inverses, f"Z/{q}")


def make_p_torus(p: int, n: int) -> GroupTable:
    """Elementary abelian group (Z/p)^n; element i has base-p digits as coordinates."""
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    if n < 1:
        raise GroupError("torus rank must be positive")
    q = p ** n
    if q > MAX_ORDER:
        raise GroupError(f"p^n = {q} exceeds {MAX_ORDER}")

    def digits(i):
        return [(i // p ** t) % p for t in range(n)]

    def number(ds):
        return sum(d * p ** t for t, d in enumerate(ds))

    dig = [digits(i) for i in range(q)]
    mult = tuple(
        tuple(number([(a + b) % p for a, b in zip(dig[i], dig[j])]) for j in range(q))
        for i in range(q)
    )
    inverses = tuple(number([(-a) % p for a in dig[i]]) for i in range(q))
    label = f"Z/{p}" if n == 1 else f"(Z/{p})^{n}"
    return GroupTable(q, mult, inverses, label)


def group_from_descriptor(desc: dict) -> GroupTable:
    """Build a group from ``{"kind": "cyclic", "q": 5}`` or ``{"kind": "p_torus", "p": 3, "n": 2}``."""
    kind = desc.get("kind")
    if kind == "cyclic":
        return make_cyclic(int(desc["q"]))
    if kind == "p_torus":
        return make_p_torus(int(desc["p"]), int(desc["n"]))
    raise GroupError(f"unknown group kind {kind!r}")


def p_torus_prime(group: GroupTable) -> int:
    """The prime p when ``group`` is a p-torus, else 0."""
    q = group.order
    if q == 1:
        return 0
    p = next(d for d in range(2, q + 1) if q % d == 0)
    n = q
    while n % p == 0:
        n //= p
    if n != 1:
        return 0
    abelian = all(group.mult[a][b] == group.mult[b][a] for a in range(q) for b in range(q))
    if abelian and all(group.element_order(g) == p for g in range(1, q)):
        return p
    return 0


# -- tuples indexed by group elements --------------------------------------


@dataclass(frozen=True)
class OrbitTuple:
    """A point of Map(G, R^m): one m-vector per group element."""

    group: GroupTable
    values: Tuple[Tuple[Scalar, ...], ...]
    scalar_kind: str = "rational"

    def __post_init__(self):
        if len(self.values) != self.group.order:
            raise GroupError(f"expected {self.group.order} entries, got {len(self.values)}")
        dims = {len(v) for v in self.values}
        if len(dims) != 1 or 0 in dims:
            raise GroupError("entries must share one positive dimension")
        if self.scalar_kind not in ("rational", "float"):
            raise GroupError(f"unknown scalar kind {self.scalar_kind!r}")

    @property
    def dim(self) -> int:
        return len(self.values[0])

    @property
    def q(self) -> int:
        return self.group.order

    @property
    def exact(self) -> bool:
        return self.scalar_kind == "rational"

    def scalars(self) -> List[Scalar]:
        """The entries of a dimension-1 tuple."""
        if self.dim != 1:
            raise GroupError("tuple is not scalar valued")
        return [v[0] for v in self.values]


def orbit_tuple(group: GroupTable, values: Iterable, scalar_kind: str = "rational") -> OrbitTuple:
    """Convenience constructor; scalar entries become 1-vectors."""
    conv = Fraction if scalar_kind == "rational" else float
    rows = []
    for v in values:
        if isinstance(v, (list, tuple)):
            rows.append(tuple(conv(c) for c in v))
        else:
            rows.append((conv(v),))
    return OrbitTuple(group, tuple(rows), scalar_kind)


def act_on_tuple(g: int, phi: OrbitTuple) -> OrbitTuple:
    """(g.phi)(h) = phi(g^-1 h)."""
    G = phi.group
    if not 0 <= g < G.order:
        raise IndexError(f"group element {g} out of range")
    perm = G.left_perm(g)
    return OrbitTuple(G, tuple(phi.values[perm[h]] for h in range(G.order)), phi.scalar_kind)


@dataclass(frozen=True)
class GroupSubset:
    group: GroupTable
    members: FrozenSet[int]

    def complement(self) -> "GroupSubset":
        return GroupSubset(self.group, frozenset(self.group.elements) - self.members)

    def __len__(self):
        return len(self.members)

    def sorted(self) -> List[int]:
        return sorted(self.members)


def act_on_subset(g: int, M: GroupSubset) -> GroupSubset:
    """gM = {g x : x in M}."""
    if not M.members:
        raise GroupError("subset must be nonempty")
    row = M.group.mult[g]
    return GroupSubset(M.group, frozenset(row[x] for x in M.members))


def fixed_subsets(group: GroupTable, m: int) -> List[GroupSubset]:
    """m-subsets M with gM = M for every g (exhaustive)."""
    out = []
    for members in combinations(range(group.order), m):
        M = GroupSubset(group, frozenset(members))
        if all(act_on_subset(g, M) == M for g in group.elements):
            out.append(M)
    return out


@dataclass(frozen=True)
class IGVector:
    """Element of the augmentation-zero part of the group ring: coefficients summing to 0."""

    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        if sum(self.coefficients, Fraction(0)) != 0:
            raise GroupError("coefficients must sum to zero")


def project_to_IG(v: Sequence) -> IGVector:
    """Subtract the mean from every coefficient."""
    vals = [Fraction(x) for x in v]
    if not vals:
        return IGVector(())
    mean = sum(vals, Fraction(0)) / len(vals)
    return IGVector(tuple(x - mean for x in vals))


def permute_coordinates(group: GroupTable, g: int, v: Sequence) -> Tuple:
    """The regular permutation representation on R^q: (g v)(h) = v(g^-1 h)."""
    perm = group.left_perm(g)
    return tuple(v[perm[h]] for h in range(group.order))
