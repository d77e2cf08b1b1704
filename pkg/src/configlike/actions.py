"""Orthogonal representations of finite groups."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .groups import GroupTable, make_cyclic

REP_TOL = 1e-12


class ActionError(ValueError):
    pass


@dataclass
class ActionRep:
    group: GroupTable
    matrices: Tuple[np.ndarray, ...]
    kind: str
    exact: Optional[Tuple[Tuple[Tuple[Fraction, ...], ...], ...]] = None
    # for permutation representations: (R(g) x)[h] = x[perms[g][h]]
    perms: Optional[Tuple[Tuple[int, ...], ...]] = None

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    def apply(self, g: int, x):
        if self.perms is not None:
            perm = self.perms[g]
            if len(x) and isinstance(x[0], Fraction):
                return tuple(x[i] for i in perm)
            return np.asarray(x, dtype=float)[list(perm)]
        if self.exact is not None and len(x) and isinstance(x[0], Fraction):
            mat = self.exact[g]
            return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in mat)
        return self.matrices[g] @ np.asarray(x, dtype=float)

    def violations(self, tol: float = REP_TOL) -> list:
        G, R = self.group, self.matrices
        out = []
        eye = np.eye(self.dim)
        if np.abs(R[G.identity] - eye).max() > tol:
            out.append("identity is not represented by I")
        for g in G.elements:
            if np.abs(R[g].T @ R[g] - eye).max() > tol:
                out.append(f"R({g}) is not orthogonal")
            for h in G.elements:
                if np.abs(R[g] @ R[h] - R[G.mul(g, h)]).max() > tol:
                    out.append(f"R({g})R({h}) != R({G.mul(g, h)})")
                    return out
        return out

    def is_free_on_sphere(self) -> bool:
        """No non-identity element fixes a unit vector."""
        eye = np.eye(self.dim)
        return all(np.linalg.svd(self.matrices[g] - eye, compute_uv=False).min() > 1e-9
                   for g in self.group.elements if g != self.group.identity)

    def has_fixed_points_on_sphere(self) -> bool:
        """Some unit vector is fixed by the whole group."""
        stack = np.vstack([self.matrices[g] - np.eye(self.dim) for g in self.group.elements])
        return np.linalg.matrix_rank(stack, tol=1e-9) < self.dim


def antipodal(d: int) -> ActionRep:
    G = make_cyclic(2)
    ex = tuple(tuple(tuple(Fraction(s if i == j else 0) for j in range(d)) for i in range(d))
               for s in (1, -1))
    return ActionRep(G, (np.eye(d), -np.eye(d)), "antipodal", ex)


def complex_roots(group: GroupTable, d: int) -> ActionRep:
    """Cyclic group acting on C^(d/2) = R^d by multiplication with roots of unity."""
    if d % 2:
        raise ActionError("complex multiplication needs an even dimension")
    q = group.order
    gen_power = _cyclic_powers(group)
    mats = []
    for g in group.elements:
        t = 2 * np.pi * gen_power[g] / q
        block = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
        mats.append(np.kron(np.eye(d // 2), block))
    return ActionRep(group, tuple(mats), "complex_roots")


def _cyclic_powers(group: GroupTable):
    """Exponent of each element with respect to a generator; requires a cyclic group."""
    q = group.order
    for gen in range(q):
        powers = {}
        x, n = group.identity, 0
        while x not in powers:
            powers[x] = n
            x, n = group.mul(gen, x), n + 1
        if len(powers) == q:
            return [powers[g] for g in group.elements]
    raise ActionError(f"{group.label} is not cyclic")


def permutation(group: GroupTable) -> ActionRep:
    """Regular permutation representation on R^q, (g v)(h) = v(g^-1 h); exact."""
    q = group.order
    mats, exact, perms = [], [], []
    for g in group.elements:
        perm = group.left_perm(g)
        perms.append(perm)
        P = np.zeros((q, q))
        rows = []
        for h in range(q):
            P[h, perm[h]] = 1.0
            rows.append(tuple(Fraction(1 if c == perm[h] else 0) for c in range(q)))
        mats.append(P)
        exact.append(tuple(rows))
    return ActionRep(group, tuple(mats), "permutation", tuple(exact), tuple(perms))


def ig_basis(q: int) -> np.ndarray:
    """Orthonormal basis (columns) of the sum-zero hyperplane in R^q (Helmert vectors)."""
    B = np.zeros((q, q - 1))
    for j in range(1, q):
        B[:j, j - 1] = 1.0
        B[j, j - 1] = -j
        B[:, j - 1] /= np.sqrt(j * (j + 1))
    return B


def ig_permutation(group: GroupTable) -> ActionRep:
    """The permutation representation restricted to the sum-zero subspace I[G], in Helmert coordinates."""
    q = group.order
    if q < 2:
        raise ActionError("I[G] is zero for the trivial group")
    B = ig_basis(q)
    perm = permutation(group)
    mats = tuple(B.T @ P @ B for P in perm.matrices)
    return ActionRep(group, mats, "ig_permutation")


def user_supplied(group: GroupTable, matrices: Sequence) -> ActionRep:
    mats = tuple(np.asarray(m, dtype=float) for m in matrices)
    if len(mats) != group.order:
        raise ActionError("need one matrix per group element")
    rep = ActionRep(group, mats, "user")
    bad = rep.violations()
    if bad:
        raise ActionError("; ".join(bad))
    return rep


def action_from_spec(spec, group: GroupTable, d: int) -> ActionRep:
    """Build an action from a scenario field: a kind string or ``{"matrices": [...]}``."""
    if isinstance(spec, dict):
        if "matrices" in spec:
            return user_supplied(group, spec["matrices"])
        spec = spec.get("kind")
    if spec == "antipodal":
        if group.order != 2:
            raise ActionError("the antipodal action needs a group of order 2")
        return antipodal(d)
    if spec == "complex_roots":
        return complex_roots(group, d)
    if spec == "permutation":
        if d != group.order:
            raise ActionError("permutation action needs d = |G|")
        return permutation(group)
    if spec == "ig_permutation":
        if d != group.order - 1:
            raise ActionError("I[G] action needs d = |G| - 1")
        return ig_permutation(group)
    raise ActionError(f"unknown action {spec!r}")
