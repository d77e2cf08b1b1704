"""Sampling harness for the top-block cover of W(q, k) by V_1, ..., V_{k-1}.

Rational samples are drawn as fractions a/b with small numerator and
denominator and then scaled to a common denominator, so every comparison is
an exact integer comparison. Small ranges make ties (and hence points on
the diagonals) frequent.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import numpy as np

from .config_spaces import (DEFAULT_EPS, NotInW, batch_top_block, subset_masks,
                            top_block_classify, u_m_membership)
from .groups import GroupTable, make_cyclic, orbit_tuple

NUM_RANGE = 4
DEN_RANGE = 4
SCALAR_PATH_SAMPLES = 200


def draw_rational(rng: np.random.Generator, n: int, q: int):
    """Integer numerators over the common denominator lcm(1..DEN_RANGE)."""
    lcm = math.lcm(*range(1, DEN_RANGE + 1))
    num = rng.integers(-NUM_RANGE, NUM_RANGE + 1, size=(n, q))
    den = rng.integers(1, DEN_RANGE + 1, size=(n, q))
    return num * (lcm // den), lcm


def cover_check(q: int, k: int, samples: int, seed: int = 0, scalar: str = "rational",
                group: Optional[GroupTable] = None, eps: float = DEFAULT_EPS,
                chunk: int = 4000, max_failures: int = 20) -> dict:
    """Verify disjointness, equivariance and completeness of the cover on random samples."""
    if not 2 <= k <= q:
        raise ValueError(f"need 2 <= k <= q, got q={q}, k={k}")
    if scalar not in ("rational", "float"):
        raise ValueError(f"unknown scalar kind {scalar!r}")
    G = group or make_cyclic(q)
    if G.order != q:
        raise ValueError("group order does not match q")
    rng = np.random.default_rng(seed)
    masks_by_size = {m: subset_masks(q, m) for m in range(1, q)}
    perms = [np.array(G.left_perm(g)) for g in G.elements]
    failures = []
    counts = {"disjoint": 0, "equivariant": 0, "cover": 0, "scalar_path": 0}
    in_hat_total = 0

    def fail(kind, sample, detail):
        counts[kind] += 1
        if len(failures) < max_failures:
            failures.append({"check": kind, "sample": [str(v) for v in sample], "detail": detail})

    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        ints, lcm = draw_rational(rng, n, q)
        if scalar == "rational":
            vals = ints
            sep = 0
        else:
            vals = ints / lcm + rng.uniform(-eps / 10, eps / 10, size=ints.shape)
            sep = eps
        if scalar == "rational":
            mult, top = batch_top_block(vals)
        else:
            top = vals >= vals.max(axis=1, keepdims=True) - eps
            mult = top.sum(axis=1)
        in_hat = mult >= k
        in_hat_total += int(in_hat.sum())

        # membership in every U_M, straight from the strict inequality
        member = {}
        for m, masks in masks_by_size.items():
            if scalar == "rational":
                member[m] = u_m_membership(vals, masks)
            else:
                member[m] = _float_membership(vals, masks, sep)
            bad = np.nonzero(member[m].sum(axis=1) > 1)[0]
            for i in bad:
                fail("disjoint", vals[i], f"two U_M with |M|={m}")

        in_some_v = np.zeros(n, dtype=bool)
        for m in range(1, k):
            in_some_v |= member[m].any(axis=1)
        for i in np.nonzero(in_some_v == in_hat)[0]:
            fail("cover", vals[i], "outside the max diagonal" if not in_hat[i] else "inside the max diagonal")

        # the classifier's top block must be one of the U_M it claims
        for i in np.nonzero(~in_hat)[0]:
            m = int(mult[i])
            masks = masks_by_size[m]
            hit = np.nonzero((masks == top[i]).all(axis=1))[0]
            if len(hit) != 1 or not member[m][i, hit[0]]:
                fail("cover", vals[i], f"top block of size {m} is not a U_M")

        for g, perm in enumerate(perms):
            moved = vals[:, perm]
            if scalar == "rational":
                mult_g, top_g = batch_top_block(moved)
            else:
                top_g = moved >= moved.max(axis=1, keepdims=True) - eps
                mult_g = top_g.sum(axis=1)
            ok = (mult_g == mult) & (top_g == top[:, perm]).all(axis=1)
            for i in np.nonzero(~ok)[0]:
                fail("equivariant", vals[i], f"g={g}")

        if done == 0 and scalar == "rational":
            for i in range(min(SCALAR_PATH_SAMPLES, n)):
                phi = orbit_tuple(G, [Fraction(int(v), lcm) for v in vals[i]])
                try:
                    res = top_block_classify(phi, k)
                    agree = (not in_hat[i]) and res.m == mult[i] and \
                        sorted(res.M.members) == list(np.nonzero(top[i])[0])
                except NotInW:
                    agree = bool(in_hat[i])
                if not agree:
                    fail("scalar_path", vals[i], "scalar and batch classifiers disagree")
        done += n

    return {
        "q": q,
        "k": k,
        "group": G.label,
        "scalar": scalar,
        "seed": seed,
        "samples": samples,
        "samples_in_max_diagonal": in_hat_total,
        "failures": failures,
        "failure_counts": counts,
        "assertions": {
            "disjoint": counts["disjoint"] == 0,
            "equivariant": counts["equivariant"] == 0,
            "cover": counts["cover"] == 0 and counts["scalar_path"] == 0,
        },
    }


def _float_membership(values: np.ndarray, masks: np.ndarray, sep: float) -> np.ndarray:
    big = np.where(masks[None, :, :], values[:, None, :], np.inf).min(axis=2)
    small = np.where(~masks[None, :, :], values[:, None, :], -np.inf).max(axis=2)
    return big > small + sep
