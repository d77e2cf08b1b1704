"""The acceptance matrix, shared by ``configlike selftest`` and the test suite.

Each check returns a :class:`Row`; a row passes only if its property holds
and it finished inside its time limit.
"""
from __future__ import annotations

import cmath
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from . import actions
from .arrangements import admissible_partition_count, intersection_lattice, k_equal_arrangement, v1_arrangement
from .config_spaces import (AmbiguousPattern, coincidence_pattern, hat_map, in_kwise_diagonal,
                            pattern_action_fixed_points)
from .cover import cover_check
from .groups import (GroupTable, act_on_tuple, fixed_subsets, make_cyclic, make_p_torus, orbit_tuple)
from .homology import complement_betti, cw_model_betti
from .mapspec import MapSpec
from .solver import (BudgetExhausted, Scenario, knaster_closed_form_theta, knaster_scan_1d,
                     knaster_scenario, load_scenario, residual_A, solve)

log = logging.getLogger(__name__)


@dataclass
class Row:
    name: str
    anchor: str
    passed: bool
    detail: Dict = field(default_factory=dict)
    seconds: float = 0.0
    limit: Optional[float] = None

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"[{mark}] {self.name}: {self.anchor} [{self.seconds:.1f}s{lim}]"

    def to_dict(self, timing: bool = False) -> dict:
        out = {"name": self.name, "anchor": self.anchor, "passed": self.passed, "detail": self.detail}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def _timed(name: str, anchor: str, limit: Optional[float], fn: Callable[[], tuple]) -> Row:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed row, not a crashed harness
        log.exception("check %s raised", name)
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        detail = dict(detail, over_time=round(dt, 2))
        ok = False
    return Row(name, anchor, bool(ok), detail, dt, limit)


# -- 1 ------------------------------------------------------------------------


def check_cover(samples: int = 100_000, seed: int = 0) -> Row:
    def run():
        per_pair = {}
        ok = True
        for q in (3, 4, 5, 6):
            for k in range(2, q + 1):
                rep = cover_check(q, k, samples, seed=seed + 100 * q + k, scalar="rational")
                good = all(rep["assertions"].values()) and not rep["failures"]
                ok &= good
                per_pair[f"q={q},k={k}"] = sum(rep["failure_counts"].values())
        return ok, {"samples_per_pair": samples, "failures": per_pair}

    return _timed("cover", "W(q,k) = V_1 u ... u V_{k-1}; U_M disjoint; f_m equivariant", 60, run)


# -- 2, 3 -----------------------------------------------------------------------


def check_k_equal_band(max_q: int = 7, primes=(2, 3, 5)) -> Row:
    def run():
        ok = True
        nonzero = {}
        for q in range(2, max_q + 1):
            for k in range(2, q + 1):
                arr = k_equal_arrangement(q, k)
                lat = intersection_lattice(arr)
                if len(lat) != admissible_partition_count(q, k):
                    ok = False
                for p in primes:
                    rep = complement_betti(arr, p, lattice=lat)
                    ok &= bool(rep.passed) and bool(rep.euler_check)
                    nonzero[f"q={q},k={k},p={p}"] = {str(i): b for i, b in rep.nonzero.items()}
                    if q <= 4:
                        cw = {i: b for i, b in cw_model_betti("k-equal", q, k, p).items() if b}
                        ok &= cw == rep.nonzero
        ok &= nonzero["q=3,k=3,p=2"].get("1") == 1 and nonzero["q=4,k=4,p=2"].get("2") == 1
        for p in primes:
            ok &= nonzero[f"q=3,k=3,p={p}"] == {"1": 1} and nonzero[f"q=4,k=4,p={p}"] == {"2": 1}
        return ok, {"nonzero_betti": nonzero}

    return _timed("k-equal band", "complement of the k-equal arrangement is (k-3)-connected "
                  "(reduced F_p homology vanishes through degree k-3)", 300, run)


def check_v1_band(cases=((2, 3, 2), (2, 3, 3), (2, 4, 3)), primes=(2, 3, 5)) -> Row:
    def run():
        ok = True
        out = {}
        for m, q, k in cases:
            arr = v1_arrangement(m, q, k)
            lat = intersection_lattice(arr)
            for p in primes:
                rep = complement_betti(arr, p, lattice=lat)
                ok &= bool(rep.passed) and bool(rep.euler_check)
                out[f"m={m},q={q},k={k},p={p}"] = {
                    "band": rep.claimed_band, "nonzero": {str(i): b for i, b in rep.nonzero.items()}}
        for p in primes:
            cw = {i: b for i, b in cw_model_betti("v1", 2, 2, p, m=2).items() if b}
            ok &= cw == complement_betti(v1_arrangement(2, 2, 2), p).nonzero
        return ok, out

    return _timed("v1 band", "V_1(m,q,k) is c-connected for c = (m-1)(q-1)+k-3", 120, run)


# -- 4, 5 -----------------------------------------------------------------------


def check_pattern_fixed_points() -> Row:
    def run():
        ok = True
        out = {}
        for p in (3, 5, 7):
            G = make_cyclic(p)
            for k in range(1, p + 1):
                n = len(pattern_action_fixed_points(G, k))
                out[f"p={p},k={k}"] = n
                ok &= n == (1 if k in (1, p) else 0)
        return ok, {"fixed_patterns": out}

    return _timed("pattern fixed points", "Z/p acts on k-block coincidence patterns without "
                  "fixed points for 2 <= k <= p-1", 5, run)


def small_groups(max_order: int = 8) -> List[GroupTable]:
    groups = [make_cyclic(q) for q in range(2, max_order + 1)]
    groups += [make_p_torus(2, 2), make_p_torus(2, 3)]
    return [G for G in groups if G.order <= max_order]


def check_subset_fixed_points(max_order: int = 8) -> Row:
    def run():
        ok = True
        found = {}
        for G in small_groups(max_order):
            for m in range(1, G.order):
                n = len(fixed_subsets(G, m))
                if n:
                    found[f"{G.label},m={m}"] = n
                    ok = False
        return ok, {"groups": [G.label for G in small_groups(max_order)], "fixed": found}

    return _timed("subset fixed points", "the G-set of m-subsets has no fixed point for 0 < m < |G|",
                  5, run)


# -- 6 ---------------------------------------------------------------------------

POLY_MAPS = {
    4: [MapSpec(("x1^2 - x2*x3 + 2",)), MapSpec(("x1 + x2", "x3^2 - x4"), m=2)],
    5: [MapSpec(("x1*x2 + x5^2",)), MapSpec(("x1^2", "x2 + x3 - x4*x5"), m=2)],
}


def check_hat_map(points: int = 10_000, seed: int = 0) -> Row:
    def run():
        rng = np.random.default_rng(seed)
        groups = [make_cyclic(4), make_p_torus(2, 2), make_cyclic(5)]
        per = points // len(groups)
        bad_equiv = bad_preimage = 0
        zero_hits = 0
        for G in groups:
            q = G.order
            rep = actions.permutation(G)
            scen = {}
            for f in POLY_MAPS[q]:
                for k in range(2, q + 1):
                    scen[(id(f), k)] = Scenario(domain="sphere", dim=q, group=G, action=rep,
                                                map=f, target="A", k=k)
            for i in range(per):
                x = tuple(Fraction(int(a), int(b)) for a, b in
                          zip(rng.integers(-2, 3, q), rng.integers(1, 3, q)))
                f = POLY_MAPS[q][i % len(POLY_MAPS[q])]
                fx = hat_map(f, rep, x, "rational")
                for h in G.elements:
                    if act_on_tuple(h, fx) != hat_map(f, rep, rep.apply(h, x), "rational"):
                        bad_equiv += 1
                for k in range(2, q + 1):
                    r, _ = residual_A(x, scen[(id(f), k)])
                    zero_hits += r == 0
                    if (r == 0) != in_kwise_diagonal(fx, k):
                        bad_preimage += 1
        return bad_equiv == 0 and bad_preimage == 0, {
            "points": per * len(groups), "equivariance_failures": bad_equiv,
            "preimage_failures": bad_preimage, "zero_residuals": zero_hits}

    return _timed("hat map", "f^(hx) = h f^(x); A(f,k) is the preimage of the k-wise diagonal", 30, run)


# -- 7, 8, 9 ----------------------------------------------------------------------

BORSUK_ULAM = {"domain": {"kind": "sphere", "d": 3}, "group": {"kind": "cyclic", "q": 2},
               "action": "antipodal", "map": {"expr": "x1+x2^2", "m": 1}, "target": "A", "k": 2,
               "seed": 0, "starts": 100}
Z3_ON_S3 = {"domain": {"kind": "sphere", "d": 4}, "group": {"kind": "cyclic", "q": 3},
            "action": "complex_roots", "map": {"expr": "x1", "m": 1}, "target": "A_prime", "k": 2,
            "seed": 7, "starts": 100}
NEGATIVE_CONTROL = {"domain": {"kind": "sphere", "d": 3}, "group": {"kind": "cyclic", "q": 2},
                    "action": "antipodal",
                    "map": {"expr": ["x1", "x2", "x3", "x1*x2", "x2*x3"], "m": 5},
                    "target": "A", "k": 2, "seed": 0, "starts": 10, "max_evals": 1500}
KNASTER_U = (0.6, 0.8)
KNASTER_Q3 = {"domain": {"kind": "rotation", "n": 2}, "group": {"kind": "cyclic", "q": 3},
              "action": "ig_permutation", "map": {"builtin": "linear", "u": list(KNASTER_U)},
              "target": "knaster", "base_point": [1.0, 0.0], "seed": 0, "starts": 20}
KNASTER_Q4 = {"domain": {"kind": "rotation", "n": 3}, "group": {"kind": "p_torus", "p": 2, "n": 2},
              "action": "ig_permutation", "map": {"expr": "x1 + 0.3*x2^2", "m": 1},
              "target": "knaster", "base_point": [0.3, 0.5, 0.8], "seed": 0, "starts": 200}


def _z3_orbit_check(x) -> bool:
    """Evaluate f = Re(z1) on the orbit by complex arithmetic, independently of the matrices."""
    z = complex(x[0], x[1])
    vals = sorted((cmath.exp(2j * math.pi * j / 3) * z).real for j in range(3))
    return abs(vals[2] - vals[1]) < 1e-4


def check_solver_nonempty() -> Row:
    def run():
        t0 = time.perf_counter()
        bu = solve(load_scenario(BORSUK_ULAM))
        t1 = time.perf_counter()
        z3 = solve(load_scenario(Z3_ON_S3))
        t2 = time.perf_counter()
        ok = (bu.converged_starts >= 95 and abs(bu.witness[0]) < 1e-9
              and bu.existence["flag"] == "guaranteed")
        ok &= z3.converged_starts >= 1 and z3.residual < 1e-8 and _z3_orbit_check(z3.witness)
        ok &= z3.existence["flag"] == "guaranteed"
        ok &= t1 - t0 <= 30 and t2 - t1 <= 30
        return ok, {"borsuk_ulam_converged": bu.converged_starts,
                    "borsuk_ulam_x1": bu.witness[0],
                    "z3_converged": z3.converged_starts, "z3_residual": z3.residual}

    return _timed("solver nonemptiness", "A(f,k) is nonempty when the genus exceeds "
                  "(|G|-1)(m-1)+k-1", 60, run)


def check_knaster() -> Row:
    def run():
        sc3 = load_scenario(KNASTER_Q3)
        scan = knaster_scan_1d(sc3)
        theta = knaster_closed_form_theta(KNASTER_U, KNASTER_Q3["base_point"])
        diff = abs((scan.theta - theta + math.pi) % (2 * math.pi) - math.pi)
        t0 = time.perf_counter()
        q4 = solve(load_scenario(KNASTER_Q4))
        dt = time.perf_counter() - t0
        ok = diff < 1e-6 and q4.residual < 1e-6 and q4.converged_starts >= 1 and dt <= 120
        return ok, {"q3_theta": scan.theta, "q3_closed_form": theta, "q3_error": diff,
                    "q4_residual": q4.residual, "q4_converged": q4.converged_starts}

    return _timed("knaster", "a rotation rho with f(rho g x) = c for g != e and f(rho x) <= c",
                  150, run)


def check_negative_control() -> Row:
    def run():
        sc = load_scenario(NEGATIVE_CONTROL)
        flag = sc.existence()["flag"]
        try:
            res = solve(sc)
            outcome, resid = "converged", res.residual
        except BudgetExhausted as exc:
            outcome, resid = "budget_exhausted", exc.best.residual
        return flag == "not guaranteed", {"existence": flag, "outcome": outcome, "best_residual": resid}

    return _timed("negative control", "no existence claim when the genus precondition fails", 60, run)


# -- harness-level controls (negative-control hooks live here) ------------------


def check_group_axioms(corrupt: bool = False) -> Row:
    def run():
        groups = small_groups(8) + [make_p_torus(3, 2)]
        if corrupt:
            G = groups[2]
            mult = [list(r) for r in G.mult]
            mult[1][1], mult[1][2] = mult[1][2], mult[1][1]
            groups[2] = GroupTable(G.order, tuple(tuple(r) for r in mult), G.inverses, G.label + "*")
        bad = {G.label: G.axiom_violations() for G in groups if G.axiom_violations()}
        return not bad, {"violations": bad}

    return _timed("group axioms", "every constructed table is a group law", 5, run)


def check_float_pattern(eps: float = 1e-9) -> Row:
    def run():
        G = make_cyclic(3)
        phi = orbit_tuple(G, [0.1 + 0.2, 0.3, 1.0], scalar_kind="float")
        try:
            pat = coincidence_pattern(phi, eps)
        except AmbiguousPattern as exc:
            return False, {"error": f"AmbiguousPattern: {exc}"}
        return pat.blocks == ((0, 1), (2,)), {"blocks": [list(b) for b in pat.blocks]}

    return _timed("float patterns", "coincidence pattern of a computed float tuple", 5, run)


CRITERIA = {
    1: check_cover,
    2: check_k_equal_band,
    3: check_v1_band,
    4: check_pattern_fixed_points,
    5: check_subset_fixed_points,
    6: check_hat_map,
    7: check_solver_nonempty,
    8: check_knaster,
    9: check_negative_control,
}


def run_all(only=None, inject: Optional[str] = None) -> List[Row]:
    rows = [check_group_axioms(corrupt=inject == "corrupt-group"),
            check_float_pattern(eps=0.0 if inject == "zero-tolerance" else 1e-9)]
    for n, fn in CRITERIA.items():
        if only and n not in only:
            continue
        row = fn()
        row.name = f"{n}. {row.name}"
        log.info(row.line())
        rows.append(row)
    return rows
