"""Numerical search for orbit coincidences.

A scenario fixes a domain (a sphere or SO(n)), an orthogonal action of a
finite group, a map, and a target set. The residuals below vanish exactly on
the target; :func:`solve` minimises them by multi-start local search in
tangent charts, re-centring the chart (retraction) between rounds.
"""
from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from .actions import ActionRep, action_from_spec, ig_permutation
from .groups import GroupTable, group_from_descriptor, p_torus_prime
from .mapspec import MapSpec, mapspec_from_dict

log = logging.getLogger(__name__)

EPS_SOLVE = 1e-8
VERIFY_TOL = 1e-12
ENUMERATION_LIMIT = 10 ** 5
TARGETS = ("A", "A_prime", "A_prime_cap_A", "knaster")


class ScenarioError(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    """No start reached the residual threshold; ``best`` holds the best attempt."""

    def __init__(self, best: "SolverResult"):
        super().__init__(f"no start converged; best residual {best.residual:.3e}")
        self.best = best


class ResolutionTooCoarse(RuntimeError):
    pass


@dataclass
class Scenario:
    domain: str                 # "sphere" or "rotation"
    dim: int                    # ambient d of S^{d-1}, or n of SO(n)
    group: GroupTable
    action: ActionRep
    map: MapSpec
    target: str
    k: int
    base_point: Optional[np.ndarray] = None
    seed: int = 0
    starts: int = 100
    eps_solve: float = EPS_SOLVE
    verify_tol: float = VERIFY_TOL
    max_evals: int = 6000
    method: str = "nelder-mead"
    source: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        q = self.group.order
        if self.target not in TARGETS:
            raise ScenarioError(f"target must be one of {TARGETS}")
        if not 2 <= self.k <= q:
            raise ScenarioError(f"k must lie in 2..{q}")
        if self.domain not in ("sphere", "rotation"):
            raise ScenarioError("domain must be sphere or rotation")
        if self.target == "knaster":
            if self.domain != "rotation" or self.dim != q - 1:
                raise ScenarioError("knaster scenarios search SO(q-1)")
            if self.action.dim != q - 1:
                raise ScenarioError("knaster action must live on I[G]")
            if self.base_point is None:
                raise ScenarioError("knaster scenarios need a base point")
            bp = np.asarray(self.base_point, dtype=float)
            self.base_point = bp / np.linalg.norm(bp)
            if self.map.m != 1:
                raise ScenarioError("knaster map must be scalar")
        else:
            if self.domain != "sphere" or self.action.dim != self.dim:
                raise ScenarioError("coincidence scenarios need an action on the ambient space of the sphere")
        if self.target in ("A_prime",) and self.map.m != 1:
            raise ScenarioError("A_prime needs a scalar map")
        if self.method not in ("nelder-mead", "gradient"):
            raise ScenarioError(f"unknown method {self.method!r}")
        bad = self.action.violations()
        if bad:
            raise ScenarioError("action is not an orthogonal representation: " + "; ".join(bad))
        probe = np.random.default_rng(12345)
        for _ in range(3):
            val = self.map(_unit(probe.standard_normal(self.action.dim)))
            if len(val) != self.map.m or not all(np.isfinite(float(v)) for v in val):
                raise ScenarioError("map is not evaluable with the declared output dimension")

    @property
    def q(self) -> int:
        return self.group.order

    @property
    def m(self) -> int:
        return self.map.m

    def existence(self) -> dict:
        """Whether existence of a solution is guaranteed for this scenario."""
        q, m, k = self.q, self.m, self.k
        if self.target == "knaster":
            p = p_torus_prime(self.group)
            if p > 2:
                return {"flag": "guaranteed", "genus_lower_bound": q - 1, "needed": q - 2,
                        "reason": f"odd p-torus acting on SO({q - 1})"}
            return {"flag": "unknown", "reason": "only odd p-tori are covered"}
        needed = (q - 1) * (m - 1) + k - 1
        if not self.action.is_free_on_sphere():
            return {"flag": "unknown", "needed": needed, "reason": "action is not free; genus not known"}
        g = self.dim
        flag = "guaranteed" if g > needed else "not guaranteed"
        return {"flag": flag, "genus": g, "needed": needed,
                "reason": f"free action on S^{self.dim - 1} has genus {g}"}


def _unit(v):
    return v / np.linalg.norm(v)


def load_scenario(data: dict, **overrides) -> Scenario:
    data = dict(data, **{k: v for k, v in overrides.items() if v is not None})
    dom = data["domain"]
    if isinstance(dom, str):
        dom = {"kind": dom}
    group = group_from_descriptor(data["group"])
    target = data.get("target", "A")
    if dom["kind"] == "sphere":
        d = int(dom["d"])
        domain = "sphere"
    elif dom["kind"] in ("rotation", "SO"):
        d = int(dom.get("n", group.order - 1))
        domain = "rotation"
    else:
        raise ScenarioError(f"unknown domain {dom['kind']!r}")
    action_field = data.get("action", "ig_permutation" if target == "knaster" else None)
    action = action_from_spec(action_field, group, d)
    mp = mapspec_from_dict(data["map"])
    k = int(data.get("k", group.order - 1 if target == "knaster" else 2))
    bp = data.get("base_point")
    return Scenario(
        domain=domain, dim=d, group=group, action=action, map=mp, target=target, k=k,
        base_point=None if bp is None else np.asarray(bp, dtype=float),
        seed=int(data.get("seed", 0)), starts=int(data.get("starts", 100)),
        eps_solve=float(data.get("eps_solve", EPS_SOLVE)),
        verify_tol=float(data.get("verify_tol", VERIFY_TOL)),
        max_evals=int(data.get("max_evals", 6000)),
        method=data.get("method", "nelder-mead"), source=data)


def load_scenario_file(path: str, **overrides) -> Scenario:
    with open(path) as fh:
        return load_scenario(json.load(fh), **overrides)


# -- residuals ----------------------------------------------------------------


def orbit_values(x, sc: Scenario) -> list:
    """f(g x) for every group element g, as tuples."""
    return [tuple(sc.map(sc.action.apply(g, x))) for g in sc.group.elements]


def _sqdist(a, b):
    return sum((u - v) ** 2 for u, v in zip(a, b))


def min_subset_spread(values: Sequence[tuple], k: int) -> Tuple[object, Tuple[int, ...]]:
    """min over k-subsets S of the sum over pairs in S of squared distances."""
    q = len(values)
    D = [[_sqdist(values[i], values[j]) for j in range(q)] for i in range(q)]
    if math.comb(q, k) <= ENUMERATION_LIMIT:
        best, arg = None, None
        for S in combinations(range(q), k):
            s = sum(D[i][j] for i, j in combinations(S, 2))
            if best is None or s < best:
                best, arg = s, S
        return best, arg
    log.warning("C(%d,%d) exceeds the enumeration limit; using greedy clustering", q, k)
    best, arg = None, None
    for i in range(q):
        near = sorted(range(q), key=lambda j: D[i][j])[:k]
        S = tuple(sorted(near))
        s = sum(D[a][b] for a, b in combinations(S, 2))
        if best is None or s < best:
            best, arg = s, S
    return best, arg


def residual_A(x, sc: Scenario):
    """(residual, minimizing subset) for membership in A(f, k)."""
    return min_subset_spread(orbit_values(x, sc), sc.k)


def _aprime_terms(vals: Sequence, k: int):
    order = sorted(range(len(vals)), key=lambda i: (-vals[i], i))
    top = order[:k]
    return (vals[order[0]] - vals[order[k - 1]]) ** 2, tuple(sorted(top)), vals[order[0]]


def residual_Aprime(x, sc: Scenario):
    """(residual, top-k subset) for membership in A'(f1, k); f1 is the first component."""
    vals = [v[0] for v in orbit_values(x, sc)]
    r, S, _ = _aprime_terms(vals, sc.k)
    return r, S


def residual_Aprime_cap_A(x, sc: Scenario):
    """A'(f1, k) intersected with A(h, q) where f = f1 (+) h."""
    vals = orbit_values(x, sc)
    r, S, _ = _aprime_terms([v[0] for v in vals], sc.k)
    h = [v[1:] for v in vals]
    spread = sum(_sqdist(h[i], h[j]) for i, j in combinations(range(len(h)), 2))
    return r + spread, S


def _knaster_values(rho, sc: Scenario):
    x = sc.base_point
    G = sc.group
    at_e = sc.map(rho @ x)[0]
    rest = [sc.map(rho @ sc.action.matrices[g] @ x)[0] for g in G.elements if g != G.identity]
    return at_e, rest


def residual_knaster(rho, sc: Scenario):
    """Spread of f(rho g x) over g != e plus the hinge max(0, f(rho x) - min)^2."""
    at_e, rest = _knaster_values(np.asarray(rho, dtype=float), sc)
    mean = sum(rest) / len(rest)
    r = sum((v - mean) ** 2 for v in rest) + max(0.0, at_e - min(rest)) ** 2
    return r, tuple(g for g in sc.group.elements if g != sc.group.identity)


RESIDUALS = {"A": residual_A, "A_prime": residual_Aprime,
             "A_prime_cap_A": residual_Aprime_cap_A, "knaster": residual_knaster}


def residual(x, sc: Scenario):
    return RESIDUALS[sc.target](x, sc)


def common_value(x, sc: Scenario, subset):
    if sc.target == "knaster":
        _, rest = _knaster_values(np.asarray(x, dtype=float), sc)
        return float(np.mean(rest))
    vals = orbit_values(x, sc)
    sel = np.array([[float(c) for c in vals[g]] for g in subset])
    return sel.mean(axis=0).tolist()


# -- charts on the domain -------------------------------------------------------


def sphere_chart(x0: np.ndarray) -> Callable:
    d = len(x0)
    Q, _ = np.linalg.qr(np.column_stack([x0, np.eye(d)]))
    B = Q[:, 1:d]
    return lambda t: _unit(x0 + B @ t)


def skew(t: np.ndarray, n: int) -> np.ndarray:
    K = np.zeros((n, n))
    K[np.triu_indices(n, 1)] = t
    return K - K.T


def orthonormalize(A: np.ndarray) -> np.ndarray:
    """Q factor with positive diagonal in R; lands in SO(n) when det A > 0."""
    Q, R = np.linalg.qr(A)
    return Q * np.sign(np.diag(R))


def rotation_chart(rho0: np.ndarray) -> Callable:
    n = rho0.shape[0]
    eye = np.eye(n)
    return lambda t: orthonormalize(rho0 @ (eye + skew(t, n)))


def random_start(sc: Scenario, rng: np.random.Generator) -> np.ndarray:
    if sc.domain == "sphere":
        return _unit(rng.standard_normal(sc.dim))
    A = rng.standard_normal((sc.dim, sc.dim))
    Q = orthonormalize(A)
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def _chart(sc: Scenario, x):
    return sphere_chart(x) if sc.domain == "sphere" else rotation_chart(x)


def _tangent_dim(sc: Scenario) -> int:
    return sc.dim - 1 if sc.domain == "sphere" else sc.dim * (sc.dim - 1) // 2


# -- local search -------------------------------------------------------------

POLISH_TARGET = 1e-26
MAX_ROUNDS = 8


def _nelder_mead(obj, n, step, evals):
    simplex = np.vstack([np.zeros(n), step * np.eye(n)])
    res = minimize(obj, np.zeros(n), method="Nelder-Mead",
                   options={"initial_simplex": simplex, "xatol": 1e-15, "fatol": 1e-30,
                            "maxfev": evals, "adaptive": n > 4})
    return res.x, res.nfev


def _fd_gradient(obj, n, step, evals):
    t = np.zeros(n)
    f = obj(t)
    used = 1
    h = 1e-7
    lr = step
    while used + 2 * n + 20 < evals:
        grad = np.array([(obj(t + h * e) - obj(t - h * e)) / (2 * h) for e in np.eye(n)])
        used += 2 * n
        gn = np.linalg.norm(grad)
        if gn == 0:
            break
        while lr > 1e-14:
            cand = t - lr * grad / gn
            fc = obj(cand)
            used += 1
            if fc < f:
                t, f = cand, fc
                lr *= 2
                break
            lr /= 2
        else:
            break
    return t, used


def local_search(sc: Scenario, x0: np.ndarray):
    """Chart-wise minimisation with re-centring; returns (point, residual, evals)."""
    x = np.array(x0, dtype=float)
    val = residual(x, sc)[0]
    step = 0.5
    evals = 0
    n = _tangent_dim(sc)
    inner = _nelder_mead if sc.method == "nelder-mead" else _fd_gradient
    for _ in range(MAX_ROUNDS):
        if val <= POLISH_TARGET or evals >= sc.max_evals:
            break
        chart = _chart(sc, x)
        t, used = inner(lambda t: residual(chart(t), sc)[0], n, step,
                        max(100, (sc.max_evals - evals) // 2))
        evals += used
        xn = chart(t)
        vn = residual(xn, sc)[0]
        if vn >= val:
            step *= 0.1
            if step < 1e-10:
                break
            continue
        moved = float(np.linalg.norm(t))
        improved_enough = vn < 0.5 * val
        x, val = xn, vn
        step = max(min(step, 10 * moved), 1e-8)
        if not improved_enough and val > sc.eps_solve:
            break
    return x, val, evals


@dataclass
class SolverResult:
    witness: list
    residual: float
    witness_subset: List[int]
    common_value: object
    starts_attempted: int
    converged_starts: int
    best_start: int
    existence: dict
    status: str
    target: str
    seed: int
    wall_time: float = 0.0
    evaluations: int = 0
    theta: Optional[float] = None

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "status": self.status,
            "target": self.target,
            "witness": self.witness,
            "residual": self.residual,
            "witness_subset": self.witness_subset,
            "common_value": self.common_value,
            "starts_attempted": self.starts_attempted,
            "converged_starts": self.converged_starts,
            "best_start": self.best_start,
            "existence": self.existence,
            "seed": self.seed,
            "evaluations": self.evaluations,
        }
        if self.theta is not None:
            out["theta"] = self.theta
        if timing:
            out["wall_time"] = self.wall_time
        return out


def _run_start(args):
    sc, idx, x0 = args
    x, val, evals = local_search(sc, x0)
    return idx, x, val, evals


def _as_list(x):
    return np.asarray(x, dtype=float).tolist()


def build_result(sc: Scenario, x, idx: int, starts: int, converged: int, evals: int,
                 t0: float, status: Optional[str] = None, theta=None) -> SolverResult:
    r, S = residual(x, sc)
    r = float(r)
    if status is None:
        status = "converged" if r <= sc.eps_solve else "budget_exhausted"
    return SolverResult(
        witness=_as_list(x), residual=r, witness_subset=list(S),
        common_value=common_value(x, sc, S), starts_attempted=starts,
        converged_starts=converged, best_start=idx, existence=sc.existence(),
        status=status, target=sc.target, seed=sc.seed,
        wall_time=time.perf_counter() - t0, evaluations=evals, theta=theta)


def solve(sc: Scenario, workers: int = 1) -> SolverResult:
    """Multi-start local minimisation of the scenario residual.

    Raises :class:`BudgetExhausted` (carrying the best attempt) when no start
    reaches ``sc.eps_solve``.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(sc.seed)
    jobs = [(sc, i, random_start(sc, rng)) for i in range(sc.starts)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            outcomes = list(pool.map(_run_start, jobs))
    else:
        outcomes = [_run_start(j) for j in jobs]
    outcomes.sort(key=lambda o: o[0])
    converged = sum(1 for o in outcomes if o[2] <= sc.eps_solve)
    evals = sum(o[3] for o in outcomes)
    idx, x, _, _ = min(outcomes, key=lambda o: (o[2], o[0]))
    result = build_result(sc, x, idx, len(outcomes), converged, evals, t0)
    log.info("solve: %d/%d starts converged, best residual %.3e", converged, len(outcomes),
             result.residual)
    recomputed = float(residual(np.asarray(result.witness), sc)[0])
    if abs(recomputed - result.residual) > sc.verify_tol:
        raise AssertionError("witness does not reproduce its residual")
    if converged == 0:
        raise BudgetExhausted(result)
    return result


# -- Knaster problem for q = 3 ----------------------------------------------------


def rotation2(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def knaster_scan_1d(sc: Scenario, grid: int = 3600, tol: float = 1e-12) -> SolverResult:
    """Grid scan over SO(2) with bisection on sign changes of f(rho g x) - f(rho g^2 x)."""
    if sc.q != 3 or sc.target != "knaster":
        raise ScenarioError("the one-dimensional scan needs a knaster scenario with q = 3")
    t0 = time.perf_counter()

    def gap(theta):
        _, rest = _knaster_values(rotation2(theta), sc)
        return rest[0] - rest[1]

    def hinge_ok(theta):
        at_e, rest = _knaster_values(rotation2(theta), sc)
        return at_e <= min(rest) + tol

    thetas = np.linspace(0.0, 2 * math.pi, grid, endpoint=False)
    values = [gap(t) for t in thetas]
    roots = []
    for i, t in enumerate(thetas):
        a, fa = t, values[i]
        b = thetas[i + 1] if i + 1 < grid else 2 * math.pi
        fb = values[i + 1] if i + 1 < grid else values[0]
        if abs(fa) <= tol:
            roots.append(a)
            continue
        if fa * fb < 0:
            for _ in range(200):
                mid = 0.5 * (a + b)
                fm = gap(mid)
                if fm == 0 or b - a < 1e-15:
                    break
                if fa * fm < 0:
                    b = mid
                else:
                    a, fa = mid, fm
            roots.append(0.5 * (a + b))
    for theta in roots:
        if hinge_ok(theta):
            return build_result(sc, rotation2(theta), 0, 1, 1, grid, t0,
                                status="converged", theta=float(theta % (2 * math.pi)))
    raise ResolutionTooCoarse(f"no admissible sign change on a grid of {grid} angles")


def knaster_closed_form_theta(u: Sequence[float], base_point: Sequence[float]) -> float:
    """For f = <u, .> on the circle the solution turns the base point onto -u."""
    ang_target = math.atan2(-u[1], -u[0])
    ang_base = math.atan2(base_point[1], base_point[0])
    return (ang_target - ang_base) % (2 * math.pi)


def knaster_scenario(q_or_group, f: MapSpec, base_point, **kw) -> Scenario:
    G = q_or_group
    rep = ig_permutation(G)
    return Scenario(domain="rotation", dim=G.order - 1, group=G, action=rep, map=f,
                    target="knaster", k=G.order - 1, base_point=np.asarray(base_point, float), **kw)
