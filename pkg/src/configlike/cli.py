"""Command-line entry point.

Every subcommand writes one JSON report to stdout and logs to stderr.
Exit codes: 0 all assertions pass, 1 an assertion or residual failed,
2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import List, Optional

from . import acceptance
from .actions import ActionError
from .arrangements import ArrangementError, k_equal_arrangement, v1_arrangement
from .config_spaces import DEFAULT_EPS
from .cover import cover_check
from .groups import GroupError, is_prime, make_cyclic, make_p_torus
from .homology import complement_betti
from .mapspec import MapSpecError
from .solver import (BudgetExhausted, ResolutionTooCoarse, ScenarioError, knaster_scan_1d,
                     load_scenario_file, solve)

log = logging.getLogger("configlike")

INPUT_ERRORS = (ScenarioError, MapSpecError, GroupError, ArrangementError, ActionError,
                ValueError, KeyError, FileNotFoundError, json.JSONDecodeError)


class UsageError(Exception):
    pass


def _assertion(name: str, anchor: str, passed: bool, detail=None) -> dict:
    return {"name": name, "anchor": anchor, "passed": bool(passed), "detail": detail or {}}


def _report(sub: str, params: dict, seed, assertions: List[dict], result, timing: Optional[float]):
    out = {
        "subcommand": sub,
        "parameters": params,
        "seed": seed,
        "assertions": assertions,
        "status": "pass" if all(a["passed"] for a in assertions) else "fail",
        "result": result,
    }
    if timing is not None:
        out["wall_time"] = round(timing, 3)
    return out


def _primes(text: str) -> List[int]:
    try:
        ps = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--p expects comma-separated primes, got {text!r}") from None
    if not ps or not all(is_prime(p) for p in ps):
        raise UsageError(f"--p expects primes, got {text!r}")
    return ps


def cmd_homology(args):
    if args.family == "k-equal":
        arr = k_equal_arrangement(args.q, args.k)
    else:
        if args.m is None:
            raise UsageError("--family v1 needs --m")
        arr = v1_arrangement(args.m, args.q, args.k)
    reports = [complement_betti(arr, p) for p in _primes(args.p)]
    assertions = []
    for rep in reports:
        assertions.append(_assertion(
            f"vanishing band p={rep.p}",
            "reduced homology of the complement vanishes through the claimed degree",
            rep.passed or not args.assert_connectivity,
            {"through_degree": rep.claimed_band, "holds": rep.passed,
             "enforced": args.assert_connectivity}))
        assertions.append(_assertion(f"euler p={rep.p}", "alternating Betti sum equals the Moebius count",
                                     rep.euler_check))
    params = {"family": args.family, "q": args.q, "k": args.k, "m": args.m, "p": _primes(args.p),
              "assert_connectivity": args.assert_connectivity}
    return params, 0, assertions, [r.to_dict() for r in reports]


def cmd_cover_check(args):
    if args.group == "cyclic":
        G = make_cyclic(args.q)
    else:
        p = next(d for d in range(2, args.q + 1) if args.q % d == 0)
        n, r = 0, args.q
        while r % p == 0:
            r, n = r // p, n + 1
        if r != 1:
            raise UsageError(f"q={args.q} is not a prime power")
        G = make_p_torus(p, n)
    rep = cover_check(args.q, args.k, args.samples, seed=args.seed, scalar=args.scalar,
                      group=G, eps=args.eps_c)
    anchors = {"disjoint": "U_M and U_M' are disjoint for |M| = |M'|, M != M'",
               "equivariant": "g U_M = U_{gM}",
               "cover": "W(q,k) = V_1 u ... u V_{k-1}"}
    assertions = [_assertion(k, anchors[k], v) for k, v in rep["assertions"].items()]
    params = {"q": args.q, "k": args.k, "samples": args.samples, "scalar": args.scalar,
              "group": G.label}
    return params, args.seed, assertions, rep


def _overrides(args):
    return {"seed": args.seed, "starts": args.starts, "eps_solve": args.eps_solve,
            "verify_tol": args.verify_tol, "method": args.method}


def _solve_report(sc, runner, name, anchor, timing):
    exhausted = False
    try:
        res = runner(sc)
    except BudgetExhausted as exc:
        res, exhausted = exc.best, True
    result = res.to_dict(timing=timing)
    assertions = [_assertion(name, anchor, not exhausted and res.residual <= sc.eps_solve,
                             {"residual": res.residual, "eps_solve": sc.eps_solve,
                              "existence": res.existence["flag"]})]
    params = {"scenario": sc.source, "eps_solve": sc.eps_solve, "verify_tol": sc.verify_tol}
    return params, sc.seed, assertions, result


def cmd_coincide(args):
    sc = load_scenario_file(args.scenario, **_overrides(args))
    if sc.target == "knaster":
        raise UsageError("use the knaster subcommand for knaster scenarios")
    return _solve_report(sc, lambda s: solve(s, workers=args.workers), "coincidence",
                         f"point of {sc.target} found", args.timing)


def cmd_knaster(args):
    sc = load_scenario_file(args.scenario, **_overrides(args))
    if sc.target != "knaster":
        raise UsageError("scenario target must be knaster")
    if args.scan:
        runner = knaster_scan_1d
    else:
        runner = lambda s: solve(s, workers=args.workers)  # noqa: E731
    try:
        return _solve_report(sc, runner, "knaster",
                             "rotation with f(rho g x) = c for g != e and f(rho x) <= c", args.timing)
    except ResolutionTooCoarse as exc:
        return ({"scenario": sc.source}, sc.seed,
                [_assertion("knaster", "scan found an admissible root", False, {"error": str(exc)})],
                None)


def cmd_selftest(args):
    only = None
    if args.criteria:
        only = {int(c) for c in args.criteria.split(",")}
    rows = acceptance.run_all(only=only, inject=args.inject)
    for r in rows:
        log.info(r.line())
    assertions = [r.to_dict(timing=args.timing) for r in rows]
    return {"criteria": sorted(only) if only else "all", "inject": args.inject}, 0, assertions, None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="configlike", description=__doc__.splitlines()[0])
    parser.add_argument("--json-only", action="store_true", help="suppress logs on stderr")
    parser.add_argument("--timing", action="store_true", help="include wall times in the report")
    sub = parser.add_subparsers(dest="command", required=True)

    h = sub.add_parser("homology", help="F_p Betti numbers of arrangement complements")
    h.add_argument("--family", choices=["k-equal", "v1"], required=True)
    h.add_argument("--q", type=int, required=True)
    h.add_argument("--k", type=int, required=True)
    h.add_argument("--m", type=int)
    h.add_argument("--p", default="2,3,5")
    h.add_argument("--assert-connectivity", action="store_true")
    h.set_defaults(func=cmd_homology)

    c = sub.add_parser("cover-check", help="sample-based check of the top-block cover")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--samples", type=int, default=10000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--scalar", choices=["rational", "float"], default="rational")
    c.add_argument("--group", choices=["cyclic", "p_torus"], default="cyclic")
    c.add_argument("--eps-c", type=float, default=DEFAULT_EPS)
    c.set_defaults(func=cmd_cover_check)

    for name, fn, helptext in (("coincide", cmd_coincide, "search for an orbit coincidence"),
                               ("knaster", cmd_knaster, "search for a Knaster-type rotation")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("scenario", help="scenario JSON file")
        s.add_argument("--seed", type=int)
        s.add_argument("--starts", type=int)
        s.add_argument("--eps-solve", type=float)
        s.add_argument("--verify-tol", type=float)
        s.add_argument("--method", choices=["nelder-mead", "gradient"])
        s.add_argument("--workers", type=int, default=1)
        if name == "knaster":
            s.add_argument("--scan", action="store_true", help="grid scan over SO(2) (q = 3 only)")
        s.set_defaults(func=fn)

    t = sub.add_parser("selftest", help="run the acceptance matrix")
    t.add_argument("--criteria", help="comma-separated subset, e.g. 4,5")
    t.add_argument("--inject", choices=["corrupt-group", "zero-tolerance"],
                   help="negative control: break one assumption on purpose")
    t.set_defaults(func=cmd_selftest)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
                        level=logging.CRITICAL + 1 if args.json_only else logging.INFO, force=True)
    t0 = time.perf_counter()
    try:
        params, seed, assertions, result = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    report = _report(args.command, params, seed, assertions, result,
                     time.perf_counter() - t0 if args.timing else None)
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    log.info("%s: %s", args.command, report["status"])
    return 0 if report["status"] == "pass" else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
