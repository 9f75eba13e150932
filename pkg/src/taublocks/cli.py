"""Command-line surface.

All commands read parameter points from JSON files mapping symbol names to
exact rationals ("p/q" strings), write a single JSON document to standard
output, and exit 0 on success or pass, 1 on verification failure, 2 on
usage or domain errors.  Expensive exact computations are cached in a
content-addressed directory (env var TAUBLOCKS_CACHE)."""

from __future__ import annotations

import argparse
import json
import random
import sys
from decimal import Decimal
from typing import Any, Dict

from gmpy2 import mpq

from .cache import Cache, job_key
from .channels import ChannelSeries, EmptyTrustedWindow
from .gammafun import DEFAULT_DIGITS
from .linalg import InconsistentSystem, SingularMatrix
from .nekrasov import (NekrasovKind, agt_equivalence_check, block_sum,
                       degeneration_limit_check)
from .partitions import InvalidPartition
from .scalars import DomainError, NonGenericPoint, ParameterPoint, random_point
from .skew import solve_c, verify_observed
from .tau import TauFamily, ode_residual, tau_series
from .verma import DegenerateWeight, four_point_block
from .whittaker import icb_series


def _scalar_str(x) -> str:
    if isinstance(x, Decimal):
        return str(x)
    return str(mpq(x))


def load_point(path: str) -> ParameterPoint:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read point file: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"point file is not valid JSON: {exc}")
    try:
        return ParameterPoint.from_json(data)
    except ValueError as exc:
        raise UsageError(str(exc))


class UsageError(Exception):
    pass


def _series_json(series: ChannelSeries) -> Dict[str, Any]:
    return {
        "degree": series.degree,
        "channels": {str(n): {str(k): _scalar_str(v) for k, v in sorted(cells.items())}
                     for n, cells in sorted(series.data.items())},
        "trusted_window": {str(n): lo for n, lo in sorted(series.trust_lo.items())
                           if lo <= (series.top_bound(n) if series.top_bound(n) is not None else lo - 1)},
    }


def cmd_block(args, cache: Cache) -> int:
    point = load_point(args.point)
    key = job_key("block", {"point": point.to_json(), "order": args.order})

    def compute():
        t0, tt = point.get("theta_0"), point.get("theta_t")
        t1, ti, sg = point.get("theta_1"), point.get("theta_inf"), point.get("sigma")
        coeffs = four_point_block(t0 ** 2, tt ** 2, sg ** 2, t1 ** 2, ti ** 2,
                                  1, args.order)
        return {"point": point.to_json(),
                "coefficients": [_scalar_str(x) for x in coeffs]}

    print(json.dumps(cache.get_or_compute(key, compute), indent=1, sort_keys=True))
    return 0


def cmd_icb(args, cache: Cache) -> int:
    point = load_point(args.point)
    key = job_key("icb", {"point": point.to_json(), "rank": args.rank,
                          "order": args.order})

    def compute():
        tt, th, b = point.get("theta_t"), point.get("theta"), point.get("beta")
        if args.rank == 1:
            t0 = point.get("theta_0")
            series = icb_series(1, t0 ** 2, tt ** 2, (th, mpq(1, 4)), b,
                                scale=1, order=args.order)
        else:
            series = icb_series(2, None, tt ** 2, (th, mpq(0), mpq(1, 4)), b / 2,
                                scale=1, order=args.order)
        return {"point": point.to_json(),
                "t_exponent": _scalar_str(series.texp),
                "exp_rates": {str(j): _scalar_str(v) for j, v in series.rates.items()},
                "coefficients": [_scalar_str(mpq(x)) for x in series.coeffs]}

    print(json.dumps(cache.get_or_compute(key, compute), indent=1, sort_keys=True))
    return 0


def cmd_nekrasov(args, cache: Cache) -> int:
    point = load_point(args.point)
    kind = NekrasovKind(args.kind)
    key = job_key("nekrasov-sum", {"point": point.to_json(), "kind": kind.value,
                                   "order": args.order})

    def compute():
        coeffs = block_sum(kind, point, args.order, threads=args.threads)
        return {str(k): _scalar_str(v) for k, v in enumerate(coeffs)}

    print(json.dumps(cache.get_or_compute(key, compute), indent=1, sort_keys=True))
    return 0


def cmd_tau(args, cache: Cache) -> int:
    point = load_point(args.point)
    family = TauFamily(args.family)
    key = job_key("tau-build", {"point": point.to_json(), "family": family.value,
                                "nmax": args.nmax, "order": args.order,
                                "digits": args.digits, "mode": args.mode})

    def compute():
        series = tau_series(family, point, args.nmax, args.order,
                            digits=args.digits, mode=args.mode)
        doc = {"point": point.to_json(), "family": family.value,
               "mode": args.mode, **_series_json(series)}
        if args.mode == "bigfloat":
            doc["digits"] = args.digits
        return doc

    print(json.dumps(cache.get_or_compute(key, compute), indent=1, sort_keys=True))
    return 0


def cmd_verify_agt(args, cache: Cache) -> int:
    rng = random.Random(args.seed)
    points = []
    if args.point:
        points.append(load_point(args.point))
    syms = ("theta_0", "theta_t", "sigma", "theta_1", "theta_inf")
    while len(points) < args.trials:
        points.append(random_point(rng, syms, bound=16))
    results = []
    ok = True
    for p in points:
        try:
            rep = agt_equivalence_check(p, args.order, threads=args.threads)
        except (NonGenericPoint, DegenerateWeight, SingularMatrix):
            results.append({"point": p.to_json(), "skipped": True})
            continue
        ok = ok and rep.equal
        results.append({"point": p.to_json(), "equal": rep.equal})
    print(json.dumps({"pass": ok, "order": args.order, "results": results},
                     indent=1, sort_keys=True))
    return 0 if ok else 1


def cmd_verify_ode(args, cache: Cache) -> int:
    point = load_point(args.point)
    family = TauFamily(args.family)
    mode = args.mode
    digits = args.digits if mode == "bigfloat" else None
    tau = tau_series(family, point, args.nmax, args.order,
                     digits=args.digits, mode=mode)
    rep = ode_residual(family, tau, point, digits=digits)
    if mode == "exact":
        passed = rep.exact_zero
        threshold = "0"
    else:
        bound = Decimal(10) ** -(args.digits - 15)
        passed = abs(rep.max_abs) < bound
        threshold = str(bound)
    doc = {
        "pass": passed,
        "family": family.value,
        "mode": mode,
        "threshold": threshold,
        "max_abs": _scalar_str(rep.max_abs),
        "residual": {str(n): {str(k): _scalar_str(v)
                              for (m, k), v in sorted(rep.cells.items()) if m == n}
                     for n in sorted({m for (m, _) in rep.cells})},
    }
    print(json.dumps(doc, indent=1, sort_keys=True))
    return 0 if passed else 1


def cmd_verify_degeneration(args, cache: Cache) -> int:
    point = load_point(args.point)
    parent, child = NekrasovKind(args.parent), NekrasovKind(args.child)
    lams = [mpq(x) for x in args.scales.split(",")]
    rep = degeneration_limit_check(parent, child, point, lams, args.order,
                                   threads=args.threads)
    ratios = {}
    ok = True
    for k in range(1, args.order + 1):
        row = []
        for i in range(len(lams) - 1):
            a, b = rep.deviations[i][k], rep.deviations[i + 1][k]
            if b == 0:
                # exactly-zero deviations (symmetry-accelerated limits) pass
                row.append(None)
                if a != 0:
                    ok = False
                continue
            row.append(float(a / b))
        ratios[str(k)] = row
        decade = float(lams[1] / lams[0])
        for r in row:
            # contraction must be at least ~one power of the scale per
            # decade; faster (symmetry-accelerated) contraction also passes
            if r is not None and r < 0.8 * decade:
                ok = False
    print(json.dumps({"pass": ok,
                      "scales": [str(x) for x in lams],
                      "deviation_ratios": ratios}, indent=1, sort_keys=True))
    return 0 if ok else 1


def cmd_conjecture_solve(args, cache: Cache) -> int:
    key = job_key("solve-c", {"order": args.order, "seed": args.seed})

    def compute():
        rep = solve_c(args.order, seed=args.seed)
        table = {"|".join(",".join(map(str, part)) for part in k): _scalar_str(v)
                 for k, v in sorted(rep.determined.items())}
        return {"order": args.order, "consistent": rep.consistent,
                "rank": rep.rank, "nullity": rep.nullity,
                "determined": table,
                "integer_solutions": len(rep.integer_solutions)}

    doc = cache.get_or_compute(key, compute)
    print(json.dumps(doc, indent=1, sort_keys=True))
    return 0 if doc["consistent"] else 1


def cmd_conjecture_observed(args, cache: Cache) -> int:
    reports = [solve_c(k, seed=args.seed) for k in range(1, args.max_order + 1)]
    obs = verify_observed(reports)
    doc = {"pass": obs.ok,
           "matches": len(obs.matches),
           "mismatches": [str(m) for m in obs.mismatches],
           "undetermined": len(obs.undetermined),
           "symmetry_failures": [str(s) for s in obs.symmetry_failures]}
    print(json.dumps(doc, indent=1, sort_keys=True))
    return 0 if obs.ok else 1


def cmd_cache(args, cache: Cache) -> int:
    if args.action == "stats":
        print(json.dumps(cache.stats(), indent=1, sort_keys=True))
    else:
        removed = cache.clear()
        print(json.dumps({"removed": removed}, indent=1, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="taublocks")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, point=True):
        if point:
            p.add_argument("--point", required=True, help="JSON symbol map")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("block", help="four-point block coefficients at c=1")
    p.add_argument("--order", type=int, required=True)
    common(p)
    p.set_defaults(fn=cmd_block)

    p = sub.add_parser("icb", help="irregular block series")
    p.add_argument("--rank", type=int, choices=(1, 2), required=True)
    p.add_argument("--order", type=int, required=True)
    common(p)
    p.set_defaults(fn=cmd_icb)

    p = sub.add_parser("nekrasov", help="pair-sum series")
    psub = p.add_subparsers(dest="action", required=True)
    ps = psub.add_parser("sum")
    ps.add_argument("--kind", required=True,
                    choices=[k.value for k in NekrasovKind])
    ps.add_argument("--order", type=int, required=True)
    common(ps)
    ps.set_defaults(fn=cmd_nekrasov)

    p = sub.add_parser("tau", help="tau-function channel series")
    psub = p.add_subparsers(dest="action", required=True)
    ps = psub.add_parser("build")
    ps.add_argument("--family", required=True, choices=[f.value for f in TauFamily])
    ps.add_argument("--nmax", type=int, default=0)
    ps.add_argument("--order", type=int, required=True)
    ps.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
    ps.add_argument("--mode", choices=("exact", "bigfloat"), default="exact")
    common(ps)
    ps.set_defaults(fn=cmd_tau)

    p = sub.add_parser("verify", help="verification oracles")
    psub = p.add_subparsers(dest="action", required=True)
    ps = psub.add_parser("agt")
    ps.add_argument("--order", type=int, default=4)
    ps.add_argument("--trials", type=int, default=3)
    ps.add_argument("--point", default=None)
    ps.add_argument("--threads", type=int, default=1)
    ps.add_argument("--seed", type=int, default=0)
    ps.set_defaults(fn=cmd_verify_agt)
    ps = psub.add_parser("ode")
    ps.add_argument("--family", required=True, choices=("pv", "piv"))
    ps.add_argument("--nmax", type=int, default=0)
    ps.add_argument("--order", type=int, required=True)
    ps.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
    ps.add_argument("--mode", choices=("exact", "bigfloat"), default="exact")
    common(ps)
    ps.set_defaults(fn=cmd_verify_ode)
    ps = psub.add_parser("degeneration")
    ps.add_argument("--parent", required=True, choices=[k.value for k in NekrasovKind])
    ps.add_argument("--child", required=True, choices=[k.value for k in NekrasovKind])
    ps.add_argument("--order", type=int, default=3)
    ps.add_argument("--scales", default="100,1000,10000")
    common(ps)
    ps.set_defaults(fn=cmd_verify_degeneration)

    p = sub.add_parser("conjecture", help="skew-coefficient reconstruction")
    psub = p.add_subparsers(dest="action", required=True)
    ps = psub.add_parser("solve-c")
    ps.add_argument("--order", type=int, required=True)
    ps.add_argument("--seed", type=int, default=0)
    ps.set_defaults(fn=cmd_conjecture_solve)
    ps = psub.add_parser("observed")
    ps.add_argument("--max-order", type=int, default=4)
    ps.add_argument("--seed", type=int, default=0)
    ps.set_defaults(fn=cmd_conjecture_observed)

    p = sub.add_parser("cache", help="result cache maintenance")
    p.add_argument("action", choices=("stats", "clear"))
    p.set_defaults(fn=cmd_cache)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cache = Cache()
    try:
        return args.fn(args, cache)
    except UsageError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    except (NonGenericPoint, DomainError, DegenerateWeight, InvalidPartition,
            EmptyTrustedWindow, InconsistentSystem, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
