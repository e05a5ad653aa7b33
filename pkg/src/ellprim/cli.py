"""Command-line front end.

Exit codes: 0 success, 1 failed assertion, 2 usage error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import bounds, primitive, scan, sunits, verify
from .errors import (
    DomainError,
    IncompleteFactorization,
    InvalidParams,
    NotUnitary,
    PreconditionViolation,
)
from .factor import Budget
from .quadratic import FrobeniusParams, gamma_class
from .sequence import PsiFactorCache, cyclo_norm, order_value

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

_BOOL_FLAGS = {"json", "resume"}


def _int_list(s: str) -> list[int]:
    out = []
    for part in str(s).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; '#' starts a comment, keys use flag spelling."""
    cfg = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        k, v = (t.strip() for t in line.split("=", 1))
        k = k.lstrip("-").replace("-", "_")
        cfg[k] = v.lower() in ("1", "true", "yes", "on") if k in _BOOL_FLAGS else v
    return cfg


def _budget(args) -> Budget:
    b = Budget(time_ms=args.budget_ms)
    if args.budget_iterations is not None:
        b = dataclasses.replace(b, rho_iterations=args.budget_iterations)
    return b


def _params(args) -> FrobeniusParams:
    return FrobeniusParams(args.q, args.a)


def _emit(args, obj: dict, text: str) -> None:
    print(json.dumps(obj) if args.json else text)


# -- commands ----------------------------------------------------------------


def cmd_order(args) -> int:
    params = _params(args)
    gc = gamma_class(params)
    if gc.degenerate:
        print(
            f"warning: gamma = conj(alpha)/alpha is a root of unity of order {gc.order_of_unity} "
            f"(a^2/q = {params.a**2 // params.q})",
            file=sys.stderr,
        )
    cache = PsiFactorCache(params, _budget(args))
    ov = order_value(params, args.n)
    rep = primitive.primitive_primes(params, args.n, cache=cache)
    f = rep.factored
    psi = cyclo_norm(params, args.n)
    obj = {
        "q": params.q,
        "a": params.a,
        "n": args.n,
        "t_n": ov.t_n,
        "N_n": str(ov.N_n),
        "Psi_n": str(psi),
        "factors": f.summary(),
        "complete": f.complete,
        "primitive": [{"p": r.p, "kind": r.kind} for r in rep.primitive],
        "gamma_degenerate": gc.degenerate,
    }
    prims = ", ".join(f"{r.p} ({r.kind})" for r in rep.primitive) or "none"
    text = "\n".join(
        [
            f"q = {params.q}, a = {params.a}, n = {args.n}",
            f"t_n = {ov.t_n}",
            f"N_n = {ov.N_n} = {f.summary()}",
            f"Psi_n = {psi}",
            f"primitive primes: {prims}" + ("" if f.complete else " (factorization incomplete)"),
        ]
    )
    _emit(args, obj, text)
    return EXIT_OK if f.complete else EXIT_BUDGET


def _scan_config(args) -> scan.ScanConfig:
    return scan.ScanConfig(
        q_values=tuple(_int_list(args.q)),
        a_values=tuple(_int_list(args.a)) if args.a else None,
        n_lo=args.n_min,
        n_hi=args.n_max,
        rho_iterations=args.budget_iterations,
        budget_ms=args.budget_ms,
        fmt="json" if args.json else args.format,
        output=args.output,
        precision_bits=args.precision_bits,
        seed=args.seed,
        threads=args.threads,
    )


def cmd_scan(args) -> int:
    config = _scan_config(args)
    if config.output:
        scan.run_scan(config, resume=args.resume)
        rows = scan.read_rows(config.output, config.fmt)
    else:
        rows = list(scan.iter_rows(config))
        sys.stdout.write(scan.encode_rows(rows, config.fmt, header=True))
    partial = sum(not r.complete for r in rows)
    if partial:
        print(f"{partial} of {len(rows)} rows not fully factored", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, seed=args.seed, n_max=args.n_max, budget=_budget(args))
    if args.json:
        for r in results:
            print(json.dumps({"name": r.name, "checked": r.checked, "failures": len(r.failures),
                              "status": r.status, "witness": repr(r.failures[0]) if r.failures else None}))
    else:
        print(verify.format_table(results))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def cmd_sunit_theta(args) -> int:
    inst = sunits.SUnitInstance(args.x, tuple(_int_list(args.S)))
    count = sunits.theta_exact(inst)
    rows, failed = [], False
    for variant in sunits.VARIANTS:
        if not sunits.applicable(inst, variant):
            rows.append({"variant": variant, "bound": None, "holds": "not_applicable"})
            continue
        holds = sunits.theta_dominates(inst, variant, count, prec=args.precision_bits)
        failed |= holds is not True
        rows.append({"variant": variant, "log_bound": sunits.theta_bound_exponent(inst, variant), "holds": holds})
    note = ""
    if inst.x < 7:
        note = "x < 7: for large_primes the proof handles this range separately"
    obj = {"x": inst.x, "S": list(inst.S), "k": inst.k, "theta": count, "bounds": rows, "note": note}
    lines = [f"Theta({inst.x:g}, {list(inst.S)}) = {count}"]
    for r in rows:
        if r["holds"] == "not_applicable":
            lines.append(f"  {r['variant']:<13} not applicable")
        else:
            lines.append(f"  {r['variant']:<13} log bound = {r['log_bound']:.6g}  holds = {r['holds']}")
    if note:
        lines.append(note)
    _emit(args, obj, "\n".join(lines))
    return EXIT_FAIL if failed else EXIT_OK


def cmd_crt_class(args) -> int:
    c = primitive.crt_class(args.n, args.d, args.branch)
    obj = dataclasses.asdict(c)
    _emit(args, obj, f"p = {c.residue} mod {c.modulus}  (n = {c.n}, d = {c.d}, branch {c.parity_branch})")
    return EXIT_OK


def cmd_bound_report(args) -> int:
    kind = args.kind
    if kind in ("stewart-rat", "stewart-quad", "main"):
        if kind == "stewart-rat":
            v = bounds.stewart_rat_bound(args.Np, args.d, args.h, args.n)
        elif kind == "stewart-quad":
            v = bounds.stewart_quad_bound(args.p, args.h, args.n)
        else:
            v = bounds.main_theorem_bound(args.n)
        _emit(args, {"kind": kind, "value": v}, f"{kind}: {v!r}")
        return EXIT_OK
    params = _params(args)
    if kind == "thresholds":
        t = bounds.thresholds(params, args.d)
        obj = {"n0": repr(t.n0), "p0_quad": repr(t.p0_quad), "p0_rat": repr(t.p0_rat), "D_K": t.D_K}
        _emit(args, obj, "\n".join(f"{k} = {v}" for k, v in obj.items()))
        return EXIT_OK
    budget = _budget(args)
    if kind == "phin":
        reports = [bounds.phin_log_check(params, args.n, args.precision_bits)]
    elif kind == "arith":
        reports = bounds.arith_inequalities(args.n)
    elif kind == "case-split":
        reports = [bounds.case_split_report(params, args.n, budget)]
    elif kind == "pprime":
        reports = [bounds.pprime_bound_report(params, args.n, budget)]
    else:  # stewart-quad-observed
        reports = [bounds.stewart_quad_report(params, args.p, args.n)]
    for r in reports:
        if args.json:
            print(json.dumps(r.row(), default=str))
        else:
            print(f"{r.name:<28} lhs={r.lhs!s:<22} rhs={r.rhs!s:<22} holds={r.holds!s:<14} "
                  f"proven-range={r.in_proven_range}")
    return EXIT_FAIL if any(r.violated for r in reports) else EXIT_OK


# -- parser ------------------------------------------------------------------


_GLOBAL_KEYS = {"json", "budget_ms", "budget_iterations", "precision_bits", "seed", "config"}


def _common(sub: bool) -> argparse.ArgumentParser:
    # Subcommand copies use SUPPRESS so they never overwrite a flag given
    # before the subcommand name.
    def d(v):
        return argparse.SUPPRESS if sub else v

    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    c.add_argument("--budget-ms", type=int, default=d(None), help="wall-clock cap per factorization")
    c.add_argument("--budget-iterations", type=int, default=d(None), help="rho iteration cap")
    c.add_argument("--precision-bits", type=int, default=d(128))
    c.add_argument("--seed", type=int, default=d(0))
    c.add_argument("--config", default=d(None), help="key = value file; flags override it")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common(sub=True)
    p = argparse.ArgumentParser(prog="ellprim", parents=[_common(sub=False)], description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def qa(sp, need_n=True):
        sp.add_argument("--q", type=int, required=True)
        sp.add_argument("--a", type=int, required=True)
        if need_n:
            sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("order", parents=[common], help="t_n, N_n, Psi_n and primitive primes")
    qa(sp)
    sp.set_defaults(func=cmd_order)

    sp = sub.add_parser("scan", parents=[common], help="table over a (q, a, n) grid")
    sp.add_argument("--q", default="2..5", help="list like 2,3 or 2..5")
    sp.add_argument("--a", default=None, help="explicit a values (default: all admissible)")
    sp.add_argument("--n-min", type=int, default=1)
    sp.add_argument("--n-max", type=int, default=30)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output", default=None)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--no-resume", dest="resume", action="store_false")
    sp.set_defaults(func=cmd_scan, resume=True)

    sp = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    sp.add_argument("suite", choices=("pprim", "sunits", "bounds", "all"))
    sp.add_argument("--n-max", type=int, default=None, help="range of the exhaustive arithmetic sweep")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sunit-theta", parents=[common], help="exact S-unit count and bounds")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--S", default="", help="comma separated primes")
    sp.set_defaults(func=cmd_sunit_theta)

    sp = sub.add_parser("crt-class", parents=[common], help="residue class for a unitary divisor")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--branch", choices=("odd", "3mod4", "1mod4"), default=None)
    sp.set_defaults(func=cmd_crt_class)

    sp = sub.add_parser("bound-report", parents=[common], help="evaluate one explicit inequality")
    sp.add_argument(
        "kind",
        choices=("stewart-rat", "stewart-quad", "stewart-quad-observed", "main", "thresholds",
                 "phin", "arith", "case-split", "pprime"),
    )
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--n", type=int, default=16)
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--h", type=float, default=1.0)
    sp.add_argument("--Np", type=float, default=1e6)
    sp.set_defaults(func=cmd_bound_report)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            cfg = read_config(known.config)
        except (OSError, ValueError) as e:
            print(f"ellprim: {e}", file=sys.stderr)
            return EXIT_USAGE
        parser.set_defaults(**{k: v for k, v in cfg.items() if k in _GLOBAL_KEYS})
        local = {k: v for k, v in cfg.items() if k not in _GLOBAL_KEYS}
        for action in parser._subparsers._group_actions:
            for sp in action.choices.values():
                sp.set_defaults(**local)
                for a in sp._actions:
                    if a.dest in local:
                        a.required = False
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (InvalidParams, PreconditionViolation, DomainError, NotUnitary, ValueError) as e:
        print(f"ellprim: {e}", file=sys.stderr)
        return EXIT_USAGE
    except IncompleteFactorization as e:
        print(f"ellprim: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
