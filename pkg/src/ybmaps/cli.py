"""Command-line front end: list, eval, verify, orbit, report.

Exit codes: 0 success, 1 check failure or runtime error (singular locus,
IO), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .catalog import REGISTRY, MapDescriptor, PairState, Registry
from .errors import (
    ComplexRootsError,
    DegenerateConstraintError,
    NearSingularAbort,
    UnknownNameError,
    YBError,
)
from .exact import to_exact
from .leaves import (
    BranchSwitchError,
    eval_dihedral4_implicit,
    eval_dnls4_implicit,
    implicit_yb_residuals,
    iterate_orbit,
    max_drift,
    orbit_csv,
)
from .reporting import build_report, context_sections, dumps, map_section, report_ok
from .verify import CHECKS, run_check, to_jsonable

IMPLICIT = {"dnls4-implicit": ("dnls", eval_dnls4_implicit),
            "dihedral4-implicit": ("dihedral", eval_dihedral4_implicit)}


class UsageError(Exception):
    pass


def declared_checks(desc: MapDescriptor) -> list[str]:
    out = ["yb"]
    if desc.lax:
        out += ["lax", "det", "trace"]
    out += ["reversible", "non-involutive"]
    if desc.invariants or desc.casimirs:
        out.append("invariants")
    if desc.poisson:
        out += ["poisson", "involution", "casimir", "rank"]
    return out + ["jacobian"]


def _summary(desc: MapDescriptor) -> dict:
    return {"name": desc.name, "dim": desc.dim, "params": desc.param_arity,
            "lax": desc.lax is not None, "poisson": desc.poisson is not None,
            "checks": declared_checks(desc)}


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


# ---------------------------------------------------------------- parsing helpers

def _scalar(text: str, use_float: bool):
    text = text.strip()
    try:
        if use_float:
            return float(to_exact(text)) if "/" in text else float(text)
        return to_exact(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise UsageError(f"cannot parse {text!r} as a {'float' if use_float else 'rational p/q'}")


def _vector(text: str | None, use_float: bool, flag: str) -> tuple:
    if text is None:
        raise UsageError(f"{flag} is required")
    return tuple(_scalar(t, use_float) for t in text.split(","))


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


def _tuple(vs) -> str:
    return "(" + ", ".join(_fmt(v) for v in vs) + ")"


def _map(args, registry: Registry) -> MapDescriptor:
    name = args.map_pos or args.map
    if not name:
        raise UsageError("a map name is required")
    try:
        return registry.get(name, getattr(args, "n", None))
    except UnknownNameError as e:
        raise UsageError(str(e))


def _state(args, desc: MapDescriptor, use_float: bool) -> PairState:
    x = _vector(args.x, use_float, "--x")
    y = _vector(args.y, use_float, "--y")
    h = desc.half_dim - desc.n_aux
    if len(x) != h or len(y) != h:
        raise UsageError(f"{desc.name} takes {h} components in --x and --y")
    aux = None
    if desc.n_aux:
        if args.X is None or args.Y is None:
            raise UsageError(f"{desc.name} needs --X and --Y")
        aux = (_scalar(args.X, use_float), _scalar(args.Y, use_float))
    params = None
    if desc.parametric:
        if args.a is None or args.b is None:
            raise UsageError(f"{desc.name} needs --a and --b")
        params = (_scalar(args.a, use_float), _scalar(args.b, use_float))
    return PairState(x, y, aux, params)


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------- commands

def cmd_list(args, registry: Registry) -> int:
    rows = [_summary(d) for d in registry]
    if args.format == "json":
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
        return 0
    lines = [f"{r['name']} dim={r['dim']} params={r['params']} lax={_yn(r['lax'])} "
             f"poisson={_yn(r['poisson'])} checks={','.join(r['checks'])}" for r in rows]
    _emit("".join(line + "\n" for line in lines), args.out)
    return 0


def _image_text(fmt: str, u, v, uaux=None, vaux=None) -> str:
    if fmt == "json":
        d = {"u": list(u), "v": list(v)}
        if uaux is not None:
            d.update(U=uaux, V=vaux)
        return json.dumps(to_jsonable(d)) + "\n"
    text = f"u = {_tuple(u)}; v = {_tuple(v)}"
    if uaux is not None:
        text += f"; U = {_fmt(uaux)}; V = {_fmt(vaux)}"
    return text + "\n"


def cmd_eval(args, registry: Registry) -> int:
    name = args.map_pos or args.map
    if name in IMPLICIT:
        _, fn = IMPLICIT[name]
        x, y = _vector(args.x, True, "--x"), _vector(args.y, True, "--y")
        if len(x) != 2 or len(y) != 2 or args.a is None or args.b is None:
            raise UsageError(f"{name} needs two components in --x, --y and both --a, --b")
        img = fn(PairState(x, y), _scalar(args.a, True), _scalar(args.b, True), args.branch)
        _emit(_image_text(args.format, img.x, img.y), args.out)
        return 0
    desc = _map(args, registry)
    img = desc.evaluate(_state(args, desc, args.float))
    if img.aux is None:
        _emit(_image_text(args.format, img.x, img.y), args.out)
    else:
        _emit(_image_text(args.format, img.x, img.y, *img.aux), args.out)
    return 0


def _checks(args) -> list[str]:
    if not args.checks:
        return list(CHECKS)
    names = [c.strip() for c in args.checks.split(",") if c.strip()]
    bad = [c for c in names if c not in CHECKS]
    if bad:
        raise UsageError(f"unknown check(s): {', '.join(bad)}; known: {', '.join(CHECKS)}")
    return names


def _verify_implicit(args, name: str) -> int:
    kind, _ = IMPLICIT[name]
    res = implicit_yb_residuals(kind, args.trials, args.seed, args.branch)
    ok = res["max"] <= args.tolerance
    doc = {"name": name, "trials": args.trials, "seed": args.seed, "tolerance": args.tolerance,
           "max_residual": res["max"], "rejected": res["rejected"],
           "status": "pass" if ok else "fail"}
    if args.format == "json":
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        _emit(f"{name} yb-residual max={res['max']:.3e} tol={args.tolerance:g} "
              f"trials={args.trials} rejected={res['rejected']} {doc['status']}\n", args.out)
    return 0 if ok else 1


def cmd_verify(args, registry: Registry) -> int:
    name = args.map_pos or args.map
    if name in IMPLICIT:
        return _verify_implicit(args, name)
    desc = _map(args, registry)
    reports = [run_check(desc, c, args.trials, args.seed) for c in _checks(args)]
    ok = all(r.ok for r in reports)
    if args.format == "json":
        doc = {"version": "1", "seed": args.seed, "trials": args.trials,
               "maps": [map_section(desc, reports)]}
        doc.update(context_sections(args.trials, args.seed))
        _emit(dumps(doc), args.out)
    else:
        lines = []
        for r in reports:
            line = f"{desc.name} {r.check}: {r.status} ({r.failures}/{r.trials} failures)"
            if r.reason:
                line += f" - {r.reason}"
            if r.status == "fail" and r.first_counterexample is not None:
                line += f"\n  counterexample: {to_jsonable(r.first_counterexample)}"
            lines.append(line)
        _emit("".join(line + "\n" for line in lines), args.out)
    return 0 if ok else 1


def cmd_orbit(args, registry: Registry) -> int:
    desc = _map(args, registry)
    use_float = args.float or args.precision is not None
    state = _state(args, desc, use_float and args.precision is None)
    arithmetic = "exact"
    if args.precision is not None:
        arithmetic = "mp"
    elif args.float:
        arithmetic = "float"
    status = 0
    try:
        records = iterate_orbit(desc, state, args.steps, arithmetic=arithmetic,
                                dps=args.precision or 50, tol=args.tolerance)
    except NearSingularAbort as e:
        print(f"error: {e}", file=sys.stderr)
        records, status = e.records, 1
    if args.format == "csv":
        _emit(orbit_csv(desc, records), args.out)
    elif args.format == "json":
        names = desc.invariant_names() + [c for c, _ in desc.casimirs]
        doc = {"map": desc.name, "steps": len(records) - 1, "arithmetic": arithmetic,
               "max_drift": dict(zip(names, (_fmt(d) for d in max_drift(records))))}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        names = desc.invariant_names() + [c for c, _ in desc.casimirs]
        drift = ", ".join(f"{n}={_fmt(d)}" for n, d in zip(names, max_drift(records)))
        _emit(f"{desc.name}: {len(records) - 1} steps ({arithmetic}); max drift {drift}\n",
              args.out)
    return status


def cmd_report(args, registry: Registry) -> int:
    doc = build_report(args.trials, args.seed, args.tolerance, registry)
    _emit(dumps(doc), args.out)
    return 0 if report_ok(doc) else 1


COMMANDS = {"list": cmd_list, "eval": cmd_eval, "verify": cmd_verify,
            "orbit": cmd_orbit, "report": cmd_report}


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ybmaps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("human", "json"), default="human"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", help="write output to this file instead of stdout")

    def point(p):
        p.add_argument("map_pos", nargs="?", metavar="MAP")
        p.add_argument("--map")
        p.add_argument("--n", type=_positive_int, help="block size for the vector maps")
        for flag in ("--x", "--y"):
            p.add_argument(flag, help="comma-separated components, e.g. 1/2,-3")
        for flag in ("--X", "--Y", "--a", "--b"):
            p.add_argument(flag)
        p.add_argument("--float", action="store_true", help="read literals as floats")

    common(sub.add_parser("list", help="list the registered maps"))

    p = sub.add_parser("eval", help="evaluate a map at one point")
    point(p)
    p.add_argument("--branch", choices=("plus", "minus"), default="plus")
    common(p)

    p = sub.add_parser("verify", help="run property checks on one map")
    p.add_argument("map_pos", nargs="?", metavar="MAP")
    p.add_argument("--map")
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--checks", help=f"comma-separated subset of {','.join(CHECKS)}")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=_positive_float, default=1e-9)
    p.add_argument("--branch", choices=("plus", "minus"), default="plus")
    common(p)

    p = sub.add_parser("orbit", help="iterate a map and monitor its invariants")
    point(p)
    p.add_argument("--steps", type=_positive_int, default=100)
    p.add_argument("--precision", type=_positive_int,
                   help="iterate with this many decimal digits (mpmath)")
    p.add_argument("--tolerance", type=_positive_float, default=1e-12,
                   help="abort when a guard comes this close to zero")
    common(p, ("human", "json", "csv"), "csv")

    p = sub.add_parser("report", help="run every check on every map, as JSON")
    p.add_argument("--all", action="store_true", help="all maps (the default)")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=_positive_float, default=1e-9)
    p.add_argument("--out")
    return parser


def main(argv=None, registry: Registry | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    registry = REGISTRY if registry is None else registry
    try:
        return COMMANDS[args.command](args, registry)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except ZeroDivisionError as e:
        print(str(e) if isinstance(e, YBError) else f"singular locus: {e}", file=sys.stderr)
        return 1
    except (ComplexRootsError, DegenerateConstraintError, BranchSwitchError, YBError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
