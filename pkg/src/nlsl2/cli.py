"""Command-line front end.

Subcommands print JSON (or CSV for ``cobweb`` and ``sweep``) on stdout, or
to ``--output``.  Exit codes: 0 success, 1 verification failure, 2 usage or
config error, 3 solver/domain failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product

import jsonschema

from . import algver, dynsys, hwsolver, qmap, repbuilder
from ._roots import RootIsolationError
from .charfunc import CharFunc, DivergenceError

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3

COMMANDS = ("analyze", "cycles", "cut", "build", "verify", "qmap", "cobweb", "sweep")

_number = {"type": "number"}
_numbers = {"type": "array", "items": _number}

FUNCTION_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["linear", "quadratic", "polynomial"]},
        "r": _number, "s": _number, "t": _number,
        "coeffs": {"type": "array", "items": _number, "minItems": 1},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "function": FUNCTION_SCHEMA,
        "d": {"type": "integer", "minimum": 1},
        "interval": {"type": "array", "items": _number, "minItems": 2, "maxItems": 2},
        "alpha": _number,
        "cycle_index": {"type": "integer", "minimum": 0},
        "mode": {"enum": [repbuilder.UNITARY, repbuilder.ALGEBRAIC]},
        "q": {"type": "number", "exclusiveMinimum": 0},
        "j": {"type": "number", "minimum": 0},
        "x0": _numbers,
        "steps": {"type": "integer", "minimum": 0},
        "t_values": _numbers, "r_values": _numbers, "s_values": _numbers,
        "d_values": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "jobs": {"type": "integer", "minimum": 1},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "input": {"type": "string"},
        "output": {"type": "string"},
    },
    "additionalProperties": False,
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument handling


def _kv_pairs(items, names):
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or key not in names:
            raise UsageError(f"expected {'/'.join(names)}=<number>, got {item!r}")
        out[key] = float(val)
    missing = [n for n in names if n not in out]
    if missing:
        raise UsageError(f"missing parameter(s) {missing}")
    return out


def _function_from_args(args) -> CharFunc | None:
    given = [a for a in ("linear", "quadratic", "poly", "func") if getattr(args, a, None)]
    if len(given) > 1:
        raise UsageError("give only one of --linear/--quadratic/--poly/--func")
    if args.linear:
        p = _kv_pairs(args.linear, ("r", "s"))
        return CharFunc.linear(p["r"], p["s"])
    if args.quadratic:
        p = _kv_pairs(args.quadratic, ("t", "r", "s"))
        return CharFunc.quadratic(p["t"], p["r"], p["s"])
    if args.poly:
        return CharFunc.polynomial(args.poly)
    if args.func:
        data = json.loads(args.func)
        jsonschema.validate(data, FUNCTION_SCHEMA)
        return CharFunc.from_dict(data)
    return None


def _apply_config(args):
    if not args.config:
        return
    with open(args.config) as fh:
        cfg = json.load(fh)
    jsonschema.validate(cfg, CONFIG_SCHEMA)
    for key, val in cfg.items():
        if key == "function":
            if not any(getattr(args, a, None) for a in ("linear", "quadratic", "poly", "func")):
                args.func = json.dumps(val)
        elif getattr(args, key, None) is None:
            setattr(args, key, val)


def _require_f(args) -> CharFunc:
    f = _function_from_args(args)
    if f is None:
        raise UsageError("a characteristic function is required (--linear, --quadratic, --poly, --func)")
    return f


def _require(args, name):
    val = getattr(args, name, None)
    if val is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return val


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args):
    f = _require_f(args)
    out = {"f": f.to_dict(), "fixed_points": [c.to_dict() for c in dynsys.fixed_points(f)]}
    q = f.as_quadratic()
    if q is not None:
        out["normal_form_c"] = dynsys.normal_form(f)
        if q[0] > 0:
            out["classification"] = dynsys.classify_delta(f).to_dict()
            region = dynsys.allowed_region(f)
            out["allowed_region"] = None if region is None else region.to_dict()
    return out, EXIT_OK


def cmd_cycles(args):
    f = _require_f(args)
    return [c.to_dict() for c in dynsys.find_cycles(f, _require(args, "d"))], EXIT_OK


def cmd_cut(args):
    f = _require_f(args)
    d = _require(args, "d")
    sols = hwsolver.solve_cut_general(f, d, tuple(args.interval) if args.interval else None)
    out = {"f": f.to_dict(), "d": d, "solutions": [s.to_dict() for s in sols]}
    lin = f.as_linear()
    if lin is not None and lin[0] > 0:
        out["closed_form"] = hwsolver.solve_cut_linear(lin[0], lin[1], d)
    return out, EXIT_OK


def _ladder_for(args, f: CharFunc) -> hwsolver.WeightLadder:
    d = _require(args, "d")
    if args.cycle_index is not None:
        cycles = dynsys.find_cycles(f, d)
        if args.cycle_index >= len(cycles):
            raise ValueError(f"only {len(cycles)} real {d}-cycle(s) found")
        return hwsolver.ladder_from_cycle(cycles[args.cycle_index], f)
    alpha = args.alpha
    if alpha is None:
        lin = f.as_linear()
        if lin is not None and lin[0] > 0:
            alpha = hwsolver.solve_cut_linear(lin[0], lin[1], d)
        else:
            sols = hwsolver.solve_cut_general(f, d, tuple(args.interval) if args.interval else None)
            if not sols:
                raise ValueError(f"no cut solution for d = {d}")
            alpha = sols[-1].alpha_j
    return hwsolver.ladder_from_cut(f, alpha, d)


def cmd_build(args):
    f = _require_f(args)
    ladder = _ladder_for(args, f)
    rep = repbuilder.build(ladder, args.mode or repbuilder.UNITARY)
    if args.pretty:
        return rep.dump(), EXIT_OK
    out = rep.to_dict()
    out["ladder"] = ladder.to_dict()
    return out, EXIT_OK


def cmd_verify(args):
    src = args.input
    text = sys.stdin.read() if src in (None, "-") else open(src).read()
    data = json.loads(text)
    rep = repbuilder.Representation.from_dict(data)
    report = algver.check_relations(rep, tol=args.tol)
    return report.to_dict(), (EXIT_OK if report.ok else EXIT_VERIFY)


def cmd_qmap(args):
    f = _function_from_args(args)
    if f is not None:
        d = _require(args, "d")
        alpha = args.alpha
        if alpha is None:
            lin = f.as_linear() or (None, None)
            alpha = hwsolver.solve_cut_linear(lin[0], lin[1], d)
        params = qmap.params_from_linear(f, alpha, d)
    else:
        q, j = _require(args, "q"), _require(args, "j")
        s = _require(args, "s")
        d = int(round(2 * j)) + 1
        alpha = args.alpha if args.alpha is not None else hwsolver.solve_cut_linear(q * q, s, d)
        params = qmap.QDeformParams(q, j, s, alpha)
    r0, rp = qmap.verify_map(params)
    tol = args.tol if args.tol is not None else algver.default_tol()
    out = {"params": params.to_dict(), "residual_j0": r0, "residual_jplus": rp,
           "ok": r0 < tol and rp < tol}
    return out, (EXIT_OK if out["ok"] else EXIT_VERIFY)


def cmd_cobweb(args):
    f = _require_f(args)
    return dynsys.cobweb_csv(f, _require(args, "x0"), _require(args, "steps")), EXIT_OK


def _sweep_point(point):
    t, r, s, d = point
    f = CharFunc.linear(r, s) if t == 0 else CharFunc.quadratic(t, r, s)
    try:
        sols = hwsolver.solve_cut_general(f, d)
    except (ValueError, RootIsolationError, DivergenceError):
        sols = []
    return [(t, r, s, d, sol.alpha_j, sol.unitary) for sol in sols]


def cmd_sweep(args):
    grid = list(product(_require(args, "t_values"), _require(args, "r_values"),
                        _require(args, "s_values"), _require(args, "d_values")))
    jobs = args.jobs or 1
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, grid))  # map keeps grid order
    else:
        rows = [_sweep_point(p) for p in grid]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "r", "s", "d", "alpha_j", "unitary"])
    for chunk in rows:
        for t, r, s, d, a, u in chunk:
            w.writerow([repr(float(t)), repr(float(r)), repr(float(s)), d, repr(a), str(u).lower()])
    return buf.getvalue(), EXIT_OK


HANDLERS = {
    "analyze": cmd_analyze, "cycles": cmd_cycles, "cut": cmd_cut, "build": cmd_build,
    "verify": cmd_verify, "qmap": cmd_qmap, "cobweb": cmd_cobweb, "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlsl2",
        description="Representations of the non-linear sl(2) algebra.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "CSV formats:\n"
            "  cobweb: x0,step,x,y,kind  one row per segment end point; kind V is a\n"
            "          vertical move to the graph of f, H a horizontal move to y=x;\n"
            "          every path starts at (x0, x0)\n"
            "  sweep:  t,r,s,d,alpha_j,unitary  one row per cut solution (t=0: linear f)\n"
            "Environment: NLSL2_TOL overrides the default verification tolerance."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        g = p.add_argument_group("characteristic function")
        g.add_argument("--linear", nargs=2, metavar="K=V", help="r=<r> s=<s> for f(x)=r*x-s")
        g.add_argument("--quadratic", nargs=3, metavar="K=V",
                       help="t=<t> r=<r> s=<s> for f(x)=t*x^2+r*x-s")
        g.add_argument("--poly", nargs="+", type=float, metavar="C",
                       help="coefficients in ascending degree")
        g.add_argument("--func", help="CharFunc JSON object")
        p.add_argument("--config", help="JSON config file (RunConfig schema)")
        p.add_argument("--output", "-o", help="write output here instead of stdout")
        p.add_argument("--tol", type=float, default=None, help="verification tolerance")
        p.add_argument("--pretty", action="store_true", help="human-readable output")
        for name in ("d", "interval", "alpha", "cycle_index", "mode", "q", "j", "s",
                     "x0", "steps", "t_values", "r_values", "s_values", "d_values",
                     "jobs", "input"):
            p.set_defaults(**{name: None})
        return p

    common(sub.add_parser("analyze", help="Delta classification, fixed points, allowed region"))
    p = common(sub.add_parser("cycles", help="real cycles of exact period d"))
    p.add_argument("--d", type=int)
    p = common(sub.add_parser("cut", help="solve the cut condition"))
    p.add_argument("--d", type=int)
    p.add_argument("--interval", nargs=2, type=float, metavar=("LOW", "HIGH"))
    p = common(sub.add_parser("build", help="matrices of a representation"))
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", type=float, help="highest weight (cut condition)")
    p.add_argument("--cycle-index", type=int, help="use the k-th d-cycle instead of a cut")
    p.add_argument("--interval", nargs=2, type=float, metavar=("LOW", "HIGH"))
    p.add_argument("--mode", choices=[repbuilder.UNITARY, repbuilder.ALGEBRAIC])
    p = common(sub.add_parser("verify", help="check relations on build output"))
    p.add_argument("--input", "-i", help="representation JSON (default stdin)")
    p = common(sub.add_parser("qmap", help="compare the sl_q(2) map with direct construction"))
    p.add_argument("--q", type=float)
    p.add_argument("--j", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", type=float)
    p = common(sub.add_parser("cobweb", help="cobweb segments as CSV"))
    p.add_argument("--x0", nargs="+", type=float)
    p.add_argument("--steps", type=int)
    p = common(sub.add_parser("sweep", help="cut solutions over a parameter grid, CSV"))
    p.add_argument("--t-values", nargs="+", type=float)
    p.add_argument("--r-values", nargs="+", type=float)
    p.add_argument("--s-values", nargs="+", type=float)
    p.add_argument("--d-values", nargs="+", type=int)
    p.add_argument("--jobs", type=int)
    return parser


def _emit(result, args, stdout):
    if isinstance(result, str):
        text = result if result.endswith("\n") else result + "\n"
    else:
        text = json.dumps(result, indent=2, sort_keys=True, allow_nan=True) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config(args)
        result, code = HANDLERS[args.command](args)
    except (UsageError, jsonschema.ValidationError, json.JSONDecodeError, OSError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        print(f"nlsl2 {args.command}: {msg}", file=stderr)
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError, RootIsolationError, DivergenceError) as exc:
        print(f"nlsl2 {args.command}: {exc}", file=stderr)
        return EXIT_SOLVER
    _emit(result, args, stdout)
    if code == EXIT_VERIFY:
        print(f"nlsl2 {args.command}: verification failed", file=stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
