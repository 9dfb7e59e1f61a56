"""Command-line front end.

    qbnet query NET --target D=d --evidence L=l --method natural --policy nondescendants
    qbnet dsep NET --x F --z B --given D
    qbnet vertices NET --joint-scope F,B --policy nondescendants
    qbnet validate NET

Results go to stdout as one JSON object per line; errors go to stderr as
a JSON object. Exit status: 0 success, 1 parse/solve error, 2 validation
diagnostics.
"""

import argparse
import json
import sys
import time
from fractions import Fraction

from ._numeric import fraction_str
from .errors import QbnError, ValidationError
from .geometry import enumerate_vertices
from .infer import expectation_bounds, generate_constraints, natural_bounds, type1_bounds
from .model import IrrelevancePolicy, Query, load_network, parse_key, validate_model


def _assignments(text):
    return dict(parse_key(text or ""))


def _names(text):
    return [t.strip() for t in (text or "").split(",") if t.strip()]


def _number(x):
    if x is None:
        return None
    if isinstance(x, float) and x in (float("inf"), float("-inf")):
        return str(x)
    return float(f"{float(x):.6g}")


def _exact(x):
    return fraction_str(x) if isinstance(x, Fraction) else None


def _policy(args, model):
    return IrrelevancePolicy(args.policy) if args.policy else model.policy


def cmd_query(args, out):
    model = load_network(args.network)
    exact = not args.float
    evidence = _assignments(args.evidence)
    policy = _policy(args, model)
    use_reduction = False if args.no_reduction else None
    start = time.perf_counter()
    if args.expect:
        var = args.target.partition("=")[0].strip()
        f = {k: Fraction(v) for k, v in _assignments(args.expect).items()}
        res = expectation_bounds(model, var, f, evidence, args.method, policy, use_reduction, exact)
    else:
        var, sep, val = args.target.partition("=")
        if not sep:
            raise QbnError("--target must be Var=value unless --expect is given")
        query = Query((var.strip(), val.strip()), evidence)
        if args.method == "type1":
            res = type1_bounds(model, query, exact)
        else:
            res = natural_bounds(model, query, policy, use_reduction, exact)
    elapsed = time.perf_counter() - start
    result = {
        "lower": _number(res.lower),
        "upper": _number(res.upper),
        "lower_exact": _exact(res.lower),
        "upper_exact": _exact(res.upper),
        "method": args.method,
        "policy": policy.kind if args.method == "natural" else None,
        "status": {"lower": str(res.lower_status), "upper": str(res.upper_status)},
        "constraints": res.info.get("constraints"),
    }
    if args.method == "type1":
        result["combinations"] = res.info.get("combinations")
    else:
        result["reduced"] = res.info.get("reduced")
        result["pivots"] = res.info.get("pivots")
    if args.stats:
        result["seconds"] = round(elapsed, 6)
    out.write(json.dumps(result) + "\n")
    return 0


def cmd_dsep(args, out):
    model = load_network(args.network)
    sep = model.dag.d_separated(_names(args.x), _names(args.z), _names(args.given))
    out.write(("true" if sep else "false") + "\n")
    return 0


def cmd_vertices(args, out):
    model = load_network(args.network)
    exact = not args.float
    scope = _names(args.joint_scope) or list(model.nodes)
    system = generate_constraints(model, _policy(args, model), scope)
    vs = enumerate_vertices(system.polytope(), exact=exact)
    fmt = fraction_str if exact else (lambda v: float(f"{v:.6g}"))
    result = {
        "scope": list(system.indexer.variables),
        "atoms": system.indexer.labels(),
        "constraints": system.counts(),
        "count": len(vs),
        "vertices": [[fmt(v) for v in p] for p in vs],
    }
    out.write(json.dumps(result) + "\n")
    return 0


def cmd_validate(args, out):
    try:
        model = load_network(args.network, validate=False)
        diags = validate_model(model)
    except ValidationError as exc:
        diags = exc.diagnostics
    for d in diags:
        out.write(json.dumps(d.to_dict()) + "\n")
    if not diags:
        out.write("[]\n")
    return 2 if diags else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="qbnet", description="Bounds on posteriors in credal networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="lower/upper posterior probability or expectation")
    q.add_argument("network")
    q.add_argument("--target", required=True, help="Var=value, or Var with --expect")
    q.add_argument("--evidence", default="", help="comma-separated Var=value pairs")
    q.add_argument("--method", choices=("type1", "natural"), default="natural")
    q.add_argument("--policy", choices=("none", "nondescendants"), help="defaults to the file's policy")
    q.add_argument("--no-reduction", action="store_true", help="solve the full program over all atoms")
    q.add_argument("--float", action="store_true", help="floating-point instead of exact arithmetic")
    q.add_argument("--expect", help="function on the target variable, e.g. d=1,dc=-1")
    q.add_argument("--stats", action="store_true", help="add wall time (breaks byte-identical output)")
    q.set_defaults(func=cmd_query)

    d = sub.add_parser("dsep", help="test d-separation of X and Z given Y")
    d.add_argument("network")
    d.add_argument("--x", required=True)
    d.add_argument("--z", required=True)
    d.add_argument("--given", default="")
    d.set_defaults(func=cmd_dsep)

    v = sub.add_parser("vertices", help="vertices of the constraint polytope over a set of variables")
    v.add_argument("network")
    v.add_argument("--joint-scope", default="")
    v.add_argument("--policy", choices=("none", "nondescendants"))
    v.add_argument("--float", action="store_true")
    v.set_defaults(func=cmd_vertices)

    val = sub.add_parser("validate", help="report violated invariants")
    val.add_argument("network")
    val.set_defaults(func=cmd_validate)
    return parser


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ValidationError as exc:
        err.write(json.dumps(exc.to_dict()) + "\n")
        return 2
    except QbnError as exc:
        err.write(json.dumps(exc.to_dict()) + "\n")
        return 1
    except (OSError, ValueError) as exc:
        err.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


def main():
    sys.exit(run_cli())
