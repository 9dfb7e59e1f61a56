"""Network schema: variables, local credal specifications, irrelevance policy.

Networks are read from a JSON document::

    {"variables": [{"name": "F", "values": ["f", "fc"]}, ...],
     "edges": [["F", "L"], ...],
     "local": {"L": {"type": "point", "rows": {"F=f": [0.6, 0.4], "F=fc": ["1/20", "19/20"]}},
               "F": {"type": "interval", "rows": {"": {"lower": [0.4, 0.5], "upper": [0.5, 0.6]}}}},
     "irrelevance": "nondescendants"}

Row keys list every parent as ``Var=value`` joined by commas (any order),
``""`` for roots. Numbers may be JSON numbers or ``"p/q"`` strings; they
are held as Fractions.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Optional

from ._numeric import TOL, fraction_str, parse_number
from .errors import (EmptyCredalSet, NetworkSyntaxError, UnknownNode,
                     UnsupportedSpecification, ValidationError)
from .geometry import LinearConstraintSet, VertexSet, dedup, enumerate_vertices, intervals_to_constraints
from .graph import Dag

RELATIONS = ("<=", ">=", "=")


@dataclass(frozen=True)
class Variable:
    name: str
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def cardinality(self):
        return len(self.values)

    def index(self, value):
        try:
            return self.values.index(value)
        except ValueError:
            raise UnknownNode(f"{value!r} is not a value of {self.name}") from None


# -- local records ---------------------------------------------------------

@dataclass(frozen=True)
class PointRecord:
    probs: tuple
    kind = "point"

    def linear_rows(self):
        """``(coef, rhs, relation)`` rows on p(X | parent config); last value implied."""
        n = len(self.probs)
        return [(tuple(1 if i == j else 0 for i in range(n)), q, "=")
                for j, q in enumerate(self.probs[:-1])]

    def to_json(self):
        return [fraction_str(x) for x in self.probs]


@dataclass(frozen=True)
class VerticesRecord:
    points: tuple
    kind = "vertices"

    def linear_rows(self):
        raise UnsupportedSpecification(
            "vertex-listed credal sets have no constraint form; give intervals or constraints")

    def to_json(self):
        return [[fraction_str(x) for x in p] for p in self.points]


@dataclass(frozen=True)
class IntervalRecord:
    lower: tuple
    upper: tuple
    kind = "interval"

    def constraint_set(self, n=None):
        return intervals_to_constraints(self.lower, self.upper)

    def linear_rows(self):
        return [(a, b, "<=") for a, b in self.constraint_set().rows]

    def to_json(self):
        return {"lower": [fraction_str(x) for x in self.lower],
                "upper": [fraction_str(x) for x in self.upper]}


@dataclass(frozen=True)
class ConstraintRecord:
    """Rows ``(coef, rhs)`` meaning ``sum_j coef_j p(x_j | config) <= rhs``."""

    rows: tuple
    kind = "constraints"

    def constraint_set(self, n):
        return LinearConstraintSet(n, self.rows)

    def linear_rows(self):
        return [(a, b, "<=") for a, b in self.rows]

    def to_json(self):
        return [{"coef": [fraction_str(x) for x in a], "rel": "<=", "rhs": fraction_str(b)}
                for a, b in self.rows]


@dataclass(frozen=True)
class CrossRow:
    """A constraint coupling several parent configurations of one node.

    Kept only so validation can report it; inference never uses it.
    """

    terms: tuple  # ((config_key, coef), ...)
    rhs: Fraction


@dataclass
class LocalSpec:
    kind: str
    records: dict = field(default_factory=dict)  # config key -> record
    stray: dict = field(default_factory=dict)    # raw row key -> record, for keys that do not fit
    cross_rows: tuple = ()


@dataclass(frozen=True)
class IrrelevancePolicy:
    """``none``, ``nondescendants``, or ``explicit`` with ``(target, irrelevant-set)`` pairs."""

    kind: str = "none"
    declarations: tuple = ()

    def __post_init__(self):
        if self.kind not in ("none", "nondescendants", "explicit"):
            raise ValueError(f"unknown irrelevance policy {self.kind!r}")
        decl = tuple((t, frozenset(w)) for t, w in self.declarations)
        object.__setattr__(self, "declarations", decl)

    @classmethod
    def coerce(cls, policy):
        if policy is None or isinstance(policy, cls):
            return policy
        if isinstance(policy, str):
            return cls(policy)
        return cls("explicit", tuple(policy))

    def to_json(self, order):
        if self.kind != "explicit":
            return self.kind
        return [{"target": t, "irrelevant": sorted(w, key=order.index)} for t, w in self.declarations]


@dataclass(frozen=True)
class Query:
    """The event ``target`` (a ``(variable, value)`` pair) given ``evidence``."""

    target: tuple
    evidence: tuple = ()

    def __post_init__(self):
        ev = self.evidence.items() if isinstance(self.evidence, Mapping) else self.evidence
        ev = tuple((v, x) for v, x in ev)
        names = [v for v, _ in ev]
        if len(set(names)) != len(names):
            raise ValueError("evidence mentions a variable twice")
        if self.target[0] in names:
            raise ValueError("target variable also appears in the evidence")
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(self, "evidence", ev)

    @property
    def evidence_map(self):
        return dict(self.evidence)


@dataclass(frozen=True)
class Diagnostic:
    node: Optional[str]
    config: Optional[str]
    rule: str
    message: str

    def __str__(self):
        where = self.node or "<network>"
        if self.config is not None:
            where += f" [{self.config or 'root'}]"
        return f"{where}: {self.rule}: {self.message}"

    def to_dict(self):
        return {"node": self.node, "config": self.config, "rule": self.rule, "message": self.message}


class NetworkModel:
    """A locally defined credal network over a DAG."""

    def __init__(self, dag: Dag, variables: Mapping, locals: Mapping, policy=None):
        self.dag = dag
        self.variables = {n: variables[n] for n in dag.nodes}
        self.locals = dict(locals)
        self.policy = IrrelevancePolicy.coerce(policy) or IrrelevancePolicy("none")

    # structure ----------------------------------------------------------
    @property
    def nodes(self):
        return self.dag.nodes

    def order(self):
        return self.dag.topological_order()

    def parents(self, node):
        return self.dag.parents(node)

    def values(self, node):
        return self.variables[node].values

    def cardinality(self, node):
        return self.variables[node].cardinality

    def parent_configs(self, node) -> list:
        """Configuration keys ``((parent, value), ...)`` in lexicographic order."""
        pa = self.parents(node)
        return [tuple(zip(pa, vals)) for vals in product(*(self.values(p) for p in pa))]

    def record(self, node, config=()):
        config = self.normalize_key(node, config)
        try:
            return self.locals[node].records[config]
        except KeyError:
            raise UnknownNode(f"{node!r} has no record for {format_key(config)!r}") from None

    def normalize_key(self, node, config):
        if isinstance(config, str):
            config = parse_key(config)
        elif isinstance(config, Mapping):
            config = tuple(config.items())
        given = dict(config)
        pa = self.parents(node)
        if set(given) != set(pa):
            raise UnknownNode(f"configuration {format_key(config)!r} does not match parents of {node}")
        return tuple((p, given[p]) for p in pa)

    def is_point(self, node) -> bool:
        spec = self.locals.get(node)
        return spec is not None and all(r.kind == "point" for r in spec.records.values())

    def credal_nodes(self) -> tuple:
        return tuple(n for n in self.nodes if not self.is_point(n))

    def local_vertices(self, node, config=(), exact=True) -> VertexSet:
        return local_vertices(self, node, config, exact)

    def point_selection(self) -> dict:
        """``{node: {config: probs}}`` for a model whose records are all points."""
        sel = {}
        for n in self.nodes:
            if not self.is_point(n):
                raise ValueError(f"{n} is not point-specified")
            sel[n] = {k: r.probs for k, r in self.locals[n].records.items()}
        return sel

    def with_policy(self, policy):
        return NetworkModel(self.dag, self.variables, self.locals, policy)

    def check_query(self, query: Query):
        for var, val in (query.target, *query.evidence):
            if var not in self.variables:
                raise UnknownNode(f"unknown variable {var!r}")
            self.variables[var].index(val)

    def __repr__(self):
        return (f"NetworkModel(nodes={list(self.nodes)}, edges={len(self.dag.edges)}, "
                f"credal={list(self.credal_nodes())}, policy={self.policy.kind!r})")


# -- row keys -------------------------------------------------------------

def parse_key(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    out = []
    for part in text.split(","):
        var, sep, val = part.partition("=")
        if not sep or not var.strip() or not val.strip():
            raise NetworkSyntaxError(f"bad assignment {part!r} in row key {text!r}")
        out.append((var.strip(), val.strip()))
    return tuple(out)


def format_key(config) -> str:
    return ",".join(f"{v}={x}" for v, x in config)


# -- vertices -------------------------------------------------------------

def local_vertices(model: NetworkModel, node, config=(), exact=True) -> VertexSet:
    """Extreme points of the local credal set of ``node`` at ``config``."""
    rec = model.record(node, config)
    n = model.cardinality(node)
    if rec.kind == "point":
        pts = (tuple(rec.probs) if exact else tuple(float(x) for x in rec.probs),)
        return VertexSet(pts, exact, n)
    if rec.kind == "vertices":
        pts = rec.points if exact else [tuple(float(x) for x in p) for p in rec.points]
        pts = dedup(pts, 0 if exact else TOL)
        return VertexSet(tuple(sorted(pts)), exact, n)
    vs = enumerate_vertices(rec.constraint_set(n), exact=exact)
    if vs.empty:
        raise EmptyCredalSet(f"{node} [{format_key(model.normalize_key(node, config)) or 'root'}] is empty")
    return vs


# -- parsing --------------------------------------------------------------

def _num(x, where):
    try:
        return parse_number(x)
    except (ValueError, ZeroDivisionError, TypeError):
        raise NetworkSyntaxError(f"{where}: not a number: {x!r}") from None


def _vec(xs, where):
    if not isinstance(xs, list):
        raise NetworkSyntaxError(f"{where}: expected a list of numbers")
    return tuple(_num(x, where) for x in xs)


def _normalize_rows(raw, where):
    """Turn ``{coef, rel, rhs}`` items into ``<=`` rows."""
    rows = []
    if not isinstance(raw, list):
        raise NetworkSyntaxError(f"{where}: constraints must be a list")
    for item in raw:
        if not isinstance(item, dict) or "coef" not in item or "rhs" not in item:
            raise NetworkSyntaxError(f"{where}: constraint needs 'coef' and 'rhs'")
        rel = item.get("rel", "<=")
        if rel not in RELATIONS:
            raise NetworkSyntaxError(f"{where}: unknown relation {rel!r}")
        a, b = _vec(item["coef"], where), _num(item["rhs"], where)
        if rel in ("<=", "="):
            rows.append((a, b))
        if rel in (">=", "="):
            rows.append((tuple(-x for x in a), -b))
    return tuple(rows)


def _parse_record(kind, raw, where):
    if kind == "point":
        return PointRecord(_vec(raw, where))
    if kind == "vertices":
        if not isinstance(raw, list) or not raw:
            raise NetworkSyntaxError(f"{where}: vertices must be a nonempty list")
        return VerticesRecord(tuple(_vec(p, where) for p in raw))
    if kind == "interval":
        if not isinstance(raw, dict) or "lower" not in raw or "upper" not in raw:
            raise NetworkSyntaxError(f"{where}: interval rows need 'lower' and 'upper'")
        return IntervalRecord(_vec(raw["lower"], where), _vec(raw["upper"], where))
    if kind == "constraints":
        return ConstraintRecord(_normalize_rows(raw, where))
    raise NetworkSyntaxError(f"{where}: unknown local type {kind!r}")


def network_from_dict(doc, validate=True) -> NetworkModel:
    if not isinstance(doc, dict):
        raise NetworkSyntaxError("network must be a JSON object")
    for key in ("variables", "edges", "local"):
        if key not in doc:
            raise NetworkSyntaxError(f"missing top-level key {key!r}")
    variables = {}
    diags = []
    for item in doc["variables"]:
        if not isinstance(item, dict) or "name" not in item or "values" not in item:
            raise NetworkSyntaxError("each variable needs 'name' and 'values'")
        name, values = str(item["name"]), [str(v) for v in item["values"]]
        if name in variables:
            raise NetworkSyntaxError(f"variable {name!r} declared twice")
        variables[name] = Variable(name, values)
    edges = []
    for e in doc["edges"]:
        if not isinstance(e, list) or len(e) != 2:
            raise NetworkSyntaxError(f"edge {e!r} is not a [parent, child] pair")
        edges.append((str(e[0]), str(e[1])))
    try:
        dag = Dag(list(variables), edges)
    except UnknownNode as exc:
        raise ValidationError([Diagnostic(None, None, "edges", str(exc))]) from None
    except ValueError as exc:
        raise ValidationError([Diagnostic(None, None, "edges", str(exc))]) from None

    locals_ = {}
    if not isinstance(doc["local"], dict):
        raise NetworkSyntaxError("'local' must be an object keyed by variable")
    for node, spec in doc["local"].items():
        if node not in variables:
            diags.append(Diagnostic(node, None, "coverage", "local specification for an undeclared variable"))
            continue
        if not isinstance(spec, dict) or "type" not in spec or "rows" not in spec:
            raise NetworkSyntaxError(f"local[{node!r}] needs 'type' and 'rows'")
        kind = spec["type"]
        ls = LocalSpec(kind)
        if not isinstance(spec["rows"], dict):
            raise NetworkSyntaxError(f"local[{node!r}].rows must be an object keyed by parent configuration")
        pa = dag.parents(node)
        for raw_key, raw in spec["rows"].items():
            where = f"local[{node!r}][{raw_key!r}]"
            rec = _parse_record(kind, raw, where)
            assignment = dict(parse_key(raw_key))
            ok = set(assignment) == set(pa) and all(
                assignment[p] in variables[p].values for p in pa) and len(parse_key(raw_key)) == len(pa)
            if ok:
                key = tuple((p, assignment[p]) for p in pa)
                if key in ls.records:
                    raise NetworkSyntaxError(f"{where}: duplicate parent configuration")
                ls.records[key] = rec
            else:
                ls.stray[raw_key] = rec
        cross = []
        for item in spec.get("cross_rows", []):
            where = f"local[{node!r}].cross_rows"
            if not isinstance(item, dict) or not isinstance(item.get("coef"), dict) or "rhs" not in item:
                raise NetworkSyntaxError(f"{where}: needs 'coef' (row key -> coefficients) and 'rhs'")
            terms = tuple((parse_key(k), _vec(v, where)) for k, v in item["coef"].items())
            rel, rhs = item.get("rel", "<="), _num(item["rhs"], where)
            if rel not in RELATIONS:
                raise NetworkSyntaxError(f"{where}: unknown relation {rel!r}")
            if rel in ("<=", "="):
                cross.append(CrossRow(terms, rhs))
            if rel in (">=", "="):
                cross.append(CrossRow(tuple((k, tuple(-x for x in v)) for k, v in terms), -rhs))
        ls.cross_rows = tuple(cross)
        locals_[node] = ls

    policy = _parse_policy(doc.get("irrelevance", "none"))
    model = NetworkModel(dag, variables, locals_, policy)
    if validate:
        diags += validate_model(model)
        if diags:
            raise ValidationError(diags)
    return model


def _parse_policy(raw):
    if isinstance(raw, str):
        if raw not in ("none", "nondescendants"):
            raise NetworkSyntaxError(f"unknown irrelevance policy {raw!r}")
        return IrrelevancePolicy(raw)
    if isinstance(raw, list):
        decl = []
        for item in raw:
            if not isinstance(item, dict) or "target" not in item or "irrelevant" not in item:
                raise NetworkSyntaxError("irrelevance declarations need 'target' and 'irrelevant'")
            decl.append((str(item["target"]), frozenset(map(str, item["irrelevant"]))))
        return IrrelevancePolicy("explicit", tuple(decl))
    raise NetworkSyntaxError("irrelevance must be 'none', 'nondescendants' or a list")


def parse_network(text: str, validate=True) -> NetworkModel:
    """Parse network-file text; raises NetworkSyntaxError, ValidationError or CycleDetected."""
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise NetworkSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    return network_from_dict(doc, validate=validate)


def load_network(path, validate=True) -> NetworkModel:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read(), validate=validate)


def network_to_dict(model: NetworkModel) -> dict:
    local = {}
    for node in model.nodes:
        spec = model.locals.get(node)
        if spec is None:
            continue
        entry = {"type": spec.kind,
                 "rows": {format_key(k): r.to_json() for k, r in spec.records.items()}}
        if spec.cross_rows:
            entry["cross_rows"] = [
                {"coef": {format_key(k): [fraction_str(x) for x in v] for k, v in row.terms},
                 "rel": "<=", "rhs": fraction_str(row.rhs)} for row in spec.cross_rows]
        local[node] = entry
    return {
        "variables": [{"name": v.name, "values": list(v.values)} for v in model.variables.values()],
        "edges": [list(e) for e in model.dag.sorted_edges()],
        "local": local,
        "irrelevance": model.policy.to_json(list(model.nodes)),
    }


def serialize_network(model: NetworkModel) -> str:
    """Canonical text: sorted keys, numbers as exact ``p/q`` strings."""
    return json.dumps(network_to_dict(model), sort_keys=True, indent=2) + "\n"


# -- validation -----------------------------------------------------------

def _feasible(cs: LinearConstraintSet) -> bool:
    from .solve import LinearProgram, solve_lp

    n = cs.dimension
    lp = LinearProgram((0,) * n, "max", [list(a) for a, _ in cs.rows], [b for _, b in cs.rows],
                       [[1] * n], [1])
    return solve_lp(lp).status == "optimal"


def _check_record(node, key, rec, card):
    where = format_key(key)
    out = []

    def bad(rule, msg):
        out.append(Diagnostic(node, where, rule, msg))

    def check_prob(vec, label):
        if len(vec) != card:
            bad("dimension", f"{label} has {len(vec)} entries, {node} has {card} values")
        elif any(x < 0 for x in vec) or abs(sum(vec) - 1) > TOL:
            bad("normalization", f"{label} must be nonnegative and sum to 1 (sum is {fraction_str(sum(vec))})")

    if rec.kind == "point":
        check_prob(rec.probs, "probability vector")
    elif rec.kind == "vertices":
        for i, p in enumerate(rec.points):
            check_prob(p, f"vertex {i}")
    elif rec.kind == "interval":
        lo, hi = rec.lower, rec.upper
        if len(lo) != card or len(hi) != card:
            bad("dimension", f"interval bounds must have {card} entries")
        elif not all(0 <= a <= b <= 1 for a, b in zip(lo, hi)):
            bad("interval", "bounds must satisfy 0 <= lower <= upper <= 1")
        elif sum(lo) > 1:
            bad("interval", f"lower bounds sum to {fraction_str(sum(lo))} > 1 (empty credal set)")
        elif sum(hi) < 1:
            bad("interval", f"upper bounds sum to {fraction_str(sum(hi))} < 1 (empty credal set)")
    elif rec.kind == "constraints":
        if any(len(a) != card for a, _ in rec.rows):
            bad("dimension", f"constraint rows must have {card} coefficients")
        elif not _feasible(rec.constraint_set(card)):
            bad("empty_credal_set", "constraints admit no distribution")
    return out


def validate_model(model: NetworkModel) -> list:
    """Diagnostics for every violated invariant; empty when the model is sound."""
    diags = []
    for name, var in model.variables.items():
        if var.cardinality < 1:
            diags.append(Diagnostic(name, None, "values", "variable needs at least one value"))
        if len(set(var.values)) != var.cardinality:
            diags.append(Diagnostic(name, None, "values", "value labels must be unique"))
    for node in model.nodes:
        spec = model.locals.get(node)
        if spec is None:
            diags.append(Diagnostic(node, None, "coverage", "no local specification"))
            continue
        for raw_key in spec.stray:
            diags.append(Diagnostic(node, raw_key, "coverage",
                                    "row key does not assign every parent a declared value"))
        for key in model.parent_configs(node):
            if key not in spec.records:
                diags.append(Diagnostic(node, format_key(key), "coverage", "missing record for parent configuration"))
        for key, rec in spec.records.items():
            diags += _check_record(node, key, rec, model.cardinality(node))
        for row in spec.cross_rows:
            configs = {k for k, coef in row.terms if any(coef)}
            if len(configs) > 1:
                diags.append(Diagnostic(node, " | ".join(sorted(format_key(k) for k in configs)),
                                        "separate_specification",
                                        "constraint couples several parent configurations"))
            else:
                # inference only reads per-configuration records, so a row here would be ignored
                diags.append(Diagnostic(node, " | ".join(format_key(k) for k in configs), "cross_row",
                                        "single-configuration rows belong in that configuration's record"))
    if model.policy.kind == "explicit":
        for target, irrelevant in model.policy.declarations:
            if target not in model.dag:
                diags.append(Diagnostic(target, None, "policy", "unknown target"))
                continue
            allowed = model.dag.nondescendants(target) - set(model.parents(target))
            extra = sorted(irrelevant - allowed)
            if extra:
                diags.append(Diagnostic(target, None, "policy",
                                        f"{', '.join(extra)} not among the non-parent nondescendants"))
    return diags


def validate(model: NetworkModel) -> list:
    return validate_model(model)
