"""Posterior bounds for credal networks.

Two extensions are supported:

* ``type1_bounds``: the convex hull of the Bayesian networks obtained by
  picking one extreme point of every local credal set.
* ``natural_bounds``: the largest joint credal set satisfying the local
  constraints and the declared irrelevance relations, computed by a
  linear-fractional program over joint atoms. Under the nondescendants
  policy the program can be reduced to the credal nodes and their
  ancestors, with the point-specified rest eliminated into the objective.
"""

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

from ._numeric import as_number
from .errors import CombinationCapExceeded, ReductionNotApplicable, UnknownNode, ZeroEvidence
from .geometry import LinearConstraintSet
from .graph import Dag
from .model import IrrelevancePolicy, NetworkModel, Query, local_vertices
from .solve import (FractionalProgram, Status, denominator_range, solve_fractional)

DEFAULT_MAX_COMBINATIONS = 10**6


# -- atoms ----------------------------------------------------------------

class AtomIndexer:
    """Bijection between joint assignments of ``variables`` and flat indices.

    Lexicographic: the first variable varies slowest, values in declared
    order. An empty variable list has exactly one atom.
    """

    def __init__(self, model: NetworkModel, variables):
        self.variables = tuple(variables)
        self.values = tuple(model.values(v) for v in self.variables)
        self.cards = tuple(len(v) for v in self.values)
        self.size = math.prod(self.cards)
        strides, s = [], 1
        for c in reversed(self.cards):
            strides.append(s)
            s *= c
        self.strides = tuple(reversed(strides))
        self._pos = {v: i for i, v in enumerate(self.variables)}

    def __len__(self):
        return self.size

    def index(self, assignment: Mapping) -> int:
        return sum(self.values[i].index(assignment[v]) * self.strides[i]
                   for i, v in enumerate(self.variables))

    def assignment(self, index: int) -> dict:
        out = {}
        for i, v in enumerate(self.variables):
            k, index = divmod(index, self.strides[i])
            out[v] = self.values[i][k]
        return out

    def assignments(self):
        for combo in product(*self.values):
            yield dict(zip(self.variables, combo))

    def matches(self, fixed: Mapping) -> list:
        """0/1 indicator over atoms of the event ``fixed`` (variables outside the scope are ignored)."""
        want = [(self._pos[v], x) for v, x in fixed.items() if v in self._pos]
        return [1 if all(combo[i] == x for i, x in want) else 0 for combo in product(*self.values)]

    def labels(self):
        return [",".join(f"{v}={a[v]}" for v in self.variables) for a in self.assignments()]


# -- results --------------------------------------------------------------

@dataclass
class IntervalBounds:
    lower: object
    upper: object
    lower_status: Status = Status.EXACT
    upper_status: Status = Status.EXACT
    info: dict = field(default_factory=dict)

    def __iter__(self):
        yield self.lower
        yield self.upper

    def __str__(self):
        return f"[{self.lower}, {self.upper}]"

    def contains(self, other: "IntervalBounds", slack=0) -> bool:
        return self.lower - slack <= other.lower and other.upper <= self.upper + slack


# -- factors (variable elimination) ---------------------------------------

class _Factor:
    __slots__ = ("vars", "table")

    def __init__(self, vars, table):
        self.vars = tuple(vars)
        self.table = table  # dict: tuple of values -> number

    def reduce(self, evidence):
        idx = [(i, evidence[v]) for i, v in enumerate(self.vars) if v in evidence]
        if not idx:
            return self
        keep = [i for i, v in enumerate(self.vars) if v not in evidence]
        table = {}
        for key, p in self.table.items():
            if all(key[i] == x for i, x in idx):
                table[tuple(key[i] for i in keep)] = p
        return _Factor([self.vars[i] for i in keep], table)


def _multiply(a: _Factor, b: _Factor) -> _Factor:
    vars = list(a.vars) + [v for v in b.vars if v not in a.vars]
    table = {}
    # group b's entries by the shared variables for a cheap join
    shared = [v for v in b.vars if v in a.vars]
    a_shared = [a.vars.index(v) for v in shared]
    b_shared = [b.vars.index(v) for v in shared]
    b_extra = [i for i, v in enumerate(b.vars) if v not in a.vars]
    groups = {}
    for key, p in b.table.items():
        groups.setdefault(tuple(key[i] for i in b_shared), []).append((tuple(key[i] for i in b_extra), p))
    for key, p in a.table.items():
        if not p:
            continue
        for extra, q in groups.get(tuple(key[i] for i in a_shared), ()):
            if q:
                table[key + extra] = p * q
    return _Factor(vars, table)


def _sum_out(f: _Factor, var) -> _Factor:
    i = f.vars.index(var)
    table = {}
    for key, p in f.table.items():
        k = key[:i] + key[i + 1:]
        table[k] = table.get(k, 0) + p
    return _Factor(f.vars[:i] + f.vars[i + 1:], table)


def _sum_product(factors, keep, order):
    """Sum every variable except ``keep`` out of the product of ``factors``."""
    factors = list(factors)
    for var in order:
        if var in keep:
            continue
        touching = [f for f in factors if var in f.vars]
        if not touching:
            continue
        rest = [f for f in factors if var not in f.vars]
        prod = touching[0]
        for f in touching[1:]:
            prod = _multiply(prod, f)
        factors = rest + [_sum_out(prod, var)]
    if not factors:
        return _Factor((), {(): 1})
    out = factors[0]
    for f in factors[1:]:
        out = _multiply(out, f)
    return out


def _cpt_factor(model, node, tables, exact):
    """Factor over (parents..., node) from ``tables[config] = probs``."""
    pa = model.parents(node)
    vals = model.values(node)
    table = {}
    for key, probs in tables.items():
        pv = tuple(x for _, x in key)
        for v, p in zip(vals, probs):
            table[pv + (v,)] = as_number(p, exact)
    return _Factor(pa + (node,), table)


def _relevant_ancestors(dag: Dag, nodes):
    out = set(nodes)
    for n in nodes:
        out |= dag.ancestors(n)
    return out


def _target_joint(model, selection, target_var, evidence, exact):
    """``{x: P(target_var=x, evidence)}`` by variable elimination; barren nodes are skipped."""
    keep_nodes = _relevant_ancestors(model.dag, [target_var, *evidence])
    order = [n for n in model.order() if n in keep_nodes]
    factors = [_cpt_factor(model, n, selection[n], exact).reduce(evidence) for n in order]
    f = _sum_product(factors, {target_var}, order)
    zero = as_number(0, exact)
    if target_var in evidence:
        return {x: (f.table.get((), zero) if x == evidence[target_var] else zero)
                for x in model.values(target_var)}
    return {x: f.table.get((x,), zero) for x in model.values(target_var)}


def joint_eval(model: NetworkModel, selection: Mapping, assignment: Mapping, exact=True):
    """Product of the selected local probabilities at a full assignment."""
    out = as_number(1, exact)
    for node in model.order():
        key = tuple((p, assignment[p]) for p in model.parents(node))
        probs = selection[node][key]
        out *= as_number(probs[model.variables[node].index(assignment[node])], exact)
    return out


def bn_posterior(model: NetworkModel, selection: Mapping, query: Query, exact=True):
    """p(target | evidence) for the Bayesian network picked by ``selection``."""
    var, val = query.target
    joint = _target_joint(model, selection, var, query.evidence_map, exact)
    total = sum(joint.values())
    if not total:
        raise ZeroEvidence("evidence has probability zero under this selection")
    return joint[val] / total


# -- type-1 extension -----------------------------------------------------

def requisite_nodes(model: NetworkModel, target_var, evidence_vars) -> set:
    """Nodes whose local tables can influence p(target | evidence).

    A node's table matters only if a fresh parent attached to the node is
    not d-separated from the target given the evidence.
    """
    params = [("__param__", n) for n in model.nodes]
    dag = Dag(list(model.nodes) + params,
              list(model.dag.sorted_edges()) + [(p, p[1]) for p in params])
    ev = set(evidence_vars)
    return {n for n in model.nodes if not dag.d_separated({("__param__", n)}, {target_var}, ev)}


def _function_vector(model, var, f):
    vals = model.values(var)
    if f is None:
        raise ValueError("missing function")
    if callable(f) and not isinstance(f, Mapping):
        return [as_number(f(x), True) for x in vals]
    missing = [x for x in vals if x not in f]
    if missing:
        raise UnknownNode(f"function lacks values {missing} of {var}")
    return [as_number(f[x], True) for x in vals]


def _vacuous(fvec, exact, **info):
    return IntervalBounds(as_number(min(fvec), exact), as_number(max(fvec), exact),
                          Status.VACUOUS_EVIDENCE, Status.VACUOUS_EVIDENCE, info)


def combination_cap():
    raw = os.environ.get("QBN_MAX_COMBINATIONS")
    return int(raw) if raw else DEFAULT_MAX_COMBINATIONS


def _type1(model, var, evidence, fvec, exact, cap, prune):
    cap = combination_cap() if cap is None else cap
    needed = requisite_nodes(model, var, evidence) if prune else set(model.nodes)
    base, choices = {}, []
    for node in model.nodes:
        base[node] = {}
        for key in model.parent_configs(node):
            vs = local_vertices(model, node, key, exact=True)
            base[node][key] = vs.points[0]
            if len(vs) > 1 and node in needed:
                choices.append((node, key, vs.points))
    total = math.prod(len(c[2]) for c in choices)
    if total > cap:
        raise CombinationCapExceeded(f"{total} vertex combinations exceed the cap of {cap}")
    fvec = [as_number(x, exact) for x in fvec]
    lo = hi = None
    lo_at = hi_at = None
    seen = 0
    for combo in product(*(c[2] for c in choices)):
        sel = {n: dict(t) for n, t in base.items()}
        for (node, key, _), pt in zip(choices, combo):
            sel[node][key] = pt
        joint = _target_joint(model, sel, var, evidence, exact)
        den = sum(joint.values())
        if not den:
            continue
        seen += 1
        val = sum(fx * joint[x] for fx, x in zip(fvec, model.values(var))) / den
        if lo is None or val < lo:
            lo, lo_at = val, combo
        if hi is None or val > hi:
            hi, hi_at = val, combo
    info = {"method": "type1", "combinations": total, "records_varied": len(choices)}
    if lo is None:
        return _vacuous(fvec, exact, **info)
    labels = [(n, k) for n, k, _ in choices]
    info["argmin"] = list(zip(labels, lo_at))
    info["argmax"] = list(zip(labels, hi_at))
    return IntervalBounds(lo, hi, Status.EXACT, Status.EXACT, info)


def type1_bounds(model: NetworkModel, query: Query, exact=True, cap=None, prune=True) -> IntervalBounds:
    """Bounds on p(target | evidence) over the type-1 extension.

    Enumerates every combination of local extreme points. With ``prune``
    only nodes whose tables can affect the query (by d-separation) are
    varied; the others are pinned to their first vertex.
    """
    model.check_query(query)
    var, val = query.target
    fvec = [1 if x == val else 0 for x in model.values(var)]
    return _type1(model, var, query.evidence_map, fvec, exact, cap, prune)


# -- natural extension: constraints ---------------------------------------

@dataclass(frozen=True)
class ConstraintRow:
    """``coeffs . p(scope atoms) <relation> 0`` with ``relation`` in ``<=``, ``=``."""

    coeffs: tuple
    relation: str
    node: str
    config: tuple
    replication: tuple = ()


@dataclass
class ConstraintSystem:
    indexer: AtomIndexer
    rows: list

    @property
    def n_equality(self):
        """Equality rows, counting the unitary row."""
        return sum(r.relation == "=" for r in self.rows) + 1

    @property
    def n_inequality(self):
        return sum(r.relation == "<=" for r in self.rows)

    def counts(self):
        return {"equality": self.n_equality, "inequality": self.n_inequality,
                "total": self.n_equality + self.n_inequality}

    def matrix(self, relation=None):
        return [list(r.coeffs) for r in self.rows if relation is None or r.relation == relation]

    def polytope(self) -> LinearConstraintSet:
        """The rows as a constraint set over the atoms; equalities become two opposite rows."""
        rows = [(r.coeffs, 0) for r in self.rows]
        rows += [(tuple(-x for x in r.coeffs), 0) for r in self.rows if r.relation == "="]
        return LinearConstraintSet(len(self.indexer), rows)


def _canonical_rows(record):
    """Local rows on p(X | config) rewritten with a zero last coefficient, scaled and deduplicated.

    Subtracting the last coefficient uses ``sum_j p(x_j | config) = 1`` and
    exposes rows that only differ by that identity, such as the two halves
    of a binary interval.
    """
    out, seen = [], set()
    for gamma, gamma0, rel in record.linear_rows():
        gamma = [Fraction(g) for g in gamma]
        last = gamma[-1]
        gamma = [g - last for g in gamma]
        gamma0 = Fraction(gamma0) - last
        scale = max((abs(g) for g in gamma), default=0)
        if scale == 0:
            if (rel == "<=" and gamma0 >= 0) or (rel == "=" and gamma0 == 0):
                continue
            scale = abs(gamma0)
        gamma = tuple(g / scale for g in gamma)
        gamma0 = gamma0 / scale
        key = (gamma, gamma0, rel)
        if rel == "=":
            # a.p = b and -a.p = -b are the same row
            neg = (tuple(-g for g in gamma), -gamma0, rel)
            key = min(key, neg)
        if key not in seen:
            seen.add(key)
            out.append((gamma, gamma0, rel))
    return out


def local_rows(model: NetworkModel, node, config=()):
    """Canonical ``(gamma, gamma0, relation)`` rows of one local record."""
    return _canonical_rows(model.record(node, config))


def replication_sets(model: NetworkModel, policy, node, scope) -> list:
    """Variable sets over whose configurations the node's rows are replicated."""
    scope = set(scope)
    pa = set(model.parents(node))
    if policy.kind == "none":
        return [()]
    if policy.kind == "nondescendants":
        repl = (model.dag.nondescendants(node) - pa) & scope
        return [model.dag.sort(repl)]
    sets = [model.dag.sort(set(w) & scope - pa) for t, w in policy.declarations if t == node]
    return sets or [()]


def generate_constraints(model: NetworkModel, policy=None, scope=None) -> ConstraintSystem:
    """Homogeneous rows over the atoms of ``scope`` (default: every node).

    Each local row ``sum_j g_j p(x_j | k) <= g0`` becomes
    ``sum_j g_j p(x_j, k, r) - g0 p(k, r) <= 0`` for every configuration
    ``r`` of the replicating set. Point records give equality rows.
    """
    policy = IrrelevancePolicy.coerce(policy) or model.policy
    scope = model.dag.sort(model.nodes if scope is None else scope)
    sset = set(scope)
    for n in scope:
        if not set(model.parents(n)) <= sset:
            raise ValueError(f"scope must contain the parents of {n}")
    idx = AtomIndexer(model, scope)
    atoms = list(idx.assignments())
    rows, seen = [], set()
    for node in scope:
        vals = model.values(node)
        for key in model.parent_configs(node):
            canon = local_rows(model, node, key)
            if not canon:
                continue
            for repl_vars in replication_sets(model, policy, node, scope):
                for repl_vals in product(*(model.values(v) for v in repl_vars)):
                    fixed = dict(key)
                    fixed.update(zip(repl_vars, repl_vals))
                    repl = tuple(zip(repl_vars, repl_vals))
                    for gamma, gamma0, rel in canon:
                        coeffs = tuple(
                            (gamma[vals.index(a[node])] - gamma0)
                            if all(a[v] == x for v, x in fixed.items()) else Fraction(0)
                            for a in atoms)
                        if not any(coeffs) or (coeffs, rel) in seen:
                            continue
                        seen.add((coeffs, rel))
                        rows.append(ConstraintRow(coeffs, rel, node, key, repl))
    return ConstraintSystem(idx, rows)


# -- natural extension: programs ------------------------------------------

def _objective(idx, var, evidence, fvec):
    ev = idx.matches(evidence)
    if var in idx.variables:
        pos = idx.variables.index(var)
        vals = idx.values[pos]
        num = [fvec[vals.index(a[var])] * e if e else 0 for a, e in zip(idx.assignments(), ev)]
    else:
        raise ValueError(f"query variable {var} is outside the program scope")
    return num, ev


def build_fractional(model: NetworkModel, query: Query, system: ConstraintSystem, f=None) -> FractionalProgram:
    """Ratio ``p(target, evidence) / p(evidence)`` over the system's atoms, with its rows.

    With ``f`` (value -> number on the target variable) the numerator becomes
    ``sum_x f(x) p(x, evidence)``; ``query.target[1]`` is then ignored.
    """
    var, val = query.target
    fvec = _function_vector(model, var, f) if f is not None else [
        1 if x == val else 0 for x in model.values(var)]
    for v in (var, *query.evidence_map):
        if v not in system.indexer.variables:
            raise ValueError(f"{v} is outside the program scope")
    num, den = _objective(system.indexer, var, query.evidence_map, fvec)
    return FractionalProgram(
        tuple(Fraction(x) for x in num), tuple(Fraction(x) for x in den),
        hom_rows=[r.coeffs for r in system.rows if r.relation == "<="],
        hom_eq=[r.coeffs for r in system.rows if r.relation == "="],
    )


@dataclass
class ReducedProgram:
    credal_part: tuple     # credal nodes and all their ancestors
    point_part: tuple      # everything else; point-specified by construction
    numerator: tuple
    denominator: tuple
    system: ConstraintSystem

    @property
    def indexer(self):
        return self.system.indexer

    def fractional(self) -> FractionalProgram:
        return FractionalProgram(
            self.numerator, self.denominator,
            hom_rows=[r.coeffs for r in self.system.rows if r.relation == "<="],
            hom_eq=[r.coeffs for r in self.system.rows if r.relation == "="],
        )


def split_credal(model: NetworkModel):
    """(credal nodes plus ancestors, remaining nodes), each in topological order."""
    credal = set(model.credal_nodes())
    top = set(credal)
    for n in credal:
        top |= model.dag.ancestors(n)
    rest = [n for n in model.nodes if n not in top]
    return model.dag.sort(top), model.dag.sort(rest)


def reduce_theorem2(model: NetworkModel, query: Query, f=None, policy=None) -> ReducedProgram:
    """Program over the credal part only, point-specified nodes eliminated.

    For every atom ``s`` of the credal part, the point-specified nodes are
    summed out with ``s`` clamped: the numerator keeps the target fixed, the
    denominator sums over it.
    """
    policy = IrrelevancePolicy.coerce(policy) or model.policy
    if policy.kind != "nondescendants":
        raise ReductionNotApplicable("the reduction needs the nondescendants irrelevance policy")
    model.check_query(query)
    top, rest = split_credal(model)
    for n in rest:
        if not model.is_point(n):
            raise ReductionNotApplicable(f"{n} is credal but outside the credal part")
    var, val = query.target
    fvec = _function_vector(model, var, f) if f is not None else [
        1 if x == val else 0 for x in model.values(var)]
    evidence = query.evidence_map
    system = generate_constraints(model, policy, top)
    idx = system.indexer
    rest_set = set(rest)
    selection = {n: {k: r.probs for k, r in model.locals[n].records.items()} for n in rest}
    need = _relevant_ancestors(model.dag, [var, *evidence]) & rest_set
    order = [n for n in model.order() if n in need]
    num, den = [], []
    for s in idx.assignments():
        clamp = dict(evidence)
        if any(v in clamp and clamp[v] != x for v, x in s.items()):
            num.append(Fraction(0))
            den.append(Fraction(0))
            continue
        clamp.update(s)
        factors = [_cpt_factor(model, n, selection[n], True).reduce(clamp) for n in order]
        if var in rest_set:
            fac = _sum_product(factors, {var}, order)
            per_value = [fac.table.get((x,), Fraction(0)) for x in model.values(var)]
        else:
            fac = _sum_product(factors, set(), order)
            mass = fac.table.get((), Fraction(0))
            per_value = [mass if x == s[var] else Fraction(0) for x in model.values(var)]
        num.append(sum((fx * p for fx, p in zip(fvec, per_value)), Fraction(0)))
        den.append(sum(per_value, Fraction(0)))
    return ReducedProgram(top, rest, tuple(num), tuple(den), system)


def _natural(model, query, fvec, f, policy, use_reduction, exact):
    policy = IrrelevancePolicy.coerce(policy) or model.policy
    if use_reduction is None:
        use_reduction = policy.kind == "nondescendants"
    shift = min(fvec)
    # solve for f - min(f) >= 0 so a zero lower evidence probability maps to the vacuous lower value
    g = None if f is None else {x: Fraction(fx) - shift for x, fx in zip(model.values(query.target[0]), fvec)}
    if use_reduction:
        red = reduce_theorem2(model, query, g, policy)
        fp, system = red.fractional(), red.system
    else:
        system = generate_constraints(model, policy)
        fp = build_fractional(model, query, system, g)
    den = denominator_range(fp, exact)
    info = {"method": "natural", "policy": policy.kind, "reduced": bool(use_reduction),
            "atoms": fp.n, "constraints": system.counts()}
    lo = solve_fractional(fp, "min", exact, denominator=den)
    hi = solve_fractional(fp, "max", exact, denominator=den)
    info["pivots"] = lo.pivots + hi.pivots - den.pivots
    if lo.status == Status.VACUOUS_EVIDENCE:
        return _vacuous(fvec, exact, **info)
    s = as_number(shift, exact)
    lower = lo.value + s
    upper = hi.value + s
    return IntervalBounds(lower, upper, lo.status, hi.status, info)


def natural_bounds(model: NetworkModel, query: Query, policy=None, use_reduction=None,
                   exact=True) -> IntervalBounds:
    """Bounds on p(target | evidence) over the natural extension.

    ``policy`` defaults to the model's own. ``use_reduction`` defaults to
    reducing whenever the policy is ``nondescendants``.
    """
    model.check_query(query)
    var, val = query.target
    fvec = [1 if x == val else 0 for x in model.values(var)]
    return _natural(model, query, fvec, None, policy, use_reduction, exact)


def expectation_bounds(model: NetworkModel, variable, f, evidence=(), method="natural",
                       policy=None, use_reduction=None, exact=True, cap=None, prune=True) -> IntervalBounds:
    """Lower and upper expectation of ``f`` (value -> number) on ``variable`` given ``evidence``."""
    values = model.values(variable)
    query = Query((variable, values[0]), evidence)
    model.check_query(query)
    fvec = _function_vector(model, variable, f)
    if method == "type1":
        return _type1(model, variable, query.evidence_map, fvec, exact, cap, prune)
    if method != "natural":
        raise ValueError(f"unknown method {method!r}")
    fmap = dict(zip(values, fvec))
    return _natural(model, query, fvec, fmap, policy, use_reduction, exact)
