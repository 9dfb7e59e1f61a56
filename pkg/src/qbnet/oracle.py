"""Brute-force checkers and seeded random corpora for testing.

Everything here is deliberately naive: path enumeration for d-separation,
explicit sums over joint atoms, evaluation at polytope vertices. None of
it reuses the elimination, simplex or reachability code it is meant to
check.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain, combinations, product

import numpy as np

from .errors import AllDenominatorsZero, EmptyPolytope, OverlappingSets, TooLarge, ZeroEvidence
from .geometry import LinearConstraintSet, enumerate_vertices
from .graph import Dag
from .model import (IntervalRecord, LocalSpec, NetworkModel, PointRecord, Query, Variable,
                    local_vertices)
from .solve import FractionalProgram


@dataclass
class CheckReport:
    checks: int = 0
    failures: list = field(default_factory=list)  # (context, expected, got, tolerance)
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: "CheckReport"):
        self.checks += other.checks
        self.skipped += other.skipped
        self.failures.extend(other.failures)
        return self


# -- d-separation by path enumeration -------------------------------------

def dsep_bruteforce(dag: Dag, x, z, given=(), max_nodes=10) -> bool:
    """Apply the blocking definition to every simple undirected path."""
    nodes = list(dag.nodes)
    if len(nodes) > max_nodes:
        raise TooLarge(f"{len(nodes)} nodes; path enumeration is limited to {max_nodes}")
    x, z, given = set(x), set(z), set(given)
    if x & z or x & given or z & given:
        raise OverlappingSets("X, Z and Y must be pairwise disjoint")
    edges = set(dag.edges)
    nbrs = {n: set() for n in nodes}
    for a, b in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)

    children = {n: [c for p, c in edges if p == n] for n in nodes}
    desc_or_self = {}
    for n in nodes:
        out, stack = set(), [n]
        while stack:
            m = stack.pop()
            if m not in out:
                out.add(m)
                stack.extend(children[m])
        desc_or_self[n] = out

    def active(path):
        for a, m, b in zip(path, path[1:], path[2:]):
            collider = (a, m) in edges and (b, m) in edges
            if collider:
                if not desc_or_self[m] & given:
                    return False
            elif m in given:
                return False
        return True

    def paths_from(start):
        stack = [[start]]
        while stack:
            path = stack.pop()
            last = path[-1]
            if last in z:
                yield path
                continue
            for n in nbrs[last]:
                if n not in path:
                    stack.append(path + [n])

    return not any(active(p) for s in x for p in paths_from(s))


# -- joint enumeration ----------------------------------------------------

def _atoms(model):
    names = list(model.nodes)
    for combo in product(*(model.values(n) for n in names)):
        yield dict(zip(names, combo))


def _joint_prob(model, selection, atom):
    p = Fraction(1)
    for n in model.nodes:
        key = tuple((q, atom[q]) for q in model.parents(n))
        p *= Fraction(selection[n][key][model.values(n).index(atom[n])])
    return p


def joint_enumeration_posterior(model: NetworkModel, selection, query: Query, max_atoms=2**20):
    """p(target | evidence) as an explicit ratio of atom sums."""
    size = 1
    for n in model.nodes:
        size *= model.cardinality(n)
    if size > max_atoms:
        raise TooLarge(f"{size} atoms")
    var, val = query.target
    ev = query.evidence_map
    num = den = Fraction(0)
    for atom in _atoms(model):
        if any(atom[v] != x for v, x in ev.items()):
            continue
        p = _joint_prob(model, selection, atom)
        den += p
        if atom[var] == val:
            num += p
    if den == 0:
        raise ZeroEvidence("evidence has probability zero")
    return num / den


# -- fractional programs at vertices --------------------------------------

@dataclass
class VertexExtrema:
    lower: object
    upper: object
    argmin: tuple
    argmax: tuple
    vertices: tuple


def fractional_feasible_set(fp: FractionalProgram) -> LinearConstraintSet:
    rows = [(a, 0) for a in fp.hom_rows]
    rows += [(a, 0) for a in fp.hom_eq] + [(tuple(-x for x in a), 0) for a in fp.hom_eq]
    rows += list(fp.rows)
    return LinearConstraintSet(fp.n, rows)


def vertex_ratio_extrema(fp: FractionalProgram, exact=True) -> VertexExtrema:
    """Min and max of ``c.w / d.w`` over the vertices with a positive denominator."""
    vs = enumerate_vertices(fractional_feasible_set(fp), exact=exact)
    if vs.empty:
        raise EmptyPolytope("feasible set is empty")
    best_lo = best_hi = None
    for w in vs:
        den = sum(d * x for d, x in zip(fp.d, w))
        if den <= 0:
            continue
        r = sum(c * x for c, x in zip(fp.c, w)) / den
        if best_lo is None or r < best_lo[0]:
            best_lo = (r, w)
        if best_hi is None or r > best_hi[0]:
            best_hi = (r, w)
    if best_lo is None:
        raise AllDenominatorsZero("every vertex has a zero denominator")
    return VertexExtrema(best_lo[0], best_hi[0], best_lo[1], best_hi[1], vs.points)


# -- type-1 joints (vectorized, floating point) ----------------------------

def type1_joints(model: NetworkModel, max_combinations=200_000):
    """Array of shape (combinations, *cards): every joint from local extreme points."""
    names = list(model.nodes)
    records = []
    for n in names:
        for key in model.parent_configs(n):
            verts = np.array([[float(x) for x in p] for p in local_vertices(model, n, key)])
            records.append((n, key, verts))
    total = 1
    for r in records:
        total *= len(r[2])
    if total > max_combinations:
        raise TooLarge(f"{total} vertex combinations")
    choices = np.array(list(product(*(range(len(r[2])) for r in records))), dtype=int).reshape(total, -1)
    letters = {n: chr(ord("a") + i) for i, n in enumerate(names)}
    operands, subscripts = [], []
    for n in names:
        pa = model.parents(n)
        cpt = np.empty((total, *(model.cardinality(p) for p in pa), model.cardinality(n)))
        for col, (m, key, verts) in enumerate(records):
            if m == n:
                idx = tuple(model.values(p).index(v) for p, v in key)
                cpt[(slice(None), *idx)] = verts[choices[:, col]]
        operands.append(cpt)
        subscripts.append("z" + "".join(letters[p] for p in pa) + letters[n])
    spec = ",".join(subscripts) + "->z" + "".join(letters[n] for n in names)
    return names, np.einsum(spec, *operands)


def _marginal(names, joints, keep):
    axes = tuple(i + 1 for i, n in enumerate(names) if n not in keep)
    m = joints.sum(axis=axes)
    kept = [n for n in names if n in keep]
    order = [0] + [kept.index(n) + 1 for n in keep]
    return np.transpose(m, order)


def _triples(names, max_z=None):
    for x in names:
        others = [n for n in names if n != x]
        for zsize in range(1, len(others) + 1):
            if max_z is not None and zsize > max_z:
                break
            for zs in combinations(others, zsize):
                rest = [n for n in others if n not in zs]
                for ys in chain.from_iterable(combinations(rest, k) for k in range(len(rest) + 1)):
                    yield x, zs, ys


def check_theorem1(model: NetworkModel, seed=0, trials=None, tol=1e-6) -> CheckReport:
    """Type-1 bounds on p(x | y, z) agree with p(x | y) whenever Y d-separates X from Z.

    Every (single X, nonempty Z, Y) triple the graph reports as d-separated
    is checked; ``trials`` caps the number of triples (sampled with
    ``seed``).
    """
    names, joints = type1_joints(model)
    triples = [t for t in _triples(names) if model.dag.d_separated({t[0]}, set(t[1]), set(t[2]))]
    if trials is not None and trials < len(triples):
        rng = np.random.default_rng(seed)
        pick = sorted(rng.choice(len(triples), size=trials, replace=False))
        triples = [triples[i] for i in pick]
    report = CheckReport()
    for x, zs, ys in triples:
        xyz = _marginal(names, joints, [x, *ys, *zs])      # (combo, x, y..., z...)
        xy = _marginal(names, joints, [x, *ys])
        y_cfgs = list(product(*(range(model.cardinality(n)) for n in ys)))
        z_cfgs = list(product(*(range(model.cardinality(n)) for n in zs)))
        for yc in y_cfgs:
            den_y = xy[(slice(None), slice(None), *yc)].sum(axis=1)
            if np.any(den_y <= 0):
                report.skipped += 1
                continue
            post_y = xy[(slice(None), slice(None), *yc)] / den_y[:, None]
            lo_y, hi_y = post_y.min(axis=0), post_y.max(axis=0)
            for zc in z_cfgs:
                block = xyz[(slice(None), slice(None), *yc, *zc)]
                den = block.sum(axis=1)
                if np.any(den <= 0):
                    report.skipped += 1
                    continue
                post = block / den[:, None]
                lo, hi = post.min(axis=0), post.max(axis=0)
                report.checks += 1
                err = max(np.abs(lo - lo_y).max(), np.abs(hi - hi_y).max())
                if err > tol:
                    ctx = f"X={x} Z={list(zs)}@{zc} Y={list(ys)}@{yc}"
                    report.failures.append((ctx, (lo_y.tolist(), hi_y.tolist()), (lo.tolist(), hi.tolist()), tol))
    return report


# -- local constraints at replicated vertices --------------------------

def check_lemma2(model: NetworkModel, vertices, scope, max_subset=3, tol=1e-9) -> CheckReport:
    """Conditional local constraints at every vertex of a replicated polytope.

    ``vertices`` are joint tables over ``scope`` (atoms in lexicographic
    order of ``scope``). For each node, parent configuration, local row and
    subset W of its non-parent nondescendants inside the scope (size up to
    ``max_subset``; the empty subset is the unreplicated constraint),
    ``sum_j g_j p(x_j | k, w) <= g0`` must hold wherever ``p(k, w) > 0``.
    """
    scope = list(scope)
    atoms = [dict(zip(scope, c)) for c in product(*(model.values(n) for n in scope))]
    report = CheckReport()
    for w in vertices:
        w = [Fraction(v) if not isinstance(v, float) else v for v in w]

        def prob(event):
            return sum((p for a, p in zip(atoms, w) if all(a[k] == v for k, v in event.items())), 0)

        for node in scope:
            pa = model.parents(node)
            cands = sorted(model.dag.nondescendants(node) - set(pa) & set(scope), key=scope.index)
            subsets = [s for k in range(min(len(cands), max_subset) + 1) for s in combinations(cands, k)]
            for key in model.parent_configs(node):
                rec = model.locals[node].records[key]
                rows = rec.linear_rows()
                for sub in subsets:
                    for wvals in product(*(model.values(n) for n in sub)):
                        cond = dict(key)
                        cond.update(zip(sub, wvals))
                        pc = prob(cond)
                        if pc <= 0:
                            report.skipped += 1
                            continue
                        cond_probs = [prob({**cond, node: v}) / pc for v in model.values(node)]
                        for gamma, gamma0, rel in rows:
                            lhs = sum(g * q for g, q in zip(gamma, cond_probs))
                            report.checks += 1
                            bad = lhs > gamma0 + tol or (rel == "=" and lhs < gamma0 - tol)
                            if bad:
                                ctx = f"{node} | {cond} row {gamma} {rel} {gamma0}"
                                report.failures.append((ctx, gamma0, lhs, tol))
    return report


# -- seeded corpora -------------------------------------------------------

def random_dag(n, rng, edge_prob=0.4, max_parents=None, names=None) -> Dag:
    names = names or [f"X{i}" for i in range(n)]
    perm = list(rng.permutation(n))
    edges = []
    for j in range(n):
        cands = [i for i in range(j)]
        pa = [i for i in cands if rng.random() < edge_prob]
        if max_parents is not None and len(pa) > max_parents:
            pa = sorted(rng.choice(pa, size=max_parents, replace=False).tolist())
        edges += [(names[perm[i]], names[perm[j]]) for i in pa]
    return Dag(names, edges)


def _rand_prob(rng, lo=2, hi=18, den=20):
    return Fraction(int(rng.integers(lo, hi + 1)), den)


def random_network(n=4, seed=0, edge_prob=0.5, max_parents=2, credal_prob=0.5,
                   policy="nondescendants") -> NetworkModel:
    """Binary network with interval locals on some nodes and strictly positive point tables elsewhere."""
    rng = np.random.default_rng(seed)
    dag = random_dag(n, rng, edge_prob, max_parents)
    variables = {name: Variable(name, (f"{name.lower()}1", f"{name.lower()}0")) for name in dag.nodes}
    flags = [rng.random() < credal_prob for _ in dag.nodes]
    if not any(flags):
        flags[int(rng.integers(len(flags)))] = True
    locals_ = {}
    for name, credal in zip(dag.nodes, flags):
        spec = LocalSpec("interval" if credal else "point")
        pa = dag.parents(name)
        for vals in product(*(variables[p].values for p in pa)):
            key = tuple(zip(pa, vals))
            if credal:
                a = _rand_prob(rng, 2, 14)
                b = a + Fraction(int(rng.integers(1, 5)), 20)
                spec.records[key] = IntervalRecord((a, 1 - b), (b, 1 - a))
            else:
                p = _rand_prob(rng, 1, 19)
                spec.records[key] = PointRecord((p, 1 - p))
        locals_[name] = spec
    return NetworkModel(dag, variables, locals_, policy)


def random_fractional_program(seed=0, dim=None, n_rows=None) -> FractionalProgram:
    """A feasible program with strictly positive denominator coefficients."""
    rng = np.random.default_rng(seed)
    dim = dim or int(rng.integers(2, 7))
    n_rows = int(rng.integers(1, 6)) if n_rows is None else n_rows
    # interior anchor point keeps the feasible set nonempty
    anchor = rng.integers(1, 6, size=dim)
    anchor = [Fraction(int(a), int(anchor.sum())) for a in anchor]
    hom, rows = [], []
    for k in range(n_rows):
        a = [Fraction(int(v)) for v in rng.integers(-4, 5, size=dim)]
        val = sum(x * y for x, y in zip(a, anchor))
        if k % 2 == 0:
            if val > 0:
                a = [-x for x in a]
            hom.append(tuple(a))
        else:
            slack = Fraction(int(rng.integers(0, 4)), 10)
            rows.append((tuple(a), val + slack))
    c = tuple(Fraction(int(v)) for v in rng.integers(0, 10, size=dim))
    d = tuple(Fraction(int(v)) for v in rng.integers(1, 10, size=dim))
    return FractionalProgram(c, d, hom_rows=hom, rows=rows)


__all__ = [
    "CheckReport", "VertexExtrema", "check_lemma2", "check_theorem1", "dsep_bruteforce",
    "fractional_feasible_set", "joint_enumeration_posterior", "random_dag", "random_fractional_program",
    "random_network", "type1_joints", "vertex_ratio_extrema",
]
