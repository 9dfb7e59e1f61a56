"""Polytopes inside the probability simplex and their vertices."""

from dataclasses import dataclass, field
from itertools import combinations, islice

import numpy as np

from ._numeric import TOL, as_number, as_vector, dot
from .errors import DimensionTooLarge

DEFAULT_MAX_DIMENSION = 12
_CHUNK = 20000
_SINGULAR = 1e-10   # |det| below this counts as a singular basis in the float screen
_SCREEN = 1e-7      # feasibility slack of the float screen; survivors are re-checked


@dataclass(frozen=True)
class LinearConstraintSet:
    """The set ``{w >= 0, sum(w) = 1, a.w <= b for every row}``.

    ``rows`` holds ``(a, b)`` pairs; each ``a`` has ``dimension`` entries.
    """

    dimension: int
    rows: tuple = ()

    def __post_init__(self):
        rows = tuple((tuple(a), b) for a, b in self.rows)
        for a, _ in rows:
            if len(a) != self.dimension:
                raise ValueError(f"row of length {len(a)} in a {self.dimension}-dimensional set")
        object.__setattr__(self, "rows", rows)

    def contains(self, point, tol=TOL) -> bool:
        if len(point) != self.dimension:
            return False
        if any(x < -tol for x in point) or abs(sum(point) - 1) > tol:
            return False
        return all(dot(a, point) <= b + tol for a, b in self.rows)


@dataclass(frozen=True)
class VertexSet:
    points: tuple = ()
    exact: bool = True
    dimension: int = 0
    bases_tried: int = field(default=0, compare=False)

    @property
    def empty(self) -> bool:
        return not self.points

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def _solve_square(matrix, rhs, exact):
    """Gaussian elimination; returns None for a singular system."""
    n = len(rhs)
    m = [list(row) + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        if exact:
            piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        else:
            piv = max(range(col, n), key=lambda r: abs(m[r][col]))
            if abs(m[piv][col]) < 1e-12:
                piv = None
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pivot_row = m[col]
        inv = 1 / pivot_row[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] * inv
                row = m[r]
                for k in range(col, n + 1):
                    if pivot_row[k] != 0:
                        row[k] -= f * pivot_row[k]
    return [m[i][n] / m[i][i] for i in range(n)]


def _independent(rows, exact):
    """Greedy maximal subset of ``(a, b)`` rows with linearly independent ``a``."""
    basis, kept = [], []
    for a, b in rows:
        v = list(a)
        for pivot, brow in basis:
            if v[pivot] != 0:
                f = v[pivot] / brow[pivot]
                v = [x - f * y for x, y in zip(v, brow)]
        if not exact:
            v = [0.0 if abs(x) < 1e-12 else x for x in v]
        pivot = next((k for k, x in enumerate(v) if x != 0), None)
        if pivot is not None:
            basis.append((pivot, v))
            kept.append((a, b))
    return kept


def enumerate_vertices(cs: LinearConstraintSet, exact=True, max_dimension=DEFAULT_MAX_DIMENSION,
                       tol=TOL) -> VertexSet:
    """Extreme points of ``cs`` by brute-force basis enumeration.

    Every choice of inequality rows (nonnegativity facets included) that
    completes ``sum(w) = 1`` and the equality rows to a square system is
    made tight; feasible solutions of the nonsingular systems are the
    vertices. Equalities are recognized as a row paired with its negation. An infeasible
    set yields an empty ``VertexSet`` (``.empty`` is true).
    """
    n = cs.dimension
    if n > max_dimension:
        raise DimensionTooLarge(f"dimension {n} exceeds the cap of {max_dimension}")
    if n == 0:
        return VertexSet((), exact, 0)
    tol = 0 if exact else tol
    rows = [(as_vector(a, exact), as_number(b, exact)) for a, b in cs.rows]
    zero, one = as_number(0, exact), as_number(1, exact)
    facets = rows + [(tuple(-one if i == j else zero for i in range(n)), zero) for j in range(n)]
    # a row together with its negation is an equality; such rows are tight at
    # every point, so they join each basis instead of being chosen
    paired = set()
    for i, (a, b) in enumerate(rows):
        if i in paired:
            continue
        neg = (tuple(-x for x in a), -b)
        j = next((j for j in range(i + 1, len(rows)) if j not in paired and rows[j] == neg), None)
        if j is not None:
            paired.update((i, j))
    fixed = _independent([(tuple([one] * n), one)] + [rows[i] for i in sorted(paired)], exact)
    free = [f for i, f in enumerate(facets) if i not in paired]
    k = n - len(fixed)
    # screen every basis in floating point, then confirm survivors in the requested arithmetic
    fixed_a = np.array([[float(x) for x in a] for a, _ in fixed]).reshape(len(fixed), n)
    fixed_b = np.array([float(b) for _, b in fixed])
    free_a = np.array([[float(x) for x in a] for a, _ in free]).reshape(len(free), n)
    free_b = np.array([float(b) for _, b in free])
    all_a = np.array([[float(x) for x in a] for a, _ in facets])
    all_b = np.array([float(b) for _, b in facets])
    candidates = {}
    tried = 0
    combos = combinations(range(len(free)), k)
    while True:
        batch = list(islice(combos, _CHUNK))
        if not batch:
            break
        chunk = np.array(batch, dtype=int).reshape(len(batch), k)
        tried += len(chunk)
        mats = np.concatenate([np.broadcast_to(fixed_a, (len(chunk), *fixed_a.shape)), free_a[chunk]], axis=1)
        rhs = np.concatenate([np.broadcast_to(fixed_b, (len(chunk), len(fixed_b))), free_b[chunk]], axis=1)
        ok = np.abs(np.linalg.det(mats)) > _SINGULAR
        if not ok.any():
            continue
        w = np.linalg.solve(mats[ok], rhs[ok][..., None])[..., 0]
        feasible = (np.abs(w.sum(axis=1) - 1) <= _SCREEN) & np.all(w @ all_a.T <= all_b + _SCREEN, axis=1)
        for subset, point in zip(chunk[ok][feasible], w[feasible]):
            candidates.setdefault(tuple(np.round(point, 8)), []).append(tuple(subset))
    found = []
    for subsets in candidates.values():
        for subset in subsets:
            chosen = fixed + [free[i] for i in subset]
            w = _solve_square([a for a, _ in chosen], [b for _, b in chosen], exact)
            if w is None:
                continue
            if not exact:
                w = [0.0 if abs(x) <= tol else x for x in w]
            if abs(sum(w) - 1) <= tol and all(dot(a, w) <= b + tol for a, b in facets):
                found.append(tuple(w))
                break
    points = dedup(found, tol)
    points.sort()
    return VertexSet(tuple(points), exact, n, tried)


def intervals_to_constraints(lower, upper) -> LinearConstraintSet:
    """Rows ``w_j <= upper_j`` and ``-w_j <= -lower_j``; vacuous bounds are dropped."""
    if len(lower) != len(upper):
        raise ValueError("lower and upper bounds differ in length")
    n = len(lower)
    rows = []
    for j, (lo, hi) in enumerate(zip(lower, upper)):
        e = tuple(1 if i == j else 0 for i in range(n))
        if hi != 1:
            rows.append((e, hi))
        if lo != 0:
            rows.append((tuple(-x for x in e), -lo))
    return LinearConstraintSet(n, tuple(rows))


def dedup(points, tol=0) -> list:
    """Drop points within max-coordinate distance ``tol`` of an earlier one."""
    kept = []
    for p in points:
        p = tuple(p)
        if tol == 0:
            if p not in kept:
                kept.append(p)
        elif all(max(abs(a - b) for a, b in zip(p, q)) > tol for q in kept):
            kept.append(p)
    return kept
