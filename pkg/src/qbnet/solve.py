"""Linear and linear-fractional programming.

The simplex implementation works over Fractions (exact) or floats, uses
Bland's lowest-index rule for both the entering and the leaving variable,
and is meant for the small, highly degenerate programs produced by
constraint replication. Fractional programs are reduced to LPs with the
Charnes-Cooper change of variables ``y = t*w``.
"""

import enum
import math
from dataclasses import dataclass, field

from ._numeric import TOL, as_number, as_vector, dot
from .errors import InfeasibleModel


class Status(str, enum.Enum):
    EXACT = "exact"
    LOWER_ENVELOPE_ZERO = "lower_envelope_zero"
    VACUOUS_EVIDENCE = "vacuous_evidence"
    # max side when the evidence has lower probability zero: supremum over
    # distributions that give the evidence positive probability
    SUPREMUM_POSITIVE_EVIDENCE = "supremum_positive_evidence"
    UNBOUNDED = "unbounded"

    def __str__(self):
        return self.value


@dataclass
class LinearProgram:
    """Optimize ``c.y`` subject to ``A_ub y <= b_ub``, ``A_eq y = b_eq``, ``y >= 0``."""

    c: tuple
    sense: str = "max"
    A_ub: list = field(default_factory=list)
    b_ub: list = field(default_factory=list)
    A_eq: list = field(default_factory=list)
    b_eq: list = field(default_factory=list)

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', not {self.sense!r}")
        n = len(self.c)
        if len(self.A_ub) != len(self.b_ub) or len(self.A_eq) != len(self.b_eq):
            raise ValueError("row and right-hand-side counts differ")
        for row in list(self.A_ub) + list(self.A_eq):
            if len(row) != n:
                raise ValueError(f"row of length {len(row)} for {n} variables")

    @property
    def n(self):
        return len(self.c)


@dataclass
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: object = None
    point: tuple = None
    pivots: int = 0


def _pivot(T, zrows, basis, r, j):
    prow = T[r]
    p = prow[j]
    if p != 1:
        prow[:] = [v / p for v in prow]
    nz = [k for k, v in enumerate(prow) if v != 0]
    for row in (*T, *zrows):
        if row is prow:
            continue
        f = row[j]
        if f != 0:
            for k in nz:
                row[k] -= f * prow[k]
    basis[r] = j


def _clean(T, zrows, exact, tol):
    if exact:
        return
    for row in (*T, *zrows):
        for k, v in enumerate(row):
            if v != 0 and abs(v) <= tol:
                row[k] = 0.0


def _run(T, zrow, basis, allowed, exact, tol, extra_z=()):
    """Minimize the objective whose reduced costs are in ``zrow``. Returns (status, pivots)."""
    pivots = 0
    eps = 0 if exact else tol
    while True:
        j = next((k for k in allowed if zrow[k] < -eps), None)
        if j is None:
            return "optimal", pivots
        best, r = None, None
        for i, row in enumerate(T):
            a = row[j]
            if a > eps:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[r]):
                    best, r = ratio, i
        if r is None:
            return "unbounded", pivots
        _pivot(T, (zrow, *extra_z), basis, r, j)
        _clean(T, (zrow, *extra_z), exact, tol)
        pivots += 1


def solve_lp(lp: LinearProgram, exact=True, tol=TOL) -> LpSolution:
    """Two-phase tableau simplex with Bland's rule.

    Deterministic: ties in the ratio test go to the lowest basic index, so
    the returned vertex depends only on the input order.
    """
    zero, one = as_number(0, exact), as_number(1, exact)
    n = lp.n
    c = as_vector(lp.c, exact)
    ub = [(as_vector(a, exact), as_number(b, exact)) for a, b in zip(lp.A_ub, lp.b_ub)]
    eq = [(as_vector(a, exact), as_number(b, exact)) for a, b in zip(lp.A_eq, lp.b_eq)]
    m_ub = len(ub)
    rows, basis, art_rows = [], [], []
    for i, (a, b) in enumerate(ub):
        slack = [zero] * m_ub
        slack[i] = one
        if b >= 0:
            rows.append(list(a) + slack + [b])
            basis.append(n + i)
        else:
            slack[i] = -one
            rows.append([-x for x in a] + slack + [-b])
            basis.append(None)
            art_rows.append(len(rows) - 1)
    for a, b in eq:
        if b >= 0:
            rows.append(list(a) + [zero] * m_ub + [b])
        else:
            rows.append([-x for x in a] + [zero] * m_ub + [-b])
        basis.append(None)
        art_rows.append(len(rows) - 1)
    n_real = n + m_ub
    n_art = len(art_rows)
    T = []
    for i, row in enumerate(rows):
        art = [zero] * n_art
        if i in art_rows:
            k = art_rows.index(i)
            art[k] = one
            basis[i] = n_real + k
        T.append(row[:-1] + art + [row[-1]])
    width = n_real + n_art

    # phase-2 objective row (minimization form) carried along during phase 1
    sign = -one if lp.sense == "max" else one
    z2 = [sign * x for x in c] + [zero] * (width - n) + [zero]
    pivots = 0
    if n_art:
        z1 = [zero] * n_real + [one] * n_art + [zero]
        for i in art_rows:
            z1 = [u - v for u, v in zip(z1, T[i])]
        status, k = _run(T, z1, basis, range(width), exact, tol, extra_z=(z2,))
        pivots += k
        if -z1[-1] > (0 if exact else tol):
            return LpSolution("infeasible", pivots=pivots)
        # drive remaining artificials out of the basis
        r = 0
        while r < len(T):
            if basis[r] >= n_real:
                j = next((k for k in range(n_real) if abs(T[r][k]) > (0 if exact else tol)), None)
                if j is None:
                    del T[r]
                    del basis[r]
                    continue
                _pivot(T, (z2,), basis, r, j)
                pivots += 1
            r += 1
    for i, b in enumerate(basis):
        f = z2[b]
        if f != 0:
            z2 = [u - f * v for u, v in zip(z2, T[i])]
    status, k = _run(T, z2, basis, range(n_real), exact, tol)
    pivots += k
    if status == "unbounded":
        value = math.inf if lp.sense == "max" else -math.inf
        return LpSolution("unbounded", value, None, pivots)
    y = [zero] * n
    for i, b in enumerate(basis):
        if b < n:
            y[b] = T[i][-1]
    value = dot(c, y)
    return LpSolution("optimal", value, tuple(y), pivots)


@dataclass
class FractionalProgram:
    """Optimize ``c.w / d.w`` over ``{w >= 0, sum(w) = 1}`` and the rows.

    ``hom_rows`` are ``a.w <= 0``, ``hom_eq`` are ``a.w = 0`` and
    ``rows`` are inhomogeneous ``(a, b)`` pairs meaning ``a.w <= b``.
    """

    c: tuple
    d: tuple
    hom_rows: list = field(default_factory=list)
    hom_eq: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def __post_init__(self):
        n = len(self.c)
        if len(self.d) != n:
            raise ValueError("numerator and denominator lengths differ")
        if any(x < 0 for x in self.d):
            raise ValueError("denominator coefficients must be nonnegative")
        for a in list(self.hom_rows) + list(self.hom_eq) + [a for a, _ in self.rows]:
            if len(a) != n:
                raise ValueError(f"row of length {len(a)} for {n} atoms")

    @property
    def n(self):
        return len(self.c)

    def feasible_lp(self, objective, sense) -> LinearProgram:
        """LP with the same feasible set and a linear objective."""
        zeros = [0] * len(self.hom_rows)
        return LinearProgram(
            tuple(objective), sense,
            A_ub=[list(a) for a in self.hom_rows] + [list(a) for a, _ in self.rows],
            b_ub=zeros + [b for _, b in self.rows],
            A_eq=[list(a) for a in self.hom_eq] + [[1] * self.n],
            b_eq=[0] * len(self.hom_eq) + [1],
        )


def charnes_cooper(fp: FractionalProgram, sense="max") -> LinearProgram:
    """Homogenize ``fp`` into an LP over ``(y, t)`` with ``y = t*w``.

    Rows become ``A y <= 0`` and ``a.y - b t <= 0``; the denominator is
    normalized by ``d.y = 1`` and the unitary row turns into ``sum(y) - t = 0``.
    """
    A_ub = [list(a) + [0] for a in fp.hom_rows] + [list(a) + [-b] for a, b in fp.rows]
    A_eq = [list(a) + [0] for a in fp.hom_eq]
    A_eq.append(list(fp.d) + [0])
    A_eq.append([1] * fp.n + [-1])
    b_eq = [0] * len(fp.hom_eq) + [1, 0]
    return LinearProgram(tuple(fp.c) + (0,), sense, A_ub, [0] * len(A_ub), A_eq, b_eq)


@dataclass
class FractionalSolution:
    value: object
    status: Status
    point: tuple = None
    pivots: int = 0


@dataclass
class DenominatorRange:
    low: object
    high: object
    pivots: int = 0


def denominator_range(fp: FractionalProgram, exact=True, tol=TOL) -> DenominatorRange:
    """Min and max of ``d.w`` over the feasible set; raises InfeasibleModel if it is empty."""
    lo = solve_lp(fp.feasible_lp(fp.d, "min"), exact, tol)
    if lo.status == "infeasible":
        raise InfeasibleModel("the constraints admit no joint distribution")
    hi = solve_lp(fp.feasible_lp(fp.d, "max"), exact, tol)
    return DenominatorRange(lo.value, hi.value, lo.pivots + hi.pivots)


def solve_fractional(fp: FractionalProgram, sense="max", exact=True, tol=TOL,
                     denominator: DenominatorRange = None) -> FractionalSolution:
    """Optimum of ``c.w / d.w``.

    When the smallest feasible denominator is zero the lower side is the
    lower envelope zero, and the upper side is the supremum over points with
    a positive denominator. ``value`` is None when every feasible point has
    a zero denominator.
    """
    if denominator is None:
        denominator = denominator_range(fp, exact, tol)
    pivots = denominator.pivots
    eps = 0 if exact else tol
    if denominator.high <= eps:
        return FractionalSolution(None, Status.VACUOUS_EVIDENCE, None, pivots)
    positive = denominator.low > eps
    if sense == "min" and not positive:
        return FractionalSolution(as_number(0, exact), Status.LOWER_ENVELOPE_ZERO, None, pivots)
    sol = solve_lp(charnes_cooper(fp, sense), exact, tol)
    pivots += sol.pivots
    if sol.status == "unbounded":
        return FractionalSolution(sol.value, Status.UNBOUNDED, None, pivots)
    if sol.status != "optimal":
        raise InfeasibleModel("homogenized program is infeasible")
    *y, t = sol.point
    w = tuple(v / t for v in y) if t else None
    status = Status.EXACT if positive else Status.SUPREMUM_POSITIVE_EVIDENCE
    return FractionalSolution(sol.value, status, w, pivots)
