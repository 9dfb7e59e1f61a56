from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from qbnet.errors import InfeasibleModel
from qbnet.geometry import enumerate_vertices
from qbnet.oracle import fractional_feasible_set, random_fractional_program, vertex_ratio_extrema
from qbnet.solve import (FractionalProgram, LinearProgram, Status, charnes_cooper, solve_fractional,
                         solve_lp)

F = Fraction
ROOT_ROWS = [(-3, 0, 2, 0), (2, 0, -2, 0), (0, -3, 0, 2), (0, 2, 0, -2),
              (-3, 2, 0, 0), (2, -2, 0, 0), (0, 0, -3, 2), (0, 0, 2, -2)]
NUM = (F("0.48"), F("0.06"), F("0.005"), F("0.035"))
DEN = (F("0.6"), F("0.6"), F("0.05"), F("0.05"))


def root_program():
    return FractionalProgram(NUM, DEN, hom_rows=ROOT_ROWS)


def test_simple_max():
    sol = solve_lp(LinearProgram((1, 0), "max", A_eq=[[1, 1]], b_eq=[1]))
    assert sol.status == "optimal" and sol.value == 1 and sol.point == (1, 0)


def test_min_over_root_polytope():
    c = (F("0.6"), F("0.6"), F("0.05"), F("0.05"))
    fp = root_program()
    sol = solve_lp(fp.feasible_lp(c, "min"))
    # oracle: the six vertices
    verts = enumerate_vertices(fractional_feasible_set(fp))
    expected = min(sum(a * b for a, b in zip(c, v)) for v in verts)
    assert expected == F(27, 100)
    assert sol.value == expected


def test_infeasible():
    sol = solve_lp(LinearProgram((0, 0), "max", A_ub=[[-1, 0]], b_ub=[-2], A_eq=[[1, 1]], b_eq=[1]))
    assert sol.status == "infeasible"


def test_unbounded():
    sol = solve_lp(LinearProgram((1, 0), "max", A_ub=[[1, -1]], b_ub=[1]))
    assert sol.status == "unbounded"


def test_beale_cycling_example():
    # cycles under the textbook largest-coefficient rule; Bland's rule terminates
    c = (F(-3, 4), 20, F(-1, 2), 6)
    A = [[F(1, 4), -8, -1, 9], [F(1, 2), -12, F(-1, 2), 3], [0, 0, 1, 0]]
    sol = solve_lp(LinearProgram(c, "min", A, [0, 0, 1]))
    assert sol.status == "optimal"
    assert sol.value == F(-5, 4)


def test_redundant_equalities():
    sol = solve_lp(LinearProgram((1, 2), "max", A_eq=[[1, 1], [2, 2]], b_eq=[1, 2]))
    assert sol.value == 2


def test_negative_rhs_rows():
    # x + y >= 1 written as -x - y <= -1, minimize x + 2y
    sol = solve_lp(LinearProgram((1, 2), "min", A_ub=[[-1, -1]], b_ub=[-1]))
    assert sol.value == 1 and sol.point == (1, 0)


@pytest.mark.parametrize("seed", range(25))
def test_lp_agrees_with_scipy(seed):
    rng = np.random.default_rng(seed)
    n, m = int(rng.integers(2, 6)), int(rng.integers(1, 6))
    A = rng.integers(-5, 6, size=(m, n))
    b = rng.integers(0, 10, size=m)
    c = rng.integers(-5, 6, size=n)
    A_eq, b_eq = [[1] * n], [int(rng.integers(1, 4))]
    ref = linprog(-c, A_ub=A, b_ub=b, A_eq=A_eq, b_eq=b_eq, method="highs")
    lp = LinearProgram(tuple(int(x) for x in c), "max", A.tolist(), b.tolist(), A_eq, b_eq)
    for exact in (True, False):
        sol = solve_lp(lp, exact=exact)
        if ref.status == 2:
            assert sol.status == "infeasible"
        else:
            assert sol.status == "optimal"
            assert float(sol.value) == pytest.approx(-ref.fun, abs=1e-7)


def test_charnes_cooper_constant_denominator():
    fp = FractionalProgram((3, 1), (1, 1), rows=[((1, 0), F(1, 2))])
    lp = charnes_cooper(fp, "max")
    sol = solve_lp(lp)
    *y, t = sol.point
    assert t == 1  # d.y = 1 and sum(y) = t force t = 1
    assert sol.value == solve_lp(fp.feasible_lp((3, 1), "max")).value == 2


def test_charnes_cooper_shape():
    lp = charnes_cooper(root_program(), "max")
    assert lp.n == 5
    assert len(lp.A_ub) == 8 and all(row[-1] == 0 for row in lp.A_ub)
    assert lp.A_eq[-2] == list(DEN) + [0] and lp.b_eq[-2] == 1
    assert lp.A_eq[-1] == [1, 1, 1, 1, -1] and lp.b_eq[-1] == 0


def test_charnes_cooper_inhomogeneous_row():
    fp = FractionalProgram((1, 0), (1, 1), rows=[((1, 0), F(1, 2))])
    lp = charnes_cooper(fp)
    assert lp.A_ub == [[1, 0, F(-1, 2)]] and lp.b_ub == [0]


def test_root_fractional_bounds():
    hi = solve_fractional(root_program(), "max")
    lo = solve_fractional(root_program(), "min")
    assert abs(float(hi.value) - 0.4509) < 1e-4
    assert abs(float(lo.value) - 0.3818) < 1e-4
    assert hi.status == lo.status == Status.EXACT
    assert hi.point == (F(2, 9), F(2, 9), F(2, 9), F(1, 3))
    assert lo.point == (F(2, 11), F(3, 11), F(3, 11), F(3, 11))
    hf = solve_fractional(root_program(), "max", exact=False)
    assert abs(hf.value - float(hi.value)) < 1e-9


def test_numerator_equals_denominator():
    fp = FractionalProgram(DEN, DEN, hom_rows=ROOT_ROWS)
    assert solve_fractional(fp, "max").value == 1
    assert solve_fractional(fp, "min").value == 1


def test_zero_denominator_statuses():
    # d.w can reach 0 (w = (0, 1)) but not everywhere
    fp = FractionalProgram((1, 0), (1, 0))
    lo, hi = solve_fractional(fp, "min"), solve_fractional(fp, "max")
    assert lo.value == 0 and lo.status == Status.LOWER_ENVELOPE_ZERO
    assert hi.value == 1 and hi.status == Status.SUPREMUM_POSITIVE_EVIDENCE
    vac = FractionalProgram((1, 0), (1, 0), rows=[((1, 0), 0)])
    assert solve_fractional(vac, "max").status == Status.VACUOUS_EVIDENCE
    assert solve_fractional(vac, "max").value is None


def test_infeasible_fractional():
    fp = FractionalProgram((1, 0), (1, 1), rows=[((1, 0), -1)])
    with pytest.raises(InfeasibleModel):
        solve_fractional(fp, "max")


def test_denominator_must_be_nonnegative():
    with pytest.raises(ValueError):
        FractionalProgram((1, 0), (1, -1))


@pytest.mark.parametrize("seed", range(50))
def test_matches_vertex_oracle(seed):
    fp = random_fractional_program(seed)
    ref = vertex_ratio_extrema(fp)
    assert solve_fractional(fp, "min").value == ref.lower
    assert solve_fractional(fp, "max").value == ref.upper
    assert abs(solve_fractional(fp, "max", exact=False).value - float(ref.upper)) < 1e-6


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.fractions(min_value=F(1, 100), max_value=100))
def test_scale_invariance(seed, k):
    fp = random_fractional_program(seed)
    scaled = FractionalProgram(tuple(k * x for x in fp.c), tuple(k * x for x in fp.d),
                               fp.hom_rows, fp.hom_eq, fp.rows)
    for sense in ("min", "max"):
        assert solve_fractional(fp, sense).value == solve_fractional(scaled, sense).value


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_weak_duality(seed):
    fp = random_fractional_program(seed)
    hi = solve_fractional(fp, "max").value
    lo = solve_fractional(fp, "min").value
    for w in enumerate_vertices(fractional_feasible_set(fp)):
        r = sum(a * b for a, b in zip(fp.c, w)) / sum(a * b for a, b in zip(fp.d, w))
        assert lo <= r <= hi
