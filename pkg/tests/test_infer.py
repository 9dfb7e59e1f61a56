from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qbnet import Query
from qbnet.errors import CombinationCapExceeded, ReductionNotApplicable, ZeroEvidence
from qbnet.geometry import enumerate_vertices
from qbnet.infer import (AtomIndexer, bn_posterior, build_fractional, expectation_bounds,
                         generate_constraints, joint_eval, natural_bounds, reduce_theorem2,
                         requisite_nodes, split_credal, type1_bounds)
from qbnet.oracle import check_lemma2, joint_enumeration_posterior, random_network
from qbnet.solve import Status

F = Fraction


def selection(model, f_first, b_first):
    """Point tables everywhere, with the roots set to the given probability of their first value."""
    sel = {n: {k: r.probs for k, r in model.locals[n].records.items()}
           for n in model.nodes if model.is_point(n)}
    sel["F"] = {(): (f_first, 1 - f_first)}
    sel["B"] = {(): (b_first, 1 - b_first)}
    return sel


def test_atom_indexer(fig1):
    idx = AtomIndexer(fig1, ["F", "B"])
    assert len(idx) == 4
    assert idx.labels() == ["F=f,B=b", "F=f,B=bc", "F=fc,B=b", "F=fc,B=bc"]
    assert idx.index({"F": "fc", "B": "b"}) == 2
    assert idx.assignment(1) == {"F": "f", "B": "bc"}
    assert idx.matches({"B": "b"}) == [1, 0, 1, 0]


def test_joint_eval(fig1):
    sel = selection(fig1, F(1, 2), F(1, 2))
    atom = {"F": "f", "B": "b", "L": "l", "D": "d", "H": "h"}
    # 0.5 * 0.5 * 0.6 * 0.8 * 0.6
    assert joint_eval(fig1, sel, atom) == F(9, 125)


@pytest.mark.parametrize("pf,pb", [(F(2, 5), F(2, 5)), (F(2, 5), F(1, 2)), (F(1, 2), F(2, 5)), (F(1, 2), F(1, 2))])
def test_bn_posterior_matches_enumeration(fig1, d_given_l, pf, pb):
    sel = selection(fig1, pf, pb)
    assert bn_posterior(fig1, sel, d_given_l) == joint_enumeration_posterior(fig1, sel, d_given_l)


def test_bn_posterior_values(fig1, d_given_l):
    assert bn_posterior(fig1, selection(fig1, F(1, 2), F(1, 2)), d_given_l) == F(29, 65)
    assert bn_posterior(fig1, selection(fig1, F(1, 2), F(2, 5)), d_given_l) == F(251, 650)
    # no evidence: p(d) at the 0.4 x 0.4 corner
    q = Query(("D", "d"), {})
    assert bn_posterior(fig1, selection(fig1, F(2, 5), F(2, 5)), q) == joint_enumeration_posterior(
        fig1, selection(fig1, F(2, 5), F(2, 5)), q)


def test_bn_posterior_zero_evidence(fig1):
    sel = selection(fig1, F(1), F(1, 2))
    with pytest.raises(ZeroEvidence):
        bn_posterior(fig1, sel, Query(("D", "d"), {"F": "fc"}))


def test_type1_example(fig1, d_given_l):
    res = type1_bounds(fig1, d_given_l)
    assert (res.lower, res.upper) == (F(251, 650), F(29, 65))
    assert res.info["combinations"] == 4
    assert abs(float(res.lower) - 0.38615) < 1e-5
    assert abs(float(res.upper) - 0.44615) < 1e-5


def test_type1_float(fig1, d_given_l):
    res = type1_bounds(fig1, d_given_l, exact=False)
    assert abs(res.lower - 251 / 650) < 1e-12 and abs(res.upper - 29 / 65) < 1e-12


def test_type1_pruning(fig1):
    # H is a point node, B's table cannot affect p(l | f); F is observed so its table is irrelevant too
    assert requisite_nodes(fig1, "L", {"F"}) == {"L"}
    res = type1_bounds(fig1, Query(("L", "l"), {"F": "f"}))
    assert res.lower == res.upper == F(3, 5)
    assert res.info["combinations"] == 1


@pytest.mark.parametrize("seed", range(8))
def test_pruning_is_sound(seed):
    model = random_network(4, seed=seed)
    for target in model.nodes:
        ev_var = next(n for n in model.nodes if n != target)
        q = Query((target, model.values(target)[0]), {ev_var: model.values(ev_var)[0]})
        a = type1_bounds(model, q, prune=True)
        b = type1_bounds(model, q, prune=False)
        assert (a.lower, a.upper) == (b.lower, b.upper)


def test_combination_cap(fig1, d_given_l, monkeypatch):
    with pytest.raises(CombinationCapExceeded):
        type1_bounds(fig1, d_given_l, cap=3)
    monkeypatch.setenv("QBN_MAX_COMBINATIONS", "2")
    with pytest.raises(CombinationCapExceeded):
        type1_bounds(fig1, d_given_l)


def test_constraint_counts_policy_none(fig1):
    system = generate_constraints(fig1, "none")
    # eight point rows plus the unitary row; two reduced interval rows per root
    assert system.n_equality == 9 and system.n_inequality == 4
    assert len(system.indexer) == 32


def test_constraint_counts_nondescendants(fig1):
    system = generate_constraints(fig1, "nondescendants", ["F", "B"])
    assert system.n_equality == 1 and system.n_inequality == 8
    assert len(system.matrix("<=")) == 8


def test_build_fractional_atom_counts(fig1, d_given_l):
    system = generate_constraints(fig1, "none")
    fp = build_fractional(fig1, d_given_l, system)
    assert sum(1 for x in fp.c if x) == 8
    assert sum(1 for x in fp.d if x) == 16
    fp_empty = build_fractional(fig1, Query(("D", "d"), {}), system)
    assert all(x == 1 for x in fp_empty.d)


def test_reduction_coefficients(fig1, d_given_l):
    red = reduce_theorem2(fig1, d_given_l)
    assert red.credal_part == ("F", "B")
    assert red.numerator == (F("0.48"), F("0.06"), F("0.005"), F("0.035"))
    assert red.denominator == (F("0.6"), F("0.6"), F("0.05"), F("0.05"))


def test_reduction_target_in_credal_part(fig1):
    red = reduce_theorem2(fig1, Query(("F", "f"), {"L": "l"}))
    assert red.numerator == (F(3, 5), F(3, 5), 0, 0)
    assert red.denominator == (F(3, 5), F(3, 5), F(1, 20), F(1, 20))
    a = natural_bounds(fig1, Query(("F", "f"), {"L": "l"}), use_reduction=True)
    b = natural_bounds(fig1, Query(("F", "f"), {"L": "l"}), use_reduction=False)
    assert (a.lower, a.upper) == (b.lower, b.upper)
    # p(f|l) = 0.6 p(f) / (0.6 p(f) + 0.05 p(fc)), increasing in p(f)
    assert a.lower == F(24, 25) * F(2, 5) / (F(24, 25) * F(2, 5) + F(2, 25) * F(3, 5))


def test_split_credal(fig1):
    assert split_credal(fig1) == (("F", "B"), ("L", "D", "H"))


def test_reduction_all_credal():
    model = random_network(3, seed=1, credal_prob=1.0)
    top, rest = split_credal(model)
    assert rest == () and len(top) == 3
    q = Query((model.nodes[0], model.values(model.nodes[0])[0]), {})
    a = natural_bounds(model, q, use_reduction=True)
    b = natural_bounds(model, q, use_reduction=False)
    assert (a.lower, a.upper) == (b.lower, b.upper)


def test_reduction_needs_nondescendants(fig1, d_given_l):
    with pytest.raises(ReductionNotApplicable):
        reduce_theorem2(fig1, d_given_l, policy="none")


def test_natural_nondescendants(fig1, d_given_l):
    red = natural_bounds(fig1, d_given_l, use_reduction=True)
    full = natural_bounds(fig1, d_given_l, use_reduction=False)
    assert (red.lower, red.upper) == (full.lower, full.upper) == (F(21, 55), F(239, 530))
    assert red.lower_status == red.upper_status == Status.EXACT
    assert red.info["reduced"] and not full.info["reduced"]


def test_natural_policy_none(fig1, d_given_l):
    res = natural_bounds(fig1, d_given_l, policy="none")
    assert (res.lower, res.upper) == (0, 1)
    assert res.info["constraints"]["equality"] == 9
    assert res.info["constraints"]["inequality"] == 4


def test_natural_float(fig1, d_given_l):
    res = natural_bounds(fig1, d_given_l, exact=False)
    assert abs(res.lower - 21 / 55) < 1e-9 and abs(res.upper - 239 / 530) < 1e-9


def test_expectation_indicator_matches_probability(fig1, d_given_l):
    e = expectation_bounds(fig1, "D", {"d": 1, "dc": 0}, {"L": "l"})
    p = natural_bounds(fig1, d_given_l)
    assert (e.lower, e.upper) == (p.lower, p.upper)
    t = expectation_bounds(fig1, "D", {"d": 1, "dc": 0}, {"L": "l"}, method="type1")
    assert (t.lower, t.upper) == (F(251, 650), F(29, 65))


def test_expectation_constant(fig1):
    for method in ("natural", "type1"):
        e = expectation_bounds(fig1, "D", {"d": 7, "dc": 7}, {"L": "l"}, method=method)
        assert e.lower == e.upper == 7


def test_expectation_signed(fig1):
    e = expectation_bounds(fig1, "D", {"d": 1, "dc": -1}, {"L": "l"})
    # 2 p(d|l) - 1
    assert e.lower == 2 * F(21, 55) - 1 and e.upper == 2 * F(239, 530) - 1
    e2 = expectation_bounds(fig1, "D", lambda v: 1 if v == "d" else -1, {"L": "l"})
    assert (e2.lower, e2.upper) == (e.lower, e.upper)


def test_expectation_vacuous_policy_none(fig1):
    e = expectation_bounds(fig1, "D", {"d": 1, "dc": -1}, {"L": "l"}, policy="none")
    assert (e.lower, e.upper) == (-1, 1)


def test_zero_lower_evidence_statuses():
    # evidence on a node whose credal set allows probability zero
    from qbnet.model import network_from_dict
    doc = {
        "variables": [{"name": "A", "values": ["a", "ac"]}, {"name": "B", "values": ["b", "bc"]}],
        "edges": [["A", "B"]],
        "local": {
            "A": {"type": "interval", "rows": {"": {"lower": [0, 0], "upper": [1, 1]}}},
            "B": {"type": "point", "rows": {"A=a": [0.5, 0.5], "A=ac": [0.2, 0.8]}},
        },
        "irrelevance": "nondescendants",
    }
    model = network_from_dict(doc)
    # p(a) can be zero, so the lower side is the lower envelope zero and the
    # upper side is the supremum over distributions with p(a) > 0
    res = natural_bounds(model, Query(("B", "b"), {"A": "a"}))
    assert res.lower == 0 and res.lower_status == Status.LOWER_ENVELOPE_ZERO
    assert res.upper == F(1, 2) and res.upper_status == Status.SUPREMUM_POSITIVE_EVIDENCE
    # p(b) >= 0.2 everywhere, so p(a|b) is an ordinary ratio ranging over [0, 1]
    res = natural_bounds(model, Query(("A", "a"), {"B": "b"}))
    assert (res.lower, res.upper) == (0, 1)
    assert res.lower_status == res.upper_status == Status.EXACT


def test_conditional_checks_on_root_polytope(fig1):
    system = generate_constraints(fig1, "nondescendants", ["F", "B"])
    vs = enumerate_vertices(system.polytope())
    assert len(vs) == 6
    report = check_lemma2(fig1, vs.points, ["F", "B"])
    assert report.passed and report.checks > 0


@pytest.mark.parametrize("seed", range(6))
def test_conditional_checks_on_random_polytopes(seed):
    model = random_network(3, seed=seed)
    system = generate_constraints(model, "nondescendants")
    vs = enumerate_vertices(system.polytope())
    assert not vs.empty
    report = check_lemma2(model, vs.points, system.indexer.variables)
    assert report.passed, report.failures[:3]


def _inclusion(model, q):
    t1 = type1_bounds(model, q)
    nd = natural_bounds(model, q, policy="nondescendants")
    no = natural_bounds(model, q, policy="none")
    return t1, nd, no


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**5))
def test_inclusion_chain_random(seed):
    model = random_network(3, seed=seed)
    names = list(model.nodes)
    q = Query((names[-1], model.values(names[-1])[0]), {names[0]: model.values(names[0])[1]})
    t1, nd, no = _inclusion(model, q)
    assert nd.contains(t1) and no.contains(nd)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**5))
def test_full_and_reduced_agree(seed):
    model = random_network(3, seed=seed)
    names = list(model.nodes)
    q = Query((names[0], model.values(names[0])[0]), {names[-1]: model.values(names[-1])[0]})
    a = natural_bounds(model, q, use_reduction=True)
    b = natural_bounds(model, q, use_reduction=False)
    assert (a.lower, a.upper) == (b.lower, b.upper)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**5))
def test_validated_models_have_nonempty_extension(seed):
    model = random_network(3, seed=seed, policy="none")
    fp = build_fractional(model, Query((model.nodes[0], model.values(model.nodes[0])[0]), {}),
                          generate_constraints(model))
    from qbnet.solve import denominator_range
    rng = denominator_range(fp)
    assert rng.high == 1


def test_interval_bounds_str(fig1, d_given_l):
    assert str(type1_bounds(fig1, d_given_l)) == "[251/650, 29/65]"
