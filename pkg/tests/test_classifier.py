from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_problem
from optlcl.catalog import NAMES, get_example
from optlcl.classifier import COMPLEXITY, LOWER_BOUND, Interval, Strategy, breakpoints, classify, threshold_report
from optlcl.parameters import compute_all
from optlcl.tables import EXPECTED_THRESHOLDS

F = Fraction


def cls_of(name, alpha):
    p = get_example(name)
    return classify(compute_all(p), p.objective, p.aggregation, alpha)


@pytest.mark.parametrize(
    "name, alpha, cls, strategy",
    [
        ("sloppy-coloring", F(5, 2), "C", Strategy.FLEXIBLE),
        ("min-dominating-set", F(3), "A", Strategy.CONSTANT_SOLUTION),
        ("min-vertex-coloring", F(7, 5), "D", Strategy.OPTIMAL),
        ("max-independent-set", F(3, 2), "B", Strategy.CONSTANT_FRAGMENT),
        ("max-domatic-partition", F(3), "A", Strategy.CONSTANT_SOLUTION),
        ("min-vertex-coloring", F(3, 2), "C", Strategy.FLEXIBLE),
    ],
)
def test_examples(name, alpha, cls, strategy):
    c = cls_of(name, alpha)
    assert c.cls == cls and c.strategy is strategy
    assert c.lower_bound_note == LOWER_BOUND[cls]


@pytest.mark.parametrize(
    "name, alpha, cls",
    [
        # closed and open endpoints
        ("sloppy-coloring", F(2), "C"),
        ("sloppy-coloring", F(3), "C"),
        ("sloppy-coloring", F(3) + F(1, 10**9), "B"),
        ("sloppy-coloring", F(100) - F(1, 10**9), "B"),
        ("sloppy-coloring", F(100), "A"),
        ("sloppy-coloring", F(2) - F(1, 10**9), "D"),
        ("min-dominating-set", F(1), "D"),
        ("min-dominating-set", F(1) + F(1, 10**9), "B"),
        ("max-independent-set", F(1), "D"),
        ("max-domatic-partition", F(3, 2), "C"),
        ("max-domatic-partition", F(3) - F(1, 10**9), "C"),
    ],
)
def test_boundaries_are_exact(name, alpha, cls):
    assert cls_of(name, alpha).cls == cls


def test_alpha_below_one_rejected():
    with pytest.raises(ValueError, match="alpha must be >= 1"):
        cls_of("sloppy-coloring", F(1, 2))


@pytest.mark.parametrize("name", NAMES)
def test_threshold_report_matches_reference(name):
    p = get_example(name)
    rep = threshold_report(compute_all(p), p.objective, p.aggregation)
    assert [(str(iv), c.cls) for iv, c in rep.pieces] == EXPECTED_THRESHOLDS[name]


@pytest.mark.parametrize("name", NAMES)
def test_report_agrees_with_classify(name):
    p = get_example(name)
    params = compute_all(p)
    rep = threshold_report(params, p.objective, p.aggregation)
    probes = set(breakpoints(params, p.objective, p.aggregation))
    probes |= {b + F(1, 7) for b in probes} | {F(1000)}
    for a in probes:
        assert rep.classify(a).cls == classify(params, p.objective, p.aggregation, a).cls


def test_interval_rendering():
    assert str(Interval(F(1), F(1), True, True)) == "{1}"
    assert str(Interval(F(3), None, True, False)) == "[3,inf)"
    assert str(Interval(F(3, 2), F(3), True, False)) == "[3/2,3)"
    iv = Interval(F(1), F(3), False, False)
    assert F(1) not in iv and F(2) in iv and F(3) not in iv
    assert iv.representative() == 2
    assert Interval(F(3), None, False, False).representative() == 4


def test_complexity_rows():
    assert COMPLEXITY["B"] == ("Theta(log* n)", "O(1)")
    assert COMPLEXITY["D"] == ("Theta(n)", "Theta(n)")
    assert set(LOWER_BOUND) == set("ABCDE")


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_random_reports_are_monotone_partitions(seed):
    p = random_problem(random.Random(seed))
    params = compute_all(p)
    c1 = classify(params, p.objective, p.aggregation, 1)
    if c1.cls == "E":
        assert classify(params, p.objective, p.aggregation, 50).cls == "E"
        return
    rep = threshold_report(params, p.objective, p.aggregation)
    pieces = rep.pieces
    assert pieces[0][0].lo == 1 and pieces[0][0].lo_closed
    assert pieces[-1][0].hi is None
    for (a, _), (b, _) in zip(pieces, pieces[1:]):
        assert a.hi == b.lo and a.hi_closed != b.lo_closed
    # larger alpha never moves to a harder class
    order = "DCBA"
    ranks = [order.index(c.cls) for _, c in pieces]
    assert ranks == sorted(ranks)
    for iv, c in pieces:
        assert classify(params, p.objective, p.aggregation, iv.representative()).cls == c.cls
