from __future__ import annotations

import random
from fractions import Fraction

import pytest

from optlcl.catalog import NAMES, get_example
from optlcl.classifier import Strategy, classify, threshold_report
from optlcl.debruijn import build
from optlcl.parameters import compute_all
from optlcl.problem import BOT, Aggregation
from optlcl.synthesis import (
    OutOfRange,
    SynthesisError,
    SynthesisPlan,
    gap_distribution,
    gap_walk,
    mean_gap,
    plan_constants,
    satisfiable_from,
    synthesize,
)
from optlcl.verify import solution_value

F = Fraction


def plan_for(name, alpha, deterministic=False):
    p = get_example(name)
    params = compute_all(p)
    c = classify(params, p.objective, p.aggregation, alpha)
    return synthesize(p, params, alpha, c, deterministic=deterministic)


def segment_plans():
    out = []
    for name in NAMES:
        p = get_example(name)
        params = compute_all(p)
        for iv, c in threshold_report(params, p.objective, p.aggregation).pieces:
            if c.strategy in (Strategy.FLEXIBLE, Strategy.CONSTANT_FRAGMENT):
                out.append((name, iv.representative()))
    return out


def window_bound(plan):
    params = compute_all(plan.problem)
    return plan.alpha * params.beta_opt if plan.problem.minimizing else params.beta_opt / plan.alpha


def test_constant_solution_plan():
    plan = plan_for("min-dominating-set", 3)
    assert plan.strategy is Strategy.CONSTANT_SOLUTION
    assert plan.loop_node == ("1", "1", "1")
    assert plan.locality(10**6) == 0


def test_coloring_plan():
    plan = plan_for("min-vertex-coloring", F(3, 2))
    g = build(plan.problem)
    assert plan.strategy is Strategy.FLEXIBLE
    comp = g.scc_id[g.node(plan.anchor)]
    assert {a for v in g.components[comp].members for a in g.tuples[v]} == {"1", "2", "3"}
    for k, w in plan.gap_walks.items():
        assert len(w) == k and solution_value(plan.problem, w) <= 3
    w5 = gap_walk(plan, 5)
    assert len(w5) == 5 and set(w5) <= {"1", "2", "3"}


def test_fragment_plan_for_independent_set():
    plan = plan_for("max-independent-set", F(3, 2))
    g = build(plan.problem)
    assert plan.strategy is Strategy.CONSTANT_FRAGMENT
    assert plan.anchor in (("1", "0"), ("0", "1")) and plan.loop_node == ("0", "0")
    head, tail = plan.connectors
    assert len(head) <= g.gamma and len(tail) <= g.gamma
    assert tail[0] == plan.loop_label
    assert plan.locality(10) == plan.locality(10**6) == plan.long_cut + plan.A_min - 1


@pytest.mark.parametrize("name, alpha", segment_plans())
def test_gap_walks_are_valid_and_within_budget(name, alpha):
    plan = plan_for(name, alpha)
    p = plan.problem
    bound = window_bound(plan)
    assert min(plan.gap_walks) == plan.A_min and max(plan.gap_walks) == plan.B_max
    for k, w in plan.gap_walks.items():
        assert len(w) == k and w[: len(plan.anchor)] == plan.anchor[: min(k, len(plan.anchor))]
        value = solution_value(p, w)
        assert value is not BOT
        if plan.strategy is Strategy.FLEXIBLE:
            if p.is_sum:
                assert (value <= bound * k) if p.minimizing else (value >= bound * k)
            else:
                assert (value <= bound) if p.minimizing else (value >= bound)
    # any composition of segments is a valid labeling
    rng = random.Random(0)
    lengths = sorted(plan.gap_walks)
    for _ in range(30):
        labels = []
        for _ in range(rng.randint(1, 6)):
            labels += plan.segment(rng.choice(lengths))
        if plan.connectors is not None:
            labels += plan.segment(plan.long_cut + rng.randint(1, 20))
        assert solution_value(p, labels) is not BOT


def test_exact_cost_when_margin_is_zero():
    plan = plan_for("sloppy-coloring", 2)
    assert plan.margin == 0
    for k, w in plan.gap_walks.items():
        assert solution_value(plan.problem, w) == 2 * k


def test_out_of_range():
    plan = plan_for("min-vertex-coloring", F(3, 2))
    with pytest.raises(OutOfRange):
        gap_walk(plan, plan.B_max + 1)
    assert len(gap_walk(plan, plan.A_min)) == plan.A_min


def test_plan_constants():
    p = get_example("sloppy-coloring")
    params = compute_all(p)
    a, b, q, cut, n0 = plan_constants(p, params, F(5, 2), Strategy.FLEXIBLE)
    assert b == 3 * a and n0 >= 1
    a, b, q, cut, n0 = plan_constants(p, params, 50, Strategy.CONSTANT_FRAGMENT)
    assert q >= 2 and cut == b and n0 >= 2 * (cut + a - 1) + 2
    with pytest.raises(SynthesisError):
        plan_constants(p, params, 200, Strategy.CONSTANT_SOLUTION)


def test_class_e_has_no_plan():
    from optlcl.problem import make_problem

    p = make_problem("01", 1, "min", "sum", {"01": 1, "10": 1}, default=BOT)
    params = compute_all(p)
    c = classify(params, p.objective, p.aggregation, 2)
    assert c.cls == "E"
    with pytest.raises(SynthesisError):
        synthesize(p, params, 2, c)


def test_deterministic_class_b_uses_flexible():
    plan = plan_for("max-independent-set", F(3, 2), deterministic=True)
    assert plan.strategy is Strategy.FLEXIBLE
    assert plan.notes


@pytest.mark.parametrize("name, expected", list(zip(NAMES, [1, 1, 2, 1, 1])))
def test_satisfiable_from(name, expected):
    assert satisfiable_from(get_example(name)) == expected


def test_gap_distribution():
    for q, a in ((2, 1), (2, 3), (5, 4)):
        d = gap_distribution(q, a, tol=1e-14)
        assert abs(sum(d) - 1) < 1e-9
        assert all(x == 0 for x in d[:a])
        assert abs(sum(k * x for k, x in enumerate(d)) - mean_gap(q, a)) < 1e-6


@pytest.mark.parametrize("name, alpha", segment_plans())
def test_dump_round_trip(name, alpha):
    plan = plan_for(name, alpha)
    back = SynthesisPlan.loads(plan.dumps())
    assert back.problem == plan.problem
    assert back.gap_walks == plan.gap_walks and back.strategy is plan.strategy
    assert back.report_lines() == plan.report_lines()
