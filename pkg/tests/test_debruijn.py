from __future__ import annotations

import itertools
import math
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_problem
from optlcl.catalog import NAMES, get_example
from optlcl.debruijn import (
    SubgraphKind,
    build,
    closed_walk_lengths,
    is_flexible_node,
    labels_to_walk,
    optimal_walk_table,
    subgraph,
    walk_to_labels,
)
from optlcl.problem import BOT, make_problem


def cycle_problem(k: int):
    """Labels 0..k-1 where each label must be followed by its successor mod k."""
    alphabet = [str(i) for i in range(k)]
    costs = {(str(i), str((i + 1) % k)): 1 for i in range(k)}
    return make_problem(alphabet, 1, "min", "sum", costs, default=BOT)


def to_nx(g):
    d = nx.DiGraph()
    d.add_nodes_from(range(len(g)))
    d.add_edges_from((u, v) for u, vs in enumerate(g.succ) for v in vs)
    return d


def test_independent_set_graph():
    g = build(get_example("max-independent-set"))
    assert g.gamma == 4
    assert sorted(g.label(v) for v in range(len(g))) == ["00", "01", "10"]
    edges = {(g.label(u), g.label(v)) for u, vs in enumerate(g.succ) for v in vs}
    assert edges == {("00", "00"), ("00", "01"), ("01", "10"), ("10", "00"), ("10", "01")}


def test_dominating_set_graph():
    g = build(get_example("min-dominating-set"))
    assert g.gamma == 8 and len(g) == 7
    with pytest.raises(KeyError):
        g.node("000")


def test_all_bot_is_empty():
    p = make_problem("01", 1, "min", "sum", {}, default=BOT)
    g = build(p)
    assert len(g) == 0 and g.components == ()


def test_closed_walk_lengths_examples():
    g = build(get_example("max-independent-set"))
    assert closed_walk_lengths(g, g.node("00"), 5) == {1, 2, 3, 4, 5}
    assert closed_walk_lengths(g, g.node("01"), 5) == {2, 3, 4, 5}
    c = build(cycle_problem(3))
    assert closed_walk_lengths(c, 0, 7) == {3, 6}


def test_flexible_nodes():
    g = build(get_example("max-independent-set"))
    assert is_flexible_node(g, g.node("00"))
    c = build(cycle_problem(3))
    assert not any(is_flexible_node(c, v) for v in range(len(c)))
    col = build(get_example("min-vertex-coloring"))
    assert is_flexible_node(col, col.node("12"))


def test_subgraph_examples():
    g = build(get_example("max-independent-set"))
    const = subgraph(g, SubgraphKind.CONST)
    assert [g.label(v) for v in const.nodes] == ["00"] and const.has_self_loop(g.node("00"))
    col = build(get_example("min-vertex-coloring"))
    assert len(subgraph(col, SubgraphKind.GAP)) == 0
    sl = build(get_example("sloppy-coloring"))
    const = subgraph(sl, SubgraphKind.CONST)
    assert [sl.tuples[v] for v in const.nodes] == [("a", "a")]
    assert sl.costs[const.nodes[0]] == 100


def test_walk_table_examples():
    mis = get_example("max-independent-set")
    g = build(mis)
    s = g.node("10")
    t = optimal_walk_table(g, s, 2, mis)
    assert t.total(s, 2) == 1
    assert [g.label(v) for v in t.walk(s, 2)] == ["10", "01", "10"]
    dom = get_example("min-dominating-set")
    d = build(dom)
    s = d.node("100")
    t = optimal_walk_table(d, s, 3, dom)
    assert t.total(s, 3) == 1
    assert walk_to_labels(d, t.walk(s, 3)) == ("1", "0", "0")


@pytest.mark.parametrize("name", NAMES)
def test_length_one_walk_iff_self_loop(name):
    p = get_example(name)
    g = build(p)
    for s in range(len(g)):
        t = optimal_walk_table(g, s, 1, p)
        assert t.has(s, 1) == g.self_loop[s]
        if g.self_loop[s]:
            assert t.total(s, 1) == g.costs[s]


def test_walk_to_labels_examples():
    g = build(get_example("max-independent-set"))
    assert walk_to_labels(g, [g.node("10"), g.node("01"), g.node("10")]) == ("1", "0")
    assert walk_to_labels(g, [g.node("00"), g.node("00")]) == ("0",)
    d = build(get_example("min-dominating-set"))
    assert walk_to_labels(d, [d.node(x) for x in ("100", "001", "010", "100")]) == ("1", "0", "0")
    with pytest.raises(ValueError):
        walk_to_labels(g, [g.node("10"), g.node("01")])
    with pytest.raises(ValueError):
        walk_to_labels(g, [g.node("01"), g.node("00"), g.node("01")])


@pytest.mark.parametrize("name", NAMES)
def test_components_match_networkx(name):
    g = build(get_example(name))
    ours = {frozenset(c.members) for c in g.components if len(c.members) > 1 or g.self_loop[c.members[0]]}
    ref = {frozenset(c) for c in nx.strongly_connected_components(to_nx(g))}
    ref = {c for c in ref if len(c) > 1 or g.self_loop[next(iter(c))]}
    assert ours == ref
    # component ids follow the smallest member
    firsts = [c.members[0] for c in g.components]
    assert firsts == sorted(firsts)


@pytest.mark.parametrize("name", NAMES)
def test_flexibility_matches_aperiodicity(name):
    g = build(get_example(name))
    d = to_nx(g)
    for c in g.components:
        if len(c.members) == 1 and not g.self_loop[c.members[0]]:
            continue
        assert c.flexible == nx.is_aperiodic(d.subgraph(c.members))


def _matrix_lengths(g, v, k_max):
    n = len(g)
    a = np.zeros((n, n), dtype=np.int64)
    for u, vs in enumerate(g.succ):
        for w in vs:
            a[u, w] = 1
    out, m = set(), np.eye(n, dtype=np.int64)
    for k in range(1, k_max + 1):
        m = np.minimum(m @ a, 1)
        if m[v, v]:
            out.add(k)
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_closed_walk_lengths_against_matrix_powers(seed):
    p = random_problem(random.Random(seed))
    g = build(p)
    for v in range(len(g)):
        assert closed_walk_lengths(g, v, 12) == _matrix_lengths(g, v, 12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6))
def test_labelings_are_closed_walks(seed, n):
    p = random_problem(random.Random(seed))
    g = build(p)
    for labels in itertools.product(p.alphabet, repeat=n):
        valid = all(
            p.costs[tuple(labels[(i + j) % n] for j in range(p.radius + 1))] is not BOT for i in range(n)
        )
        if valid:
            w = labels_to_walk(g, labels)
            assert walk_to_labels(g, w) == labels
        else:
            with pytest.raises(ValueError):
                labels_to_walk(g, labels)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_walk_table_is_optimal(seed):
    p = random_problem(random.Random(seed), max_labels=2, max_radius=1)
    g = build(p)
    K = 6
    for s in range(len(g)):
        t = optimal_walk_table(g, s, K, p)
        for k in range(1, K + 1):
            # exhaustive walks s -> s of length k
            totals = []
            for mid in itertools.product(range(len(g)), repeat=k - 1):
                w = (s,) + mid + (s,)
                if all(b in g.succ[a] for a, b in zip(w, w[1:])):
                    vals = [g.costs[x] for x in w[1:]]
                    agg = sum(vals) if p.is_sum else (max(vals) if p.aggregation.value == "max" else min(vals))
                    totals.append(agg)
            if not totals:
                assert not t.has(s, k)
            else:
                assert t.total(s, k) == (min(totals) if p.minimizing else max(totals))


def test_gcd_test_is_exact_on_cycles():
    for k in (1, 2, 3, 5):
        g = build(cycle_problem(k))
        assert math.gcd(*closed_walk_lengths(g, 0, 2 * g.gamma + 1)) == k
