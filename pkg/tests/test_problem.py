from __future__ import annotations

from fractions import Fraction

import pytest

from optlcl.catalog import NAMES, builtin_examples, get_example
from optlcl.problem import (
    BOT,
    ProblemError,
    UnsupportedCombination,
    format_problem,
    format_value,
    make_problem,
    neighborhood_cost,
    parse_cost,
    parse_problem,
    parse_rational,
)

MIS_TEXT = """\
# maximum independent set
alphabet: 0 1
radius: 1
objective: max
aggregation: sum
cost 0 0 = 0
cost 0 1 = 0
cost 1 0 = 1
cost 1 1 = bot
"""


def test_parse_independent_set_text():
    p = parse_problem(MIS_TEXT)
    assert len(p.costs) == 4
    assert sum(1 for c in p.costs.values() if c is BOT) == 1
    assert p.cost(("1", "0")) == 1
    assert p == get_example("max-independent-set")


def test_unsupported_combination_names_line():
    text = MIS_TEXT.replace("objective: max", "objective: min").replace("aggregation: sum", "aggregation: min")
    with pytest.raises(UnsupportedCombination) as e:
        parse_problem(text)
    assert e.value.line == 5


def test_default_fills_missing_tuples():
    text = MIS_TEXT.replace("cost 0 0 = 0\n", "").replace("cost 1 1 = bot\n", "") + "default = bot\n"
    p = parse_problem(text)
    assert p.cost(("0", "0")) is BOT
    assert p.cost(("1", "1")) is BOT


@pytest.mark.parametrize(
    "mutation, line, fragment",
    [
        (("cost 1 0 = 1", "cost 1 0 = -1"), 8, "negative"),
        (("cost 1 0 = 1", "cost 1 2 = 1"), 8, "unknown label"),
        (("cost 1 0 = 1", "cost 1 0 0 = 1"), 8, "arity"),
        (("cost 0 1 = 0", "cost 0 0 = 0"), 7, "duplicate cost"),
        (("radius: 1", "radius: one"), 3, "radius"),
        (("alphabet: 0 1", "alphabet: 0 0"), 2, "duplicate label"),
        (("objective: max", "objective: best"), 4, "objective"),
        (("cost 1 0 = 1", "what is this"), 8, "cannot parse"),
    ],
)
def test_parse_errors_carry_line_numbers(mutation, line, fragment):
    with pytest.raises(ProblemError) as e:
        parse_problem(MIS_TEXT.replace(*mutation))
    assert e.value.line == line
    assert fragment in e.value.message


def test_missing_tuple_without_default():
    with pytest.raises(ProblemError, match="missing cost"):
        parse_problem(MIS_TEXT.replace("cost 1 1 = bot\n", ""))


def test_missing_header():
    with pytest.raises(ProblemError, match="radius"):
        parse_problem(MIS_TEXT.replace("radius: 1\n", ""))


@pytest.mark.parametrize("name", NAMES)
def test_round_trip(name):
    p = get_example(name)
    q = parse_problem(format_problem(p))
    assert q == p and hash(q) == hash(p)


@pytest.mark.parametrize(
    "name, finite",
    [
        ("max-independent-set", 3),
        ("min-dominating-set", 7),
        ("min-vertex-coloring", 6),
        ("max-domatic-partition", 13),
        ("sloppy-coloring", 15),
    ],
)
def test_catalog_finite_entries(name, finite):
    p = get_example(name)
    assert sum(1 for c in p.costs.values() if c is not BOT) == finite


def test_catalog_lookups():
    dom = get_example("min-dominating-set")
    assert dom.alphabet == ("0", "1") and dom.radius == 2 and dom.kind == "min-sum"
    assert dom.cost("000") is BOT
    assert get_example("sloppy-coloring").cost(("a", "a")) == 100
    col = get_example("min-vertex-coloring")
    assert col.radius == 1 and col.kind == "min-max"
    assert all(col.cost((i, i)) is BOT for i in "123")
    assert [n for n, _ in builtin_examples()] == list(NAMES)
    assert get_example("sloppy") is get_example("sloppy-coloring")
    with pytest.raises(KeyError):
        get_example("nope")


def test_neighborhood_cost():
    mis = get_example("max-independent-set")
    assert neighborhood_cost(mis, ("1", "0")) == 1
    assert neighborhood_cost(mis, ("1", "1")) is BOT
    assert neighborhood_cost(get_example("sloppy-coloring"), ("b", "w")) == 1
    with pytest.raises(ProblemError):
        neighborhood_cost(mis, ("1",))
    with pytest.raises(ProblemError):
        neighborhood_cost(mis, ("1", "q"))


def test_rationals_and_values():
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_cost("⊥") is BOT and parse_cost("bot") is BOT
    for bad in ("-1", "1/0", "x", "1e3"):
        with pytest.raises(ValueError):
            parse_rational(bad)
    assert format_value(Fraction(1, 3)) == "1/3"
    assert format_value(None) == "unset"
    assert format_value(True) == "true"
    assert format_value(BOT) == "bot"


def test_validation_in_constructor():
    with pytest.raises(ProblemError):
        make_problem("01", 1, "min", "sum", {"00": -1}, default=0)
    with pytest.raises(UnsupportedCombination):
        make_problem("01", 1, "max", "max", {}, default=0)
    with pytest.raises(ProblemError):
        make_problem("", 1, "min", "sum", {}, default=0)
