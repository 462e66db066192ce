"""Built-in example problems."""

from __future__ import annotations

import itertools

from .problem import BOT, OptLcl, make_problem


def max_independent_set() -> OptLcl:
    return make_problem(
        "01", 1, "max", "sum",
        {"00": 0, "01": 0, "10": 1, "11": BOT},
        name="max-independent-set",
    )


def min_dominating_set() -> OptLcl:
    costs = {"000": BOT}
    for t in ("001", "010", "011"):
        costs[t] = 0
    for t in ("100", "101", "110", "111"):
        costs[t] = 1
    return make_problem("01", 2, "min", "sum", costs, name="min-dominating-set")


def min_vertex_coloring() -> OptLcl:
    costs = {}
    for i, j in itertools.product("123", repeat=2):
        costs[(i, j)] = BOT if i == j else int(i)
    return make_problem("123", 1, "min", "max", costs, name="min-vertex-coloring")


def max_domatic_partition() -> OptLcl:
    costs = {("a1", "a1", "a1"): 1}
    for t in ("a2 a2 b2", "a2 b2 a2", "a2 b2 b2", "b2 a2 a2", "b2 a2 b2", "b2 b2 a2"):
        costs[tuple(t.split())] = 2
    for t in itertools.permutations(("a3", "b3", "c3")):
        costs[t] = 3
    return make_problem(
        ("a1", "a2", "b2", "a3", "b3", "c3"), 2, "max", "min", costs,
        default=BOT, name="max-domatic-partition",
    )


def sloppy_coloring() -> OptLcl:
    # The 3-coloring palette uses b' so that it stays disjoint from the {b, w} palette.
    costs = {("b", "w"): 1, ("w", "b"): 1, ("a", "a"): 100}
    for i, j in itertools.permutations("123", 2):
        costs[(i, j)] = 2
    for i, j in itertools.permutations(("a", "b'", "c"), 2):
        costs[(i, j)] = 3
    return make_problem(
        ("b", "w", "1", "2", "3", "a", "b'", "c"), 1, "min", "sum", costs,
        default=BOT, name="sloppy-coloring",
    )


_BUILDERS = {
    "max-independent-set": max_independent_set,
    "min-dominating-set": min_dominating_set,
    "min-vertex-coloring": min_vertex_coloring,
    "max-domatic-partition": max_domatic_partition,
    "sloppy-coloring": sloppy_coloring,
}

NAMES = tuple(_BUILDERS)

ALIASES = {
    "max-ind-set": "max-independent-set",
    "min-dom": "min-dominating-set",
    "min-dom-set": "min-dominating-set",
    "coloring": "min-vertex-coloring",
    "domatic": "max-domatic-partition",
    "sloppy": "sloppy-coloring",
}

_cache: dict[str, OptLcl] = {}


def builtin_examples() -> list[tuple[str, OptLcl]]:
    return [(name, get_example(name)) for name in NAMES]


def get_example(name: str) -> OptLcl:
    key = ALIASES.get(name, name)
    if key not in _BUILDERS:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(NAMES)}")
    if key not in _cache:
        _cache[key] = _BUILDERS[key]()
    return _cache[key]

