from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from optlcl.problem import BOT, make_problem

ACCEPTANCE_LINES: list[str] = []

KINDS = (("min", "sum"), ("max", "sum"), ("min", "max"), ("max", "min"))


def random_problem(rng: random.Random, max_labels: int = 3, max_radius: int = 2, bot_density: float = 0.25):
    k = rng.randint(1, max_labels)
    r = rng.randint(0, max_radius)
    alphabet = "xyz"[:k]
    obj, agg = rng.choice(KINDS)
    costs = {}
    for t in itertools.product(alphabet, repeat=r + 1):
        if rng.random() < bot_density:
            costs[t] = BOT
        else:
            costs[t] = Fraction(rng.randint(0, 6), rng.randint(1, 3))
    return make_problem(alphabet, r, obj, agg, costs)


@pytest.fixture
def record_acceptance():
    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        status = "PASS" if ok else "FAIL"
        line = f"{status} criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
