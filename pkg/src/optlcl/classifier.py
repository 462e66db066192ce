"""Complexity classes A-E from problem parameters and an approximation ratio."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .parameters import ProblemParameters
from .problem import BOT, Aggregation, Objective, format_value


class Strategy(str, Enum):
    CONSTANT_SOLUTION = "constant_solution"
    CONSTANT_FRAGMENT = "constant_fragment"
    FLEXIBLE = "flexible"
    OPTIMAL = "optimal"
    NONE = "none"

    @property
    def title(self) -> str:
        return {
            "constant_solution": "Constant solution",
            "constant_fragment": "Constant fragment",
            "flexible": "Flexible",
            "optimal": "Optimal",
            "none": "None",
        }[self.value]


CLASS_STRATEGY = {
    "A": Strategy.CONSTANT_SOLUTION,
    "B": Strategy.CONSTANT_FRAGMENT,
    "C": Strategy.FLEXIBLE,
    "D": Strategy.OPTIMAL,
    "E": Strategy.NONE,
}

# (deterministic, randomized)
COMPLEXITY = {
    "A": ("O(1)", "O(1)"),
    "B": ("Theta(log* n)", "O(1)"),
    "C": ("Theta(log* n)", "Theta(log* n)"),
    "D": ("Theta(n)", "Theta(n)"),
    "E": ("unsolvable", "unsolvable"),
}

LOWER_BOUND = {
    "A": "none needed (constant upper bound)",
    "B": "Omega(log* n) deterministic: constant-output argument on sorted identifiers; O(1) randomized",
    "C": "Omega(log* n) randomized: an O(1) algorithm would yield a cheap gap/constant solution",
    "D": "Omega(n): a sublinear algorithm would realize a flexible cycle at cost below the threshold",
    "E": "no solution for infinitely many n",
}

ORDER = "DCBA"  # increasing α moves right along this string


@dataclass(frozen=True)
class Classification:
    cls: str
    strategy: Strategy
    matched: str
    lower_bound_note: str

    @property
    def det(self) -> str:
        return COMPLEXITY[self.cls][0]

    @property
    def rand(self) -> str:
        return COMPLEXITY[self.cls][1]

    def report_lines(self) -> list[str]:
        return [
            f"class = {self.cls}",
            f"strategy = {self.strategy.value}",
            f"det = {self.det}",
            f"rand = {self.rand}",
            f'matched = "{self.matched}"',
            f'lower_bound = "{self.lower_bound_note}"',
        ]


def _make(cls: str, matched: str) -> Classification:
    return Classification(cls, CLASS_STRATEGY[cls], matched, LOWER_BOUND[cls])


def _require(params: ProblemParameters, names):
    for n in names:
        if getattr(params, n) is None:
            raise ValueError(f"parameter {n} is required for this problem kind but is unset")


def classify(params: ProblemParameters, obj, aggr, alpha) -> Classification:
    obj = Objective(obj)
    aggr = Aggregation(aggr)
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    minimize = obj is Objective.MIN
    if minimize:
        lhs_text = "alpha*beta_opt"
        ge_sym, gt_sym, lt_sym = ">=", ">", "<"
    else:
        lhs_text = "beta_opt/alpha"
        ge_sym, gt_sym, lt_sym = "<=", "<", ">"

    if aggr is Aggregation.SUM:
        if params.beta_flex is BOT:
            return _make("E", "beta_flex = bot")
        _require(params, ("beta_opt", "delta_flex", "beta_gap", "delta_gap", "beta_const"))
    else:
        _require(params, ("beta_opt", "beta_coprime", "beta_const"))
        if params.beta_coprime is BOT:
            return _make("E", "beta_coprime = bot")
    assert params.beta_opt is not BOT, "beta_opt is bot while a flexible cycle exists"

    lhs = alpha * params.beta_opt if minimize else params.beta_opt / alpha

    def ge(x) -> bool:
        if x is BOT:
            return False
        return lhs >= x if minimize else lhs <= x

    def gt(x) -> bool:
        if x is BOT:
            return False
        return lhs > x if minimize else lhs < x

    if ge(params.beta_const):
        return _make("A", f"{lhs_text} {ge_sym} beta_const")
    if aggr is Aggregation.SUM:
        if params.delta_gap:
            if gt(params.beta_gap):
                return _make("B", f"{lhs_text} {gt_sym} beta_gap and delta_gap true")
        elif ge(params.beta_gap):
            return _make("B", f"{lhs_text} {ge_sym} beta_gap and delta_gap false")
        if params.delta_flex:
            if gt(params.beta_flex):
                return _make("C", f"{lhs_text} {gt_sym} beta_flex and delta_flex true")
        elif ge(params.beta_flex):
            return _make("C", f"{lhs_text} {ge_sym} beta_flex and delta_flex false")
        if lhs == params.beta_flex:
            return _make("D", f"{lhs_text} = beta_flex and delta_flex true")
        return _make("D", f"{lhs_text} {lt_sym} beta_flex")
    if ge(params.beta_coprime):
        return _make("C", f"{lhs_text} {ge_sym} beta_coprime")
    return _make("D", f"{lhs_text} {lt_sym} beta_coprime")


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction | None  # None is +infinity
    lo_closed: bool
    hi_closed: bool

    def __contains__(self, alpha) -> bool:
        a = Fraction(alpha)
        if a < self.lo or (a == self.lo and not self.lo_closed):
            return False
        if self.hi is None:
            return True
        return a < self.hi or (a == self.hi and self.hi_closed)

    def representative(self) -> Fraction:
        """Left endpoint if closed, else the midpoint (or lo+1 when unbounded)."""
        if self.lo_closed:
            return self.lo
        if self.hi is None:
            return self.lo + 1
        return (self.lo + self.hi) / 2

    def __str__(self) -> str:
        lo = format_value(self.lo)
        if self.hi is not None and self.hi == self.lo:
            return "{" + lo + "}"
        hi = "inf" if self.hi is None else format_value(self.hi)
        return f"{'[' if self.lo_closed else '('}{lo},{hi}{']' if self.hi_closed else ')'}"


@dataclass(frozen=True)
class ThresholdReport:
    pieces: tuple[tuple[Interval, Classification], ...]

    def classify(self, alpha) -> Classification:
        for iv, c in self.pieces:
            if alpha in iv:
                return c
        raise ValueError(f"alpha {alpha} not covered")

    def lines(self) -> list[str]:
        return [f"{iv}: {c.cls} {c.strategy.title}" for iv, c in self.pieces]


def breakpoints(params: ProblemParameters, obj, aggr) -> list[Fraction]:
    """Alpha values >= 1 at which the class may change."""
    obj = Objective(obj)
    names = ("beta_const", "beta_gap", "beta_flex") if Aggregation(aggr) is Aggregation.SUM else ("beta_const", "beta_coprime")
    opt = params.beta_opt
    out = {Fraction(1)}
    if opt is BOT:
        return [Fraction(1)]
    for n in names:
        x = getattr(params, n)
        if x is None or x is BOT:
            continue
        if obj is Objective.MIN:
            if opt > 0:
                out.add(Fraction(x) / opt)
        elif x > 0:
            out.add(Fraction(opt) / x)
    return sorted(b for b in out if b >= 1)


def threshold_report(params: ProblemParameters, obj, aggr) -> ThresholdReport:
    """Partition of [1, inf) into maximal intervals of constant classification."""
    pts = breakpoints(params, obj, aggr)
    # sample each breakpoint and each open gap between/after them
    samples: list[tuple[Interval, Classification]] = []
    for i, b in enumerate(pts):
        samples.append((Interval(b, b, True, True), classify(params, obj, aggr, b)))
        nxt = pts[i + 1] if i + 1 < len(pts) else None
        probe = (b + nxt) / 2 if nxt is not None else b + 1
        samples.append((Interval(b, nxt, False, False), classify(params, obj, aggr, probe)))
    merged: list[list] = []
    for iv, c in samples:
        if merged and merged[-1][1].cls == c.cls:
            prev = merged[-1][0]
            merged[-1][0] = Interval(prev.lo, iv.hi, prev.lo_closed, iv.hi_closed)
        else:
            merged.append([iv, c])
    return ThresholdReport(tuple((iv, c) for iv, c in merged))
