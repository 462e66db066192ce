"""Synthesis of distributed strategies: anchors, gap-filling walks, connectors and constants."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field, fields
from fractions import Fraction

from .classifier import Classification, Strategy
from .coloring import cv_rounds, flexible_radii
from .debruijn import SubgraphKind, build, closed_walk_lengths, is_flexible_node, optimal_walk_table, subgraph, walk_to_labels
from .parameters import ProblemParameters
from .problem import BOT, OptLcl, format_problem, format_value, parse_problem

MAX_LEVEL = 8
SAFETY = 2  # fraction 1/SAFETY of the margin is spent in expectation
CONFIDENCE_Z = 4


class SynthesisError(RuntimeError):
    pass


class OutOfRange(ValueError):
    pass


@dataclass
class SynthesisPlan:
    strategy: Strategy
    problem: OptLcl
    alpha: Fraction
    target: str = ""
    margin: Fraction | None = None
    anchor: tuple[str, ...] | None = None
    gap_walks: dict[int, tuple[str, ...]] = field(default_factory=dict)
    loop_node: tuple[str, ...] | None = None
    connectors: tuple[tuple[str, ...], tuple[str, ...]] | None = None
    A_min: int = 0
    B_max: int = 0
    mark_prob_inv: int = 0
    long_cut: int = 0
    n0: int = 1
    level: int = 0
    K0: int | None = None
    expected_rate: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def loop_label(self) -> str:
        return self.loop_node[0]

    def segment(self, g: int) -> tuple[str, ...]:
        """Labels of a whole segment of length g starting at an anchor."""
        if g in self.gap_walks:
            return self.gap_walks[g]
        if self.connectors is not None and g > self.long_cut:
            head, tail = self.connectors
            k = g - len(head) - len(tail)
            return head + (self.loop_label,) * k + tail
        raise OutOfRange(f"segment length {g} not supported by this plan")

    def locality(self, n: int) -> int:
        if self.strategy is Strategy.CONSTANT_SOLUTION:
            return 0
        if self.strategy is Strategy.CONSTANT_FRAGMENT:
            return self.long_cut + self.A_min - 1
        if self.strategy is Strategy.FLEXIBLE:
            return max(flexible_radii(self.level, cv_rounds(n * n + 1)))
        return n // 2

    def report_lines(self) -> list[str]:
        lines = [f"strategy = {self.strategy.value}", f"alpha = {format_value(self.alpha)}"]
        if self.target:
            lines.append(f"target = {self.target}")
        if self.margin is not None:
            lines.append(f"margin = {format_value(self.margin)}")
        if self.loop_node is not None:
            lines.append(f"loop_node = {' '.join(self.loop_node)}")
        if self.anchor is not None:
            lines.append(f"anchor = {' '.join(self.anchor)}")
            lines.append(f"gap_walks = {len(self.gap_walks)} strings for g in [{min(self.gap_walks)},{max(self.gap_walks)}]")
        if self.connectors is not None:
            head, tail = self.connectors
            lines.append(f"connectors = {' '.join(head)} | {' '.join(tail)}")
        if self.strategy in (Strategy.FLEXIBLE, Strategy.CONSTANT_FRAGMENT):
            lines += [f"A_min = {self.A_min}", f"B_max = {self.B_max}"]
            if self.K0 is not None:
                lines.append(f"K0 = {self.K0}")
        if self.strategy is Strategy.FLEXIBLE:
            lines.append(f"level = {self.level}")
            lines.append("locality = left/right radii from levels and Cole-Vishkin rounds (see README)")
        if self.strategy is Strategy.CONSTANT_FRAGMENT:
            lines += [
                f"mark_prob_inv = {self.mark_prob_inv}",
                f"long_cut = {self.long_cut}",
                f"locality = {self.locality(0)}",
                f"expected_rate = {self.expected_rate:.6f}",
            ]
        lines.append(f"n0 = {self.n0}")
        for note in self.notes:
            lines.append(f"note = {note}")
        return lines

    def dumps(self) -> str:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data["notes"] = list(self.notes)
        data["strategy"] = self.strategy.value
        data["problem"] = format_problem(self.problem)
        data["alpha"] = format_value(self.alpha)
        data["margin"] = None if self.margin is None else format_value(self.margin)
        data["gap_walks"] = {str(k): list(v) for k, v in self.gap_walks.items()}
        return json.dumps(data, indent=1)

    @classmethod
    def loads(cls, text: str) -> "SynthesisPlan":
        d = json.loads(text)
        d["strategy"] = Strategy(d["strategy"])
        d["problem"] = parse_problem(d["problem"])
        d["alpha"] = Fraction(d["alpha"])
        d["margin"] = None if d["margin"] is None else Fraction(d["margin"])
        d["gap_walks"] = {int(k): tuple(v) for k, v in d["gap_walks"].items()}
        for key in ("anchor", "loop_node"):
            if d[key] is not None:
                d[key] = tuple(d[key])
        if d["connectors"] is not None:
            d["connectors"] = (tuple(d["connectors"][0]), tuple(d["connectors"][1]))
        return cls(**d)


def gap_walk(plan: SynthesisPlan, g: int) -> tuple[str, ...]:
    if g not in plan.gap_walks:
        raise OutOfRange(f"gap length {g} outside [{plan.A_min}, {plan.B_max}]")
    return plan.gap_walks[g]


# per-segment acceptance


class _Budget:
    """Compares segment totals against the alpha budget of the problem."""

    def __init__(self, p: OptLcl, params: ProblemParameters, alpha: Fraction):
        self.p = p
        opt = params.beta_opt
        self.bound = alpha * opt if p.minimizing else opt / alpha

    def ok(self, total, g: int) -> bool:
        if total is None:
            return False
        limit = self.bound * g if self.p.is_sum else self.bound
        return total <= limit if self.p.minimizing else total >= limit

    def margin(self, beta) -> Fraction:
        return self.bound - beta if self.p.minimizing else beta - self.bound


def _frobenius(lengths) -> int | None:
    ls = sorted(lengths)
    for i, a in enumerate(ls):
        for b in ls[i:]:
            if math.gcd(a, b) == 1:
                return (a - 1) * (b - 1) + max(a, b)
    return None


def _shortest_path(g, src: int, dst: int) -> list[int]:
    prev = {src: None}
    q = deque([src])
    while q:
        u = q.popleft()
        for v in g.succ[u]:
            if v not in prev:
                prev[v] = u
                q.append(v)
    if dst not in prev:
        raise SynthesisError(f"no path {g.label(src)} -> {g.label(dst)}")
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def _walk_labels(g, table, v: int, k: int) -> tuple[str, ...]:
    return walk_to_labels(g, table.walk(v, k))


def _flexible_candidates(p: OptLcl, params: ProblemParameters, fragment_target: bool = False) -> tuple[list[int], str, Fraction]:
    g = build(p)
    if p.is_sum:
        key = "beta_gap" if fragment_target else "beta_flex"
        beta = getattr(params, key)
        view = subgraph(g, SubgraphKind.GAP if fragment_target else SubgraphKind.FLEX)
        first = [v for v in params.witness.get(key, ()) if v in view]
        rest = [v for v in view.nodes]
    else:
        key = "beta_coprime"
        beta = params.beta_coprime
        if p.minimizing:
            view = g.view(v for v, c in enumerate(g.costs) if c <= beta)
        else:
            view = g.view(v for v, c in enumerate(g.costs) if c >= beta)
        first = list(params.witness.get(key, ()))
        rest = [v for v in view.nodes if is_flexible_node(view, v)]
    seen, order = set(), []
    for v in first + rest:
        if v not in seen:
            seen.add(v)
            order.append(v)
    return order, key, beta


def synthesize(
    p: OptLcl,
    params: ProblemParameters,
    alpha,
    cls: Classification,
    deterministic: bool = False,
) -> SynthesisPlan:
    """Build the plan for the class's strategy.

    With ``deterministic`` a class-B problem gets the flexible construction,
    which is the deterministic realization of that class.
    """
    alpha = Fraction(alpha)
    strategy = cls.strategy
    if strategy is Strategy.NONE:
        raise SynthesisError("class E: no algorithm exists")
    if strategy is Strategy.CONSTANT_SOLUTION:
        g = build(p)
        w = params.witness.get("beta_const")
        if not w:
            raise SynthesisError("constant solution requested but no self-loop exists")
        plan = SynthesisPlan(strategy, p, alpha, target="beta_const", loop_node=g.tuples[w[0]])
        return plan
    if strategy is Strategy.OPTIMAL:
        plan = SynthesisPlan(strategy, p, alpha, notes=["exact closed-walk DP over the full view"])
        plan.n0 = satisfiable_from(p)
        return plan
    if strategy is Strategy.CONSTANT_FRAGMENT and not deterministic:
        return _fragment_plan(p, params, alpha)
    plan = _flexible_plan(p, params, alpha)
    if strategy is Strategy.CONSTANT_FRAGMENT:
        plan.notes.append("deterministic realization of class B via the flexible construction")
    return plan


def plan_constants(p: OptLcl, params: ProblemParameters, alpha, strategy: Strategy) -> tuple[int, int, int, int, int]:
    """(A_min, B_max, mark_prob_inv, long_cut, n0) for the segment-based strategies."""
    alpha = Fraction(alpha)
    strategy = Strategy(strategy)
    if strategy is Strategy.FLEXIBLE:
        plan = _flexible_plan(p, params, alpha)
    elif strategy is Strategy.CONSTANT_FRAGMENT:
        plan = _fragment_plan(p, params, alpha)
    else:
        raise SynthesisError(f"strategy {strategy.value} needs no segment constants")
    return plan.A_min, plan.B_max, plan.mark_prob_inv, plan.long_cut, plan.n0


def _flexible_plan(p: OptLcl, params: ProblemParameters, alpha: Fraction) -> SynthesisPlan:
    g = build(p)
    budget = _Budget(p, params, alpha)
    candidates, key, beta = _flexible_candidates(p, params)
    margin = budget.margin(beta)
    if margin < 0:
        raise SynthesisError(f"negative margin {margin}: alpha too small for the flexible strategy")
    need = max(p.radius, 1)
    tables = {}
    for level in range(MAX_LEVEL + 1):
        lo, hi = 2 ** (level + 1), 3 ** (level + 1)
        if lo < need:
            continue
        for x in candidates:
            t = tables.get(x)
            if t is None or t.horizon < hi:
                t = tables[x] = optimal_walk_table(g, x, 3 ** (level + 2) if level < 2 else hi, p)
            if all(budget.ok(t.total(x, k), k) for k in range(lo, hi + 1)):
                top = hi
                while top + 1 <= min(max(hi, 3 * lo), t.horizon) and budget.ok(t.total(x, top + 1), top + 1):
                    top += 1
                walks = {k: _walk_labels(g, t, x, k) for k in range(lo, top + 1)}
                plan = SynthesisPlan(
                    Strategy.FLEXIBLE, p, alpha,
                    target=key, margin=margin, anchor=g.tuples[x], gap_walks=walks,
                    A_min=lo, B_max=top, level=level,
                    K0=_frobenius(closed_walk_lengths(g, x, 2 * g.gamma + 1)),
                )
                plan.n0 = _flexible_n0(level)
                return plan
    raise SynthesisError("no anchor admits acceptable gap walks up to the level cap; margin too small")


def satisfiable_from(p: OptLcl) -> int:
    """Smallest n0 such that a valid labeling exists for every n >= n0.

    Beyond the Frobenius bound of a flexible component every length has a
    closed walk, so only shorter lengths need checking.
    """
    g = build(p)
    flex = [c for c in g.components if c.flexible]
    if not flex:
        raise SynthesisError("no flexible component: infinitely many n are unsatisfiable")
    horizon = 1
    for c in flex:
        sub = g.view(c.members)
        k0 = _frobenius(closed_walk_lengths(sub, c.members[0], 2 * g.gamma + 1))
        horizon = max(horizon, k0)
    lengths = set()
    for v in range(len(g)):
        lengths |= closed_walk_lengths(g, v, horizon)
    missing = [n for n in range(1, horizon + 1) if n not in lengths]
    return missing[-1] + 1 if missing else 1


def _flexible_n0(level: int) -> int:
    n = 3
    while True:
        left, right = flexible_radii(level, cv_rounds(n * n + 1))
        if n >= left + right + 2:
            return n
        n += 1


# constant fragment


def gap_distribution(q: int, a: int, upto: int | None = None, tol: float = 1e-12) -> list[float]:
    """P[g] for the distance between consecutive boundaries under the windowed-mark rule.

    Marks are i.i.d. with probability 1/q; a boundary is a mark with no mark
    among its a-1 predecessors. Index 0 is unused. Runs up to ``upto`` or
    until the remaining mass drops below ``tol``.
    """
    p = 1.0 / q
    # state[s]: s consecutive unmarked positions since the last mark, capped at a-1
    state = [0.0] * a
    state[0] = 1.0
    out = [0.0]
    remaining = 1.0
    while remaining > tol and (upto is None or len(out) <= upto):
        hit = p * state[a - 1]
        new = [0.0] * a
        new[0] = p * (remaining - state[a - 1])
        for s_ in range(1, a):
            new[s_] = (1 - p) * state[s_ - 1]
        new[a - 1] += (1 - p) * state[a - 1]
        state = new
        out.append(hit)
        remaining = sum(state)
    return out


def mean_gap(q: int, a: int) -> float:
    """E[gap]: waiting time of the non-overlapping pattern 0^(a-1) 1."""
    p = 1.0 / q
    return 1.0 / (p * (1 - p) ** (a - 1))


def _fragment_plan(p: OptLcl, params: ProblemParameters, alpha: Fraction) -> SynthesisPlan:
    if not p.is_sum:
        raise SynthesisError("constant fragment applies to sum problems only")
    g = build(p)
    budget = _Budget(p, params, alpha)
    beta = params.beta_gap
    margin = budget.margin(beta)
    if margin <= 0:
        raise SynthesisError(f"non-positive margin {margin} for the constant fragment strategy")
    target_rate = float(budget.bound - margin / SAFETY) if p.minimizing else float(budget.bound + margin / SAFETY)

    candidates, _, _ = _flexible_candidates(p, params, fragment_target=True)
    horizon = max(2 * g.gamma + 2, 128)
    best = None
    for x in candidates[:3]:
        comp = g.scc_id[x]
        loops = [v for v in range(len(g)) if g.self_loop[v] and g.scc_id[v] == comp]
        if not loops:
            continue
        loop = (min if p.minimizing else max)(loops, key=lambda v: (g.costs[v], 0))
        head_nodes = _shortest_path(g, x, loop)
        tail_nodes = _shortest_path(g, loop, x)
        p1, p2 = len(head_nodes) - 1, len(tail_nodes) - 1
        t = optimal_walk_table(g, x, horizon, p)
        # every length from a_lo on must admit a closed walk
        a_lo = horizon
        while a_lo - 1 >= max(p.radius, 1) and t.has(x, a_lo - 1):
            a_lo -= 1
        short = [float(t.total(x, k)) if k and t.has(x, k) else math.nan for k in range(horizon + 1)]
        head_cost = sum(g.costs[v] for v in head_nodes[1:])
        tail_cost = sum(g.costs[v] for v in tail_nodes[1:])
        loop_cost = g.costs[loop]
        long_const = float(head_cost + tail_cost - loop_cost * (p1 + p2))
        found = _tune(short, a_lo, p1 + p2, float(loop_cost), long_const, target_rate, p.minimizing, horizon)
        if found is None:
            continue
        T, q, a, b, rate = found
        if best is None or T < best[0]:
            best = (T, x, loop, head_nodes, tail_nodes, t, q, a, b, rate, (short, long_const, float(loop_cost)))
    if best is None:
        raise SynthesisError("no marking constants reach the expected-cost target")
    T, x, loop, head_nodes, tail_nodes, t, q, a, b, rate, (short, long_const, loop_cost) = best
    var_ratio = segment_excess_variance(short, a, b, q, long_const, loop_cost, rate)
    head = tuple(g.tuples[v][0] for v in head_nodes[:-1])
    tail = tuple(g.tuples[v][0] for v in tail_nodes[:-1])
    walks = {k: _walk_labels(g, t, x, k) for k in range(a, b + 1)}
    plan = SynthesisPlan(
        Strategy.CONSTANT_FRAGMENT, p, alpha,
        target="beta_gap", margin=margin, anchor=g.tuples[x], gap_walks=walks,
        loop_node=g.tuples[loop], connectors=(head, tail),
        A_min=a, B_max=b, mark_prob_inv=q, long_cut=b, expected_rate=rate,
        K0=_frobenius(closed_walk_lengths(g, x, 2 * g.gamma + 1)),
    )
    # the remaining margin/SAFETY absorbs fluctuations: z * sd / n <= margin / SAFETY
    slack = float(margin) / SAFETY
    stat_n0 = math.ceil(CONFIDENCE_Z**2 * var_ratio / slack**2)
    plan.n0 = max(2 * T + 2, stat_n0)
    plan.notes.append(
        f"n0 = max(2*locality+2, ceil(z^2 * Var(segment excess)/E[gap] / (margin/{SAFETY})^2)) with z = {CONFIDENCE_Z}"
    )
    return plan


def _tune(short, a_lo, connector_len, loop_cost, long_const, target, minimizing, horizon):
    """Smallest locality B + A - 1 whose expected cost rate meets the target.

    Long segments cost long_const + loop_cost * g, so their contribution
    beyond B needs only P(gap > B) and E[gap; gap > B].
    """
    best = None
    for q in (2, 3, 4, 5, 6, 8, 10, 12, 16, 24, 32, 48, 64):
        for a in range(a_lo, min(a_lo + 12, horizon)):
            if best is not None and a + max(a, connector_len) - 1 >= best[0]:
                break
            dist = gap_distribution(q, a, upto=horizon)
            mean = mean_gap(q, a)
            mass = gsum = csum = 0.0
            for b in range(1, len(dist)):
                pb = dist[b]
                if pb > 0:
                    if short[b] != short[b]:  # nan: no walk of this length
                        break
                    mass += pb
                    gsum += b * pb
                    csum += short[b] * pb
                if b < max(a, connector_len):
                    continue
                T = b + a - 1
                if best is not None and T >= best[0]:
                    break
                tail_mass = max(0.0, 1.0 - mass)
                tail_g = max(0.0, mean - gsum)
                rate = (csum + long_const * tail_mass + loop_cost * tail_g) / mean
                if (rate <= target) if minimizing else (rate >= target):
                    best = (T, q, a, b, rate)
                    break
    return best


def segment_excess_variance(plan_short, a, b, q, long_const, loop_cost, rate) -> float:
    """Var of (segment cost - rate * gap) per unit of expected gap, for the chosen constants."""
    dist = gap_distribution(q, a)
    acc = 0.0
    for g_, pg in enumerate(dist):
        if pg == 0.0:
            continue
        cost = plan_short[g_] if g_ <= b else long_const + loop_cost * g_
        acc += pg * (cost - rate * g_) ** 2
    return acc / mean_gap(q, a)
