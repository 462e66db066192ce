"""The seven problem parameters (beta_opt, beta_flex, delta_flex, beta_coprime, beta_gap, delta_gap, beta_const)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .debruijn import (
    SubgraphKind,
    Subgraph,
    build,
    better,
    is_flexible_node,
    optimal_walk_table,
    subgraph,
    walk_cost,
)
from .problem import BOT, CostValue, OptLcl, format_value

FIELDS = ("beta_opt", "beta_flex", "delta_flex", "beta_coprime", "beta_gap", "delta_gap", "beta_const")


@dataclass(frozen=True)
class ProblemParameters:
    """``None`` means the parameter is not computed for this kind of problem."""

    beta_opt: CostValue
    beta_flex: CostValue
    delta_flex: bool | None
    beta_coprime: CostValue | None
    beta_gap: CostValue | None
    delta_gap: bool | None
    beta_const: CostValue
    witness: dict[str, tuple[int, ...]] = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in FIELDS}

    def report_lines(self) -> list[str]:
        return [f"{k} = {format_value(getattr(self, k))}" for k in FIELDS]


def _ratio(p: OptLcl, total: Fraction, k: int) -> Fraction:
    return Fraction(total) / k if p.is_sum else Fraction(total)


def beta_of_subgraph(sub: Subgraph, p: OptLcl | None = None) -> tuple[CostValue, tuple[int, ...] | None]:
    """Optimal cycle cost inside the view, with a closed-walk witness.

    Closed walks up to length gamma suffice: an optimal cycle is simple.
    """
    g = sub.graph
    p = p or g.problem
    improves = better(p)
    best_val: CostValue = BOT
    best_walk = None
    for s in sub.nodes:
        table = optimal_walk_table(sub, s, min(g.gamma, max(len(sub), 1)), p)
        for k, total in table.closed().items():
            val = _ratio(p, total, k)
            if best_val is BOT or improves(val, best_val):
                best_val = val
                best_walk = tuple(table.walk(s, k))
    return best_val, best_walk


def compute_delta_flex(flex: Subgraph, p: OptLcl, beta_flex: Fraction) -> tuple[bool, tuple | None]:
    """False iff some node has optimal closed walks of cost exactly beta_flex at coprime lengths.

    Returns the flag and, when false, a witness (node, lengths).
    """
    horizon = 2 * flex.gamma + 1
    for v in flex.nodes:
        table = optimal_walk_table(flex, v, horizon, p)
        exact = [k for k, total in table.closed().items() if total == k * beta_flex]
        if exact and math.gcd(*exact) == 1:
            prefix = []
            for k in exact:
                prefix.append(k)
                if math.gcd(*prefix) == 1:
                    break
            return False, (v, tuple(prefix))
    return True, None


def compute_beta_coprime(g, p: OptLcl | None = None) -> tuple[CostValue, int | None]:
    """Scan node-cost thresholds until the induced subgraph contains a flexible node."""
    p = p or g.problem
    levels = sorted(set(g.costs), reverse=not p.minimizing)
    for level in levels:
        if p.minimizing:
            nodes = [v for v, c in enumerate(g.costs) if c <= level]
        else:
            nodes = [v for v, c in enumerate(g.costs) if c >= level]
        sub = g.view(nodes)
        for v in sub.nodes:
            if is_flexible_node(sub, v):
                return level, v
    return BOT, None


@lru_cache(maxsize=256)
def compute_all(p: OptLcl) -> ProblemParameters:
    g = build(p)
    witness: dict[str, tuple[int, ...]] = {}
    values = {}
    for kind in SubgraphKind:
        val, w = beta_of_subgraph(subgraph(g, kind), p)
        values[kind] = val
        if w is not None:
            witness[f"beta_{kind.value}"] = w
    beta_opt = values[SubgraphKind.OPT]
    beta_flex = values[SubgraphKind.FLEX]
    beta_const = values[SubgraphKind.CONST]
    if p.is_sum:
        beta_gap = values[SubgraphKind.GAP]
        delta_flex = None
        if beta_flex is not BOT:
            delta_flex, dw = compute_delta_flex(subgraph(g, SubgraphKind.FLEX), p, beta_flex)
            if dw is not None:
                witness["delta_flex"] = (dw[0],) + dw[1]
        params = ProblemParameters(
            beta_opt, beta_flex, delta_flex, None, beta_gap, beta_gap != beta_const, beta_const, witness
        )
    else:
        witness.pop("beta_gap", None)
        coprime, v = compute_beta_coprime(g, p)
        if v is not None:
            witness["beta_coprime"] = (v,)
        params = ProblemParameters(beta_opt, beta_flex, None, coprime, None, None, beta_const, witness)
    check_invariants(params, p)
    return params


def check_invariants(params: ProblemParameters, p: OptLcl) -> None:
    """Containment chain and finiteness implications; raises AssertionError."""
    chain = [params.beta_opt, params.beta_flex]
    if p.is_sum:
        chain.append(params.beta_gap)
    chain.append(params.beta_const)
    # a finite later value forces the earlier ones finite
    for a, b in zip(chain, chain[1:]):
        assert not (b is not BOT and a is BOT), f"finite {b} after bot"
    finite = [x for x in chain if x is not BOT]
    for a, b in zip(finite, finite[1:]):
        assert (a <= b) if p.minimizing else (a >= b), f"chain violated: {a} then {b}"
    if p.is_sum:
        assert params.delta_gap == (params.beta_gap != params.beta_const)
    elif params.beta_coprime is not BOT and params.beta_opt is not BOT:
        assert (params.beta_opt <= params.beta_coprime) if p.minimizing else (params.beta_opt >= params.beta_coprime)


def witness_value(p: OptLcl, walk) -> Fraction:
    return walk_cost(build(p), walk)
