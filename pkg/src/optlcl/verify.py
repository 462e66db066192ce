"""Ground truth for opt(n): closed-walk DP, brute-force enumeration, and labeling evaluation."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .debruijn import build, walk_to_labels
from .problem import BOT, Aggregation, CostValue, OptLcl, ProblemError

DEFAULT_ENUM_BUDGET = 2_000_000
_EXACT_LIMIT = 2**52


class BudgetExceeded(RuntimeError):
    pass


def enum_budget() -> int:
    env = os.environ.get("OPTLCL_ENUM_BUDGET")
    return int(env) if env else DEFAULT_ENUM_BUDGET


def solution_value(p: OptLcl, labeling: Sequence[str]) -> CostValue:
    n = len(labeling)
    if n == 0:
        raise ValueError("empty labeling")
    labels = set(p.alphabet)
    for a in labeling:
        if a not in labels:
            raise ProblemError(f"unknown label {a!r}")
    vals = []
    r = p.radius
    for i in range(n):
        c = p.costs[tuple(labeling[(i + j) % n] for j in range(r + 1))]
        if c is BOT:
            return BOT
        vals.append(c)
    if p.aggregation is Aggregation.SUM:
        return Fraction(sum(vals))
    return max(vals) if p.aggregation is Aggregation.MAX else min(vals)


def _scaled_costs(costs: Sequence[Fraction]) -> tuple[list[int], int]:
    scale = 1
    for c in costs:
        scale = math.lcm(scale, c.denominator)
    return [int(c * scale) for c in costs], scale


@lru_cache(maxsize=64)
def opt_dp(p: OptLcl, n: int) -> tuple[CostValue, tuple[str, ...] | None]:
    """Optimum over closed walks of length exactly n, with a canonical witness labeling.

    Ties: smallest start node, then smallest predecessor at every step.
    """
    if n < 1:
        raise ValueError("n must be positive")
    g = build(p)
    V = len(g)
    if V == 0:
        return BOT, None
    ints, scale = _scaled_costs(g.costs)
    agg = p.aggregation
    big = max(ints) * (n if agg is Aggregation.SUM else 1)
    dtype = float if big < _EXACT_LIMIT else object
    absent = np.inf if p.minimizing else -np.inf
    if agg is Aggregation.SUM:
        identity = 0
    elif agg is Aggregation.MAX:
        identity = -np.inf
    else:
        identity = np.inf

    c = np.array(ints, dtype=dtype)
    adj = np.zeros((V, V), dtype=bool)
    for u, vs in enumerate(g.succ):
        adj[u, list(vs)] = True
    dist = np.full((V, V), absent, dtype=dtype)  # dist[s, v]
    np.fill_diagonal(dist, identity)
    pick = np.argmin if p.minimizing else np.argmax
    pred = np.empty((n, V, V), dtype=np.int16 if V < 2**15 else np.int32)
    mask = ~adj[None, :, :]
    for k in range(n):
        if agg is Aggregation.SUM:
            cand = dist[:, :, None] + c[None, None, :]
        elif agg is Aggregation.MAX:
            cand = np.maximum(dist[:, :, None], c[None, None, :])
        else:
            cand = np.minimum(dist[:, :, None], c[None, None, :])
        cand = np.where(mask, absent, cand)
        idx = pick(cand, axis=1)
        pred[k] = idx
        dist = np.take_along_axis(cand, idx[:, None, :], axis=1)[:, 0, :]

    closed = np.diagonal(dist)
    s = int(pick(closed))
    best = closed[s]
    if best == absent:
        return BOT, None
    walk = [s]
    v = s
    for k in range(n - 1, -1, -1):
        v = int(pred[k, s, v])
        walk.append(v)
    walk.reverse()
    value = Fraction(int(best), scale)
    return value, walk_to_labels(g, walk)


def opt_bruteforce(p: OptLcl, n: int, budget: int | None = None) -> CostValue:
    """Optimum of solution_value over all |Γ|^n labelings, enumerated in numpy chunks."""
    budget = enum_budget() if budget is None else budget
    a = len(p.alphabet)
    total = a**n
    if total > budget:
        raise BudgetExceeded(f"|Gamma|^n = {total} exceeds the enumeration budget {budget}")
    r = p.radius
    table_vals, valid = [], []
    finite = [c for c in p.costs.values() if c is not BOT]
    ints, scale = _scaled_costs(finite) if finite else ([], 1)
    it = iter(ints)
    for c in p.costs.values():
        valid.append(c is not BOT)
        table_vals.append(next(it) if c is not BOT else 0)
    table_vals = np.array(table_vals, dtype=object if max(table_vals, default=0) * n >= _EXACT_LIMIT else np.int64)
    valid = np.array(valid, dtype=bool)
    agg = p.aggregation
    best = None
    chunk = 1 << 16
    powers = a ** np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % a  # digits[:, i] = label index at position i
        ok = np.ones(len(idx), dtype=bool)
        acc = None
        for i in range(n):
            w = np.zeros(len(idx), dtype=np.int64)
            for j in range(r + 1):
                w = w * a + digits[:, (i + j) % n]
            ok &= valid[w]
            v = table_vals[w]
            if acc is None:
                acc = v
            elif agg is Aggregation.SUM:
                acc = acc + v
            elif agg is Aggregation.MAX:
                acc = np.maximum(acc, v)
            else:
                acc = np.minimum(acc, v)
        if not ok.any():
            continue
        vals = acc[ok]
        cand = vals.min() if p.minimizing else vals.max()
        if best is None or (cand < best if p.minimizing else cand > best):
            best = cand
    return BOT if best is None else Fraction(int(best), scale)


@dataclass(frozen=True)
class Evaluation:
    valid: bool
    value: CostValue | None
    opt: CostValue | None
    ratio: Fraction | None
    alpha_ok: bool | None


def evaluate(p: OptLcl, labeling: Sequence[str], alpha=None, opt: CostValue | None = None) -> Evaluation:
    value = solution_value(p, labeling)
    if value is BOT:
        return Evaluation(False, None, None, None, None)
    if opt is None:
        opt = opt_dp(p, len(labeling))[0]
    alpha = None if alpha is None else Fraction(alpha)
    if opt is BOT:
        return Evaluation(True, value, opt, None, None)
    if p.minimizing:
        num, den = value, opt
    else:
        num, den = opt, value
    if den == 0:
        ratio = Fraction(1) if num == 0 else None
    else:
        ratio = Fraction(num) / den
    alpha_ok = None
    if alpha is not None:
        alpha_ok = alpha * opt >= value if p.minimizing else opt <= alpha * value
    return Evaluation(True, value, opt, ratio, alpha_ok)
