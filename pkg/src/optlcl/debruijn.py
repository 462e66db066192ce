"""Pruned weighted de Bruijn graphs, walk-length reachability and the fixed-length walk DP."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .problem import BOT, Aggregation, OptLcl


class SubgraphKind(str, Enum):
    OPT = "opt"
    FLEX = "flex"
    GAP = "gap"
    CONST = "const"


@dataclass(frozen=True)
class Component:
    id: int
    members: tuple[int, ...]
    flexible: bool
    has_self_loop: bool


class DeBruijnGraph:
    """Nodes are the finite-cost (r+1)-tuples, indexed in lexicographic alphabet order."""

    def __init__(self, p: OptLcl):
        self.problem = p
        self.gamma = len(p.alphabet) ** (p.radius + 1)
        tuples, costs = [], []
        for t, c in p.costs.items():
            if c is not BOT:
                tuples.append(t)
                costs.append(c)
        self.tuples: tuple[tuple[str, ...], ...] = tuple(tuples)
        self.costs: tuple[Fraction, ...] = tuple(costs)
        self.index = {t: i for i, t in enumerate(self.tuples)}
        by_prefix: dict[tuple[str, ...], list[int]] = {}
        for i, t in enumerate(self.tuples):
            by_prefix.setdefault(t[:-1], []).append(i)
        self.succ: tuple[tuple[int, ...], ...] = tuple(
            tuple(by_prefix.get(t[1:], ())) for t in self.tuples
        )
        pred: list[list[int]] = [[] for _ in self.tuples]
        for u, vs in enumerate(self.succ):
            for v in vs:
                pred[v].append(u)
        self.pred: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(ps)) for ps in pred)
        self.self_loop = tuple(i in self.succ[i] for i in range(len(self.tuples)))
        self.full = Subgraph(self, range(len(self.tuples)))

        self.scc_id, members = _scc(len(self.tuples), self.succ)
        comps = []
        for cid, mem in enumerate(members):
            sub = Subgraph(self, mem)
            comps.append(
                Component(
                    cid,
                    tuple(mem),
                    is_flexible_node(sub, mem[0]),
                    any(self.self_loop[v] for v in mem),
                )
            )
        self.components: tuple[Component, ...] = tuple(comps)

    def __len__(self) -> int:
        return len(self.tuples)

    @property
    def n_edges(self) -> int:
        return sum(len(s) for s in self.succ)

    def node(self, t: Sequence[str] | str) -> int:
        """Index of a tuple; a plain string is split into single characters."""
        key = tuple(t.split()) if isinstance(t, str) and " " in t else tuple(t)
        if key not in self.index:
            raise KeyError(f"no node {key!r} (unknown or pruned)")
        return self.index[key]

    def label(self, v: int) -> str:
        return tuple_text(self.tuples[v])

    def view(self, nodes: Iterable[int]) -> "Subgraph":
        return Subgraph(self, nodes)

    def to_dot(self) -> str:
        lines = ["digraph debruijn {"]
        for i, t in enumerate(self.tuples):
            lines.append(f'  n{i} [label="{tuple_text(t)}\\n{self.costs[i]}"];')
        for u, vs in enumerate(self.succ):
            for v in vs:
                lines.append(f"  n{u} -> n{v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def tuple_text(t: Sequence[str]) -> str:
    """Concatenate single-character labels; space-separate otherwise."""
    return "".join(t) if all(len(a) == 1 for a in t) else " ".join(t)


class Subgraph:
    """Induced subgraph view on a node subset of a de Bruijn graph."""

    def __init__(self, g: DeBruijnGraph, nodes: Iterable[int]):
        self.graph = g
        self.nodes: tuple[int, ...] = tuple(sorted(set(nodes)))
        self.members = frozenset(self.nodes)
        m = self.members
        self._succ = {v: tuple(w for w in g.succ[v] if w in m) for v in self.nodes}
        self._pred = {v: tuple(u for u in g.pred[v] if u in m) for v in self.nodes}

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.nodes)

    def successors(self, v: int) -> tuple[int, ...]:
        return self._succ[v]

    def predecessors(self, v: int) -> tuple[int, ...]:
        return self._pred[v]

    @property
    def gamma(self) -> int:
        return self.graph.gamma

    def has_self_loop(self, v: int) -> bool:
        return v in self._succ[v]


def _scc(n: int, succ: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], list[list[int]]]:
    """Iterative Kosaraju. Components are numbered by their smallest node index."""
    order: list[int] = []
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        stack = [(root, iter(succ[root]))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, iter(succ[w])))
                    break
            else:
                stack.pop()
                order.append(v)
    pred: list[list[int]] = [[] for _ in range(n)]
    for u in range(n):
        for v in succ[u]:
            pred[v].append(u)
    comp = [-1] * n
    groups: list[list[int]] = []
    for root in reversed(order):
        if comp[root] != -1:
            continue
        gid = len(groups)
        comp[root] = gid
        group = [root]
        stack = [root]
        while stack:
            v = stack.pop()
            for u in pred[v]:
                if comp[u] == -1:
                    comp[u] = gid
                    group.append(u)
                    stack.append(u)
        groups.append(sorted(group))
    groups.sort(key=lambda grp: grp[0])
    ids = [0] * n
    for cid, grp in enumerate(groups):
        for v in grp:
            ids[v] = cid
    return tuple(ids), groups


@lru_cache(maxsize=256)
def build(p: OptLcl) -> DeBruijnGraph:
    return DeBruijnGraph(p)


def _as_view(g) -> Subgraph:
    return g.full if isinstance(g, DeBruijnGraph) else g


def closed_walk_lengths(g, v: int, k_max: int) -> set[int]:
    """Lengths k <= k_max of closed walks through v inside the view."""
    sub = _as_view(g)
    pos = {u: i for i, u in enumerate(sub.nodes)}
    masks = [0] * len(sub.nodes)
    for u in sub.nodes:
        m = 0
        for w in sub.successors(u):
            m |= 1 << pos[w]
        masks[pos[u]] = m
    target = 1 << pos[v]
    frontier = target
    out = set()
    for k in range(1, k_max + 1):
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= masks[low.bit_length() - 1]
            f ^= low
        frontier = nxt
        if frontier & target:
            out.add(k)
        if not frontier:
            break
    return out


def is_flexible_node(g, v: int) -> bool:
    """Closed walks through v within length 2*gamma+1 have coprime lengths."""
    sub = _as_view(g)
    return math.gcd(*closed_walk_lengths(sub, v, 2 * sub.gamma + 1)) == 1


def subgraph(g: DeBruijnGraph, kind: SubgraphKind | str) -> Subgraph:
    kind = SubgraphKind(kind)
    if kind is SubgraphKind.OPT:
        return g.full
    flex = [c for c in g.components if c.flexible]
    if kind is SubgraphKind.FLEX:
        return g.view(v for c in flex for v in c.members)
    gap = [v for c in flex if c.has_self_loop for v in c.members]
    if kind is SubgraphKind.GAP:
        return g.view(gap)
    return g.view(v for v in gap if g.self_loop[v])


# fixed-length walk DP


def _combine(agg: Aggregation):
    if agg is Aggregation.SUM:
        return lambda acc, c: c if acc is None else acc + c
    if agg is Aggregation.MAX:
        return lambda acc, c: c if acc is None else max(acc, c)
    return lambda acc, c: c if acc is None else min(acc, c)


def better(p: OptLcl):
    """Strict improvement predicate for the problem's objective."""
    if p.minimizing:
        return lambda a, b: a < b
    return lambda a, b: a > b


@dataclass
class WalkTable:
    """best[k][v] = (total, predecessor) for an optimal walk s -> v of length exactly k.

    The total excludes the cost of the first node s. ``best[0]`` holds only s,
    with the empty aggregate ``None``.
    """

    source: int
    horizon: int
    best: list[dict[int, tuple[Fraction | None, int | None]]]

    def total(self, v: int, k: int):
        entry = self.best[k].get(v) if k <= self.horizon else None
        return None if entry is None else entry[0]

    def has(self, v: int, k: int) -> bool:
        return k <= self.horizon and v in self.best[k]

    def walk(self, v: int, k: int) -> list[int]:
        """Node sequence s = w_0, ..., w_k = v."""
        if not self.has(v, k):
            raise KeyError(f"no walk of length {k} to node {v}")
        seq = [v]
        for j in range(k, 0, -1):
            v = self.best[j][v][1]
            seq.append(v)
        seq.reverse()
        return seq

    def closed(self) -> dict[int, Fraction]:
        """Totals of optimal closed walks at the source, by length."""
        return {k: self.best[k][self.source][0] for k in range(1, self.horizon + 1) if self.source in self.best[k]}


def optimal_walk_table(g, s: int, K: int, p: OptLcl | None = None) -> WalkTable:
    sub = _as_view(g)
    base = sub.graph
    p = p or base.problem
    if s not in sub:
        raise KeyError(f"source {s} not in view")
    comb = _combine(p.aggregation)
    improves = better(p)
    costs = base.costs
    best: list[dict[int, tuple]] = [{s: (None, None)}]
    for _ in range(K):
        prev = best[-1]
        cur: dict[int, tuple] = {}
        for u in sorted(prev):
            acc = prev[u][0]
            for v in sub.successors(u):
                val = comb(acc, costs[v])
                old = cur.get(v)
                if old is None or improves(val, old[0]):
                    cur[v] = (val, u)
        best.append(cur)
    return WalkTable(s, K, best)


# walks and labelings


def walk_to_labels(g: DeBruijnGraph, walk: Sequence[int]) -> tuple[str, ...]:
    """Cyclic labeling of length k whose windows are w_1..w_k (w_0 = w_k)."""
    if len(walk) < 2 or walk[0] != walk[-1]:
        raise ValueError("walk is not closed")
    for u, v in zip(walk, walk[1:]):
        if v not in g.succ[u]:
            raise ValueError(f"no edge {g.label(u)} -> {g.label(v)}")
    return tuple(g.tuples[w][0] for w in walk[:-1])


def labels_to_walk(g: DeBruijnGraph, labels: Sequence[str]) -> list[int]:
    """Inverse of walk_to_labels; raises if some window is forbidden."""
    n = len(labels)
    r = g.problem.radius
    walk = []
    for i in range(n):
        t = tuple(labels[(i + j) % n] for j in range(r + 1))
        if t not in g.index:
            raise ValueError(f"window {tuple_text(t)} at position {i} is forbidden")
        walk.append(g.index[t])
    return walk + [walk[0]]


def walk_cost(g: DeBruijnGraph, walk: Sequence[int]) -> Fraction:
    """Cost of a closed walk ignoring w_0: average for sum, aggregate otherwise."""
    vals = [g.costs[v] for v in walk[1:]]
    agg = g.problem.aggregation
    if agg is Aggregation.SUM:
        return Fraction(sum(vals)) / len(vals)
    return max(vals) if agg is Aggregation.MAX else min(vals)

