"""Round-synchronous LOCAL simulation on directed cycles, expressed as radius-T view functions."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .classifier import Strategy
from .coloring import cv_rounds, flexible_radii, hierarchical_boundaries
from .problem import BOT, OptLcl
from .synthesis import SynthesisPlan
from .verify import opt_dp

ID_EXPONENT = 2
TAPE_HASH = "blake2b-64 counter mode over (seed, id, key, index)"


class Unsatisfiable(RuntimeError):
    """No valid labeling exists for this n."""


@dataclass(frozen=True)
class CycleInstance:
    n: int
    ids: tuple[int, ...]
    tape_keys: tuple[int, ...] | None = None  # per-node tape perturbation, 0 by default

    def __post_init__(self):
        if len(self.ids) != self.n or len(set(self.ids)) != self.n:
            raise ValueError("ids must be n distinct integers")

    def tape_key(self, i: int) -> int:
        return 0 if self.tape_keys is None else self.tape_keys[i]


def assign_ids(n: int, seed: int = 0, policy: str = "random_permutation", block: int = 8) -> CycleInstance:
    if n < 1:
        raise ValueError("n must be positive")
    space = n**ID_EXPONENT
    rng = random.Random(seed)
    if policy in ("random", "random_permutation"):
        ids = rng.sample(range(1, space + 1), n)
    elif policy in ("adversarial", "adversarial_blocks"):
        # ascending runs of length `block`; blocks themselves in random order
        pool = sorted(rng.sample(range(1, space + 1), n))
        chunks = [pool[i:i + block] for i in range(0, n, block)]
        rng.shuffle(chunks)
        ids = [x for c in chunks for x in c]
    else:
        raise ValueError(f"unknown id policy {policy!r}")
    return CycleInstance(n, tuple(ids))


def tape_draw(seed: int, node_id: int, key: int, index: int) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(f"{seed}:{node_id}:{key}:{index}".encode())
    return int.from_bytes(h.digest(), "big")


class View:
    """Radius-T neighbourhood of one node; offsets outside [-T, T] are refused."""

    def __init__(self, inst: CycleInstance, center: int, radius: int, seed: int, tapes: dict):
        self.n = inst.n
        self.radius = radius
        self._inst = inst
        self._center = center
        self._seed = seed
        self._tapes = tapes
        self.max_offset = 0

    def _check(self, lo: int, hi: int) -> None:
        if lo < -self.radius or hi > self.radius:
            raise PermissionError(f"access to offsets [{lo},{hi}] beyond radius {self.radius}")
        self.max_offset = max(self.max_offset, -lo, hi)

    def id(self, offset: int) -> int:
        self._check(offset, offset)
        return self._inst.ids[(self._center + offset) % self.n]

    def ids(self, lo: int, hi: int) -> list[int]:
        """IDs at offsets lo..hi inclusive."""
        self._check(min(lo, hi), max(lo, hi))
        ids, n, c = self._inst.ids, self.n, self._center
        start = (c + lo) % n
        if start + (hi - lo) < n:
            return list(ids[start:start + hi - lo + 1])
        return [ids[(c + o) % n] for o in range(lo, hi + 1)]

    def tapes(self, lo: int, hi: int, index: int = 0) -> list[int]:
        """Draw ``index`` of every node at offsets lo..hi inclusive."""
        self._check(lo, hi)
        n, c, cache = self.n, self._center, self._tapes
        ids, inst, out = self._inst.ids, self._inst, []
        for o in range(lo, hi + 1):
            pos = (c + o) % n
            val = cache.get((pos, index))
            if val is None:
                val = cache[(pos, index)] = tape_draw(self._seed, ids[pos], inst.tape_key(pos), index)
            out.append(val)
        return out

    def tape(self, offset: int, index: int = 0) -> int:
        """64-bit random draw ``index`` of the node at ``offset``."""
        self._check(offset, offset)
        pos = (self._center + offset) % self.n
        key = (pos, index)
        val = self._tapes.get(key)
        if val is None:
            val = tape_draw(self._seed, self._inst.ids[pos], self._inst.tape_key(pos), index)
            self._tapes[key] = val
        return val


@dataclass
class LocalAlgorithm:
    name: str
    locality: Callable[[int], int]
    output: Callable[[View], str]
    randomized: bool = False
    plan: SynthesisPlan | None = None
    fallback: Callable[[int], "LocalAlgorithm | None"] = field(default=lambda n: None)


@dataclass(frozen=True)
class RunResult:
    labeling: tuple[str, ...]
    measured_locality: int
    seed: int | None
    declared_locality: int
    strategy: str
    fallback: bool = False
    saturated: bool = False
    unsatisfiable: bool = False


def node_output(alg: LocalAlgorithm, inst: CycleInstance, i: int, seed: int = 0, tapes: dict | None = None) -> str:
    """Output of node i alone (used by locality checks)."""
    real = alg.fallback(inst.n) or alg
    view = View(inst, i, real.locality(inst.n), seed, {} if tapes is None else tapes)
    return real.output(view)


def run(alg: LocalAlgorithm, inst: CycleInstance, seed: int = 0) -> RunResult:
    n = inst.n
    real = alg.fallback(n)
    fell_back = real is not None
    real = real or alg
    T = real.locality(n)
    tapes: dict = {}
    labels = []
    measured = 0
    try:
        for i in range(n):
            view = View(inst, i, T, seed, tapes)
            labels.append(real.output(view))
            measured = max(measured, view.max_offset)
    except Unsatisfiable:
        return RunResult((), 0, seed if alg.randomized else None, T, real.name, fell_back, 2 * T + 1 >= n, True)
    return RunResult(
        tuple(labels), measured, seed if alg.randomized else None, T, real.name,
        fell_back, 2 * T + 1 >= n,
    )


# algorithms


def alg_constant(plan: SynthesisPlan) -> LocalAlgorithm:
    if plan.loop_node is None:
        raise ValueError("plan has no loop node")
    label = plan.loop_node[0]
    return LocalAlgorithm("constant_solution", lambda n: 0, lambda view: label, plan=plan)


def alg_optimal(p: OptLcl) -> LocalAlgorithm:
    """Full view: rotate to the minimum ID and read the canonical optimal labeling."""

    def output(view: View) -> str:
        n = view.n
        T = n // 2
        window = view.ids(-T, T)
        m = window.index(min(window)) - T  # offset of the minimum id
        value, labels = opt_dp(p, n)
        if value is BOT:
            raise Unsatisfiable(f"no valid labeling for n = {n}")
        return labels[(-m) % n]

    return LocalAlgorithm("optimal", lambda n: n // 2, output)


def alg_flexible(plan: SynthesisPlan) -> LocalAlgorithm:
    """Cole-Vishkin, 3-coloring, hierarchical ruling set, then gap walks between anchors."""
    if plan.anchor is None or not plan.gap_walks:
        raise ValueError("plan has no anchor or gap walks")
    level = plan.level
    walks = plan.gap_walks
    optimal = alg_optimal(plan.problem)

    def radii(n: int) -> tuple[int, int, int]:
        rounds = cv_rounds(n**ID_EXPONENT + 1)
        left, right = flexible_radii(level, rounds)
        return left, right, rounds

    def locality(n: int) -> int:
        left, right, _ = radii(n)
        return max(left, right)

    def output(view: View) -> str:
        left, right, rounds = radii(view.n)
        ids = view.ids(-left, right)
        lo, hi, member = hierarchical_boundaries(ids, level, rounds)
        c = left  # window index of the center
        prev = next(j for j in range(c, lo - 1, -1) if member[j - lo])
        nxt = next(j for j in range(c + 1, hi + 1) if member[j - lo])
        g = nxt - prev
        return walks[g][c - prev]

    def fallback(n: int):
        return optimal if n < plan.n0 else None

    return LocalAlgorithm("flexible", locality, output, plan=plan, fallback=fallback)


def alg_fragment(plan: SynthesisPlan) -> LocalAlgorithm:
    """Random marks, windowed boundary rule, gap walks for short segments, loop filler for long ones."""
    if plan.connectors is None or plan.loop_node is None:
        raise ValueError("plan has no connectors or loop node")
    q, a, cut = plan.mark_prob_inv, plan.A_min, plan.long_cut
    head, tail = plan.connectors
    p1, p2 = len(head), len(tail)
    loop = plan.loop_node[0]
    walks = plan.gap_walks
    radius = cut + a - 1
    optimal = alg_optimal(plan.problem)

    def output(view: View) -> str:
        marks = [t % q == 0 for t in view.tapes(-radius, cut)]
        base = radius  # marks index of offset 0

        def boundary(o: int) -> bool:
            j = base + o
            return marks[j] and not any(marks[j - a + 1:j])

        i = next((k for k in range(0, cut + 1) if boundary(-k)), None)  # offset into the segment
        d = next((k for k in range(1, cut + 1) if boundary(k)), None)  # distance to next boundary
        if i is not None and d is not None and i + d <= cut:
            return walks[i + d][i]
        if i is not None and i < p1:
            return head[i]
        if d is not None and d <= p2:
            return tail[p2 - d]
        return loop

    def fallback(n: int):
        return optimal if n < 2 * radius + 2 else None

    return LocalAlgorithm("constant_fragment", lambda n: radius, output, randomized=True, plan=plan, fallback=fallback)


def algorithm_for(plan: SynthesisPlan) -> LocalAlgorithm:
    s = plan.strategy
    if s is Strategy.CONSTANT_SOLUTION:
        return alg_constant(plan)
    if s is Strategy.CONSTANT_FRAGMENT:
        return alg_fragment(plan)
    if s is Strategy.FLEXIBLE:
        return alg_flexible(plan)
    if s is Strategy.OPTIMAL:
        return alg_optimal(plan.problem)
    raise ValueError(f"no algorithm for strategy {s.value}")


def labeling_text(labels: Sequence[str]) -> str:
    return "".join(labels) if all(len(x) == 1 for x in labels) else " ".join(labels)
