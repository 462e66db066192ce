"""Window-local symmetry breaking on a directed cycle.

Everything here works on a path segment of the cycle (a node's view) and
returns results only for positions whose value is fully determined by the
segment, so neighbouring nodes always agree.
"""

from __future__ import annotations

from typing import Sequence


def cv_rounds(id_bound: int) -> int:
    """Cole-Vishkin rounds needed to reduce colors in [0, id_bound) to at most 6."""
    bound = max(id_bound, 2)
    rounds = 0
    while bound > 6:
        bound = 2 * max(1, (bound - 1).bit_length())
        rounds += 1
    return rounds


def cv_step(own: int, succ: int) -> int:
    diff = own ^ succ
    k = (diff & -diff).bit_length() - 1
    return 2 * k + ((own >> k) & 1)


def cv_reduce(colors: Sequence[int], rounds: int) -> list[int]:
    """Each round drops the last position (its successor is outside the segment)."""
    cur = list(colors)
    for _ in range(rounds):
        cur = [cv_step(cur[i], cur[i + 1]) for i in range(len(cur) - 1)]
    return cur


def reduce_to_three(colors: Sequence[int]) -> list[int]:
    """Recolor classes 5, 4, 3 one at a time; each round trims one position per side.

    A class is independent, so its members can all pick a free color in {0,1,2}
    simultaneously.
    """
    cur = list(colors)
    for c in (5, 4, 3):
        nxt = []
        for i in range(1, len(cur) - 1):
            x = cur[i]
            if x == c:
                used = {cur[i - 1], cur[i + 1]}
                x = min({0, 1, 2} - used)
            nxt.append(x)
        cur = nxt
    return cur


def mis_from_three(colors: Sequence[int]) -> list[bool]:
    """Maximal independent set from a proper 3-coloring; trims two positions per side.

    Color 0 joins, color 1 joins if no neighbour has color 0, color 2 joins if
    no neighbour joined. Consecutive members are 2 or 3 apart.
    """
    n = len(colors)
    join0 = [c == 0 for c in colors]
    join1 = list(join0)
    for i in range(1, n - 1):
        if colors[i] == 1 and colors[i - 1] != 0 and colors[i + 1] != 0:
            join1[i] = True
    out = []
    for i in range(2, n - 2):
        if colors[i] == 2:
            out.append(not join1[i - 1] and not join1[i + 1])
        else:
            out.append(join1[i])
    return out


def ruling_set_level(ids: Sequence[int], rounds: int) -> tuple[int, list[bool]]:
    """One ruling-set level on a path of distinct ids.

    Returns (offset, membership) where membership[j] refers to path index offset+j.
    """
    c6 = cv_reduce(ids, rounds)
    c3 = reduce_to_three(c6)
    return 5, mis_from_three(c3)


def hierarchical_boundaries(ids: Sequence[int], levels: int, rounds: int) -> tuple[int, int, list[bool]]:
    """Boundary membership after ``levels`` extra thinning levels over a window of ids.

    Level 0 is a ruling set of the path (gaps 2..3). Level l repeats the
    construction on the members of level l-1, using their ids, which gives
    gaps in [2**(l+1), 3**(l+1)]. Returns (lo, hi, member) where member[j]
    is the status of window index lo+j and the known range is [lo, hi].
    """
    off, mem = ruling_set_level(ids, rounds)
    lo, hi = off, off + len(mem) - 1
    for _ in range(levels):
        pos = [lo + j for j, m in enumerate(mem) if m]
        sub_off, sub_mem = ruling_set_level([ids[p] for p in pos], rounds)
        if not sub_mem:
            return lo, lo - 1, []
        first = sub_off
        last = sub_off + len(sub_mem) - 1
        new_lo = pos[first - 1] + 1
        new_hi = pos[last + 1] - 1
        member = [False] * (new_hi - new_lo + 1)
        for j, m in enumerate(sub_mem):
            if m:
                member[pos[first + j] - new_lo] = True
        lo, hi, mem = new_lo, new_hi, member
    return lo, hi, mem


def flexible_radii(levels: int, rounds: int) -> tuple[int, int]:
    """Left/right view radii guaranteeing that the boundaries around the center are known.

    Let B = 3**(levels+1) be the largest gap. The center must see the previous
    boundary (within B-1 to the left) and the next one (within B to the right).
    Level 0 consumes 5 positions on the left and rounds+5 on the right; level l
    with spacing s = 3**l consumes at most 5*s on the left and (rounds+5)*s on
    the right.
    """
    big = 3 ** (levels + 1)
    left = (big - 1) + 5 + sum(5 * 3**l for l in range(1, levels + 1))
    right = big + rounds + 5 + sum((rounds + 5) * 3**l for l in range(1, levels + 1))
    return left, right
