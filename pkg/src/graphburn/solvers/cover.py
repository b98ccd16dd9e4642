"""Exact search over "one candidate per slot" covering problems.

A slot is a coverage radius (a column of the coverage programs); a candidate
is a vertex, represented by the bitmask of targets its ball reaches. Targets
are usually all vertices, or the subset of vertices whose coverage rows are
present in a partially generated model.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import CapacityError

DEFAULT_NODE_BUDGET = 10**8
MEMO_LIMIT = 2_000_000


@dataclass
class SearchStats:
    nodes: int = 0


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def find_cover(
    slots: list[list[int]],
    full: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
    stats: SearchStats | None = None,
) -> list[int] | None:
    """Pick one candidate per slot so the chosen masks cover ``full``.

    Returns the candidate index per slot, or None when no cover exists.
    Branches on the uncovered target with the fewest covering options and
    tries every (slot, candidate) that reaches it; within a slot, candidates
    whose uncovered reach is contained in another's are skipped. A state is
    abandoned when the remaining slots, each at its best uncovered reach,
    cannot account for every uncovered target. Unneeded slots get candidate 0.
    """
    stats = stats if stats is not None else SearchStats()
    k = len(slots)
    # dedupe identical masks per slot, keeping the lowest candidate index
    uniq: list[list[tuple[int, int]]] = []
    for masks in slots:
        seen = {}
        for c, m in enumerate(masks):
            m &= full
            if m and m not in seen:
                seen[m] = c
        uniq.append([(m, c) for m, c in seen.items()])
    hits: list[dict[int, list[tuple[int, int]]]] = []
    for cand in uniq:
        table: dict[int, list[tuple[int, int]]] = {}
        for m, c in cand:
            for t in _bits(m):
                table.setdefault(t, []).append((m, c))
        hits.append(table)
    # per target, per slot option counts for the branching rule
    dead: set[tuple[int, int]] = set()
    choice = [-1] * k

    def capacity(left: int, free: int) -> int:
        total = 0
        for s in range(k):
            if free >> s & 1:
                total += max(((m & left).bit_count() for m, _ in uniq[s]), default=0)
        return total

    def dfs(left: int, free: int) -> bool:
        if left == 0:
            return True
        if free == 0 or (left, free) in dead:
            return False
        stats.nodes += 1
        if stats.nodes > node_budget:
            raise CapacityError(f"cover search exceeded {node_budget} nodes")
        need = left.bit_count()
        if capacity(left, free) < need:
            _remember(left, free)
            return False
        free_slots = [s for s in range(k) if free >> s & 1]
        best_t, best_count = -1, None
        for t in _bits(left):
            cnt = 0
            for s in free_slots:
                cnt += len(hits[s].get(t, ()))
            if best_count is None or cnt < best_count:
                best_t, best_count = t, cnt
                if cnt <= 1:
                    break
        if best_count == 0:
            _remember(left, free)
            return False
        for s in free_slots:
            opts = []
            for m, c in hits[s].get(best_t, ()):
                opts.append(((m & left), c))
            opts.sort(key=lambda mc: (-mc[0].bit_count(), mc[1]))
            kept: list[int] = []
            for m, c in opts:
                if any(m & ~o == 0 for o in kept):
                    continue
                kept.append(m)
                choice[s] = c
                if dfs(left & ~m, free & ~(1 << s)):
                    return True
            choice[s] = -1
        _remember(left, free)
        return False

    def _remember(left, free):
        if len(dead) < MEMO_LIMIT:
            dead.add((left, free))

    if not dfs(full, (1 << k) - 1):
        return None
    return [c if c >= 0 else 0 for c in choice]


def greedy_coverage(slots: list[list[int]], full: int) -> tuple[int, list[int]]:
    left, picks = full, []
    for masks in slots:
        best_c, best_gain = 0, -1
        for c, m in enumerate(masks):
            gain = (m & left).bit_count()
            if gain > best_gain:
                best_c, best_gain = c, gain
        picks.append(best_c)
        left &= ~masks[best_c]
    return (full & ~left).bit_count(), picks


def max_coverage(
    slots: list[list[int]],
    full: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
    stats: SearchStats | None = None,
) -> tuple[int, list[int]]:
    """Branch and bound for the most targets covered by one candidate per slot.

    Slots are fixed in the given order and candidates tried in index order,
    so the returned choice is the lexicographically smallest optimum. A
    branch is cut when covered-so-far plus each remaining slot's largest
    reach over the uncovered targets cannot beat the incumbent.
    """
    stats = stats if stats is not None else SearchStats()
    k = len(slots)
    total = full.bit_count()
    g_val, g_pick = greedy_coverage(slots, full)
    best = {"val": g_val, "pick": g_pick, "dfs": False}
    choice: list[int] = []

    def dfs(pos: int, left: int):
        covered = total - left.bit_count()
        if left == 0 or pos == k:
            pick = choice + [0] * (k - pos)
            if covered > best["val"] or (covered == best["val"] and not best["dfs"]):
                best.update(val=covered, pick=pick, dfs=True)
            return
        stats.nodes += 1
        if stats.nodes > node_budget:
            raise CapacityError(f"coverage search exceeded {node_budget} nodes")
        bound = covered
        for s in range(pos, k):
            bound += max((m & left).bit_count() for m in slots[s])
        if bound < best["val"] or (best["dfs"] and bound <= best["val"]):
            return
        seen = set()
        for c, m in enumerate(slots[pos]):
            reach = m & left
            if reach in seen:
                continue
            seen.add(reach)
            choice.append(c)
            dfs(pos + 1, left & ~m)
            choice.pop()
            if best["dfs"] and best["val"] == total:
                return

    dfs(0, full)
    return best["val"], best["pick"]
