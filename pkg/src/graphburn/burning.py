"""Burning-sequence semantics: validation, propagation, fire-source counts, bounds, oracle.

A burning sequence is a plain tuple of vertex indices ``(u_1, ..., u_g)``;
position ``j`` (1-based) owns coverage radius ``g - j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, ParameterError
from .graph import Graph, ball_masks, distances, is_connected

BurningSequence = tuple[int, ...]

ORACLE_LIMIT = 16


@dataclass(frozen=True)
class FireSourceCounts:
    counts: tuple[int, ...]
    sequence: BurningSequence

    @property
    def valid(self) -> bool:
        return min(self.counts, default=1) >= 1


def _check(G: Graph, seq: Sequence[int]) -> BurningSequence:
    seq = tuple(int(u) for u in seq)
    for u in seq:
        if not 0 <= u < G.n:
            raise ParameterError(f"sequence vertex {u} out of range")
    return seq


def remaining_fuel(G: Graph, seq: Sequence[int]) -> list[int]:
    """For each vertex, the largest leftover radius reaching it (-1 if none).

    One pass of multi-source BFS with radius buckets: every vertex is settled
    at its maximum fuel, so the total work is O(n + m) after bucketing.
    """
    seq = _check(G, seq)
    g = len(seq)
    fuel = [-1] * G.n
    buckets: list[list[int]] = [[] for _ in range(g)]
    for j, u in enumerate(seq):
        r = g - 1 - j
        if r > fuel[u]:
            fuel[u] = r
            buckets[r].append(u)
    adj = G._adj
    for r in range(g - 1, 0, -1):
        for v in buckets[r]:
            if fuel[v] != r:
                continue
            for w in adj[v]:
                if fuel[w] < r - 1:
                    fuel[w] = r - 1
                    buckets[r - 1].append(w)
    return fuel


def uncovered(G: Graph, seq: Sequence[int]) -> list[int]:
    return [v for v, f in enumerate(remaining_fuel(G, seq)) if f < 0]


def validate(G: Graph, seq: Sequence[int]) -> bool:
    """True iff every vertex lies within distance g - j of some u_j."""
    return all(f >= 0 for f in remaining_fuel(G, seq))


def simulate(G: Graph, seq: Sequence[int]) -> list[frozenset[int]]:
    """Burned set after each step: spread to neighbours, then ignite u_j."""
    seq = _check(G, seq)
    burned: set[int] = set()
    rounds = []
    adj = G._adj
    for u in seq:
        spread = {w for v in burned for w in adj[v]}
        burned |= spread
        burned.add(u)
        rounds.append(frozenset(burned))
    return rounds


def fire_sources(G: Graph, seq: Sequence[int]) -> FireSourceCounts:
    """Per-vertex count of sequence positions whose radius ball contains it."""
    seq = _check(G, seq)
    g = len(seq)
    counts = [0] * G.n
    for j, u in enumerate(seq):
        r = g - 1 - j
        for v, d in enumerate(distances(G, u, limit=r)):
            if d <= r:
                counts[v] += 1
    return FireSourceCounts(tuple(counts), seq)


def greedy_heuristic(G: Graph) -> BurningSequence:
    """Max-coverage greedy: for g = 1, 2, ... pick, radius g-1 down to 0, the ball
    covering the most uncovered vertices (lowest index on ties); return the first
    g whose pass covers everything."""
    if G.n == 0:
        return ()
    dist = distance_matrix(G)
    for g in range(1, G.n + 1):
        left = np.ones(G.n, dtype=bool)
        seq = []
        for r in range(g - 1, -1, -1):
            gain = ((dist <= r) & left[None, :]).sum(axis=1)
            v = int(np.argmax(gain))
            seq.append(v)
            left &= dist[v] > r
        if not left.any():
            return tuple(seq)
    raise AssertionError("greedy must succeed by g = n")


def distance_matrix(G: Graph) -> np.ndarray:
    """All-pairs hop distances; unreachable pairs get ``n`` (beyond any radius)."""
    out = np.full((G.n, G.n), G.n, dtype=np.int32)
    for v in range(G.n):
        row = distances(G, v)
        out[v] = [d if d != math.inf else G.n for d in row]
    return out


def bonato_kamali_bound(n: int) -> int:
    """ceil((sqrt(12n + 64) + 8) / 3), valid for connected graphs of order n."""
    # 3k - 8 >= sqrt(x) with 3k - 8 integral  <=>  3k - 8 >= ceil(sqrt(x))
    root = math.isqrt(12 * n + 63) + 1
    return -(-(root + 8) // 3)


def upper_bound(G: Graph, tighten: bool = True) -> int:
    """Greedy length, optionally capped by the Bonato-Kamali bound on connected graphs."""
    if G.n == 0:
        return 0
    u = len(greedy_heuristic(G))
    if tighten and is_connected(G):
        u = min(u, bonato_kamali_bound(G.n))
    return u


def brute_force_burning_number(G: Graph, limit: int = ORACLE_LIMIT) -> tuple[int, BurningSequence]:
    """Exact b(G) by enumeration, one vertex per radius, in lexicographic order.

    Used as the reference oracle. A partial assignment is abandoned when the
    remaining radii, each taken at its largest ball over the still-uncovered
    set, cannot reach the uncovered count. The witness is the lexicographically
    smallest sequence of minimum length.
    """
    n = G.n
    if n == 0:
        return 0, ()
    if n > limit:
        raise CapacityError(f"oracle limited to n <= {limit} (got {n}); pass limit= to override")
    full = (1 << n) - 1
    masks = ball_masks(G, range(n))
    for g in range(1, n + 1):
        radii = list(range(g - 1, -1, -1))
        seq: list[int] = []
        dead: set[tuple[int, int]] = set()

        def dfs(pos: int, left: int) -> bool:
            if left == 0:
                return True
            if pos == g:
                return False
            if (pos, left) in dead:
                return False
            cap = 0
            for r in radii[pos:]:
                cap += max((m & left).bit_count() for m in masks[r])
            if cap < left.bit_count():
                dead.add((pos, left))
                return False
            for v in range(n):
                seq.append(v)
                if dfs(pos + 1, left & ~masks[radii[pos]][v]):
                    return True
                seq.pop()
            dead.add((pos, left))
            return False

        if dfs(0, full):
            seq += [0] * (g - len(seq))
            return g, tuple(seq)
    raise AssertionError("unreachable: g = n always suffices")
