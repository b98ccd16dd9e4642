"""Exact QUBO minimization: raw sweeps for small models, structured search otherwise."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..burning import BurningSequence
from ..errors import CapacityError, ParameterError
from ..graph import Graph, ball_masks
from ..qubo import SQUBO, UQUBO, QuboModel, encode_sequence, energy, scaled_form, unbalanced_term
from .cover import find_cover

SWEEP_LIMIT = 20
_CHUNK = 1 << 16
STATE_LIMIT = 4_000_000


@dataclass
class QuboOptimum:
    bits: list[int] | None  # None: minimum known positive, minimizer not computed
    energy: Fraction | None
    method: str


def exhaustive_minimum(m: QuboModel, max_dim: int = SWEEP_LIMIT) -> QuboOptimum:
    """Minimum over all 2^dim assignments; ties go to the lexicographically smallest bit vector."""
    if m.dim > max_dim:
        raise CapacityError(f"exhaustive sweep limited to dim <= {max_dim} (got {m.dim})")
    scale, Q, off = scaled_form(m)
    # float64 is exact while every partial sum stays below 2^53
    exact_float = int(np.abs(Q).sum()) + abs(off) < 2**52
    Qf = Q.astype(np.float64) if exact_float else Q
    shifts = np.arange(m.dim - 1, -1, -1, dtype=np.int64)
    best_val, best_idx = None, 0
    total = 1 << m.dim
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        X = ((idx[:, None] >> shifts) & 1).astype(Qf.dtype)
        vals = ((X @ Qf) * X).sum(axis=1)
        k = int(np.argmin(vals))
        v = int(round(vals[k])) if exact_float else int(vals[k])
        if best_val is None or v < best_val:
            best_val, best_idx = v, int(idx[k])
    bits = [(best_idx >> int(s)) & 1 for s in shifts]
    e = energy(m, bits)
    assert e == Fraction(best_val + off, scale)
    return QuboOptimum(bits, e, "sweep")


def squbo_certificate(G: Graph, g: int) -> BurningSequence | None:
    """A length-g sequence giving slack-model energy 0, or None when the minimum is positive.

    Energy 0 forces every column block to pick exactly one vertex and every
    squared coverage term to vanish, i.e. a valid burning sequence whose
    fire-source counts are representable in the slack bits; conversely every
    valid sequence has such a completion. So zero is attainable iff a cover
    with radii g-1..0 exists.
    """
    full = (1 << G.n) - 1
    radii = list(range(g - 1, -1, -1))
    masks = ball_masks(G, radii)
    found = find_cover([masks[r] for r in radii], full)
    return None if found is None else tuple(found)


# --- unbalanced model ------------------------------------------------------


def _column_options(G: Graph, g: int, sizes=None):
    """Per position (radius g-1 first): distinct coverage-count vectors and the
    lexicographically first vertex tuple producing each."""
    n = G.n
    masks = ball_masks(G, range(g))
    out = []
    for p in range(g):
        r = g - 1 - p
        k = 1 if sizes is None else sizes[p]
        seen: dict[bytes, tuple[int, ...]] = {}
        vecs = []
        for combo in itertools.combinations(range(n), k):
            vec = np.zeros(n, dtype=np.int16)
            for u in combo:
                m = masks[r][u]
                vec += np.array([(m >> i) & 1 for i in range(n)], dtype=np.int16)
            key = vec.tobytes()
            if key not in seen:
                seen[key] = combo
                vecs.append(vec)
        out.append((np.array(vecs, dtype=np.int16).reshape(len(vecs), n), list(seen.values())))
    return out


def _min_vertex_cost(options, table, best_known=None):
    """Lexicographically first minimum of sum_i table[i, cov_i] over one option per position.

    ``table`` is an integer (n, maxcov+1) array. The vertex terms depend only
    on the coverage-count vector, so positions are processed as layers over
    distinct count vectors; each vector keeps the lexicographically first
    option prefix reaching it. States whose optimistic completion cannot
    reach ``best_known`` (or beat it, when given) are dropped. Returns
    (value, option index per position), or (None, None).
    """
    g = len(options)
    n = table.shape[0]
    maxcov = table.shape[1] - 1
    cols = np.arange(n)
    # cheapest reachable cost per vertex from count c with up to r more sources
    reach = np.empty((g + 1, n, maxcov + 1), dtype=np.int64)
    for r in range(g + 1):
        for c in range(maxcov + 1):
            reach[r, :, c] = table[:, c:min(c + r, maxcov) + 1].min(axis=1)
    states = np.zeros((1, n), dtype=np.int16)
    parents: list[np.ndarray] = []
    picks: list[np.ndarray] = []
    for p in range(g):
        vecs = options[p][0]
        k = len(vecs)
        if len(states) * k > STATE_LIMIT:
            raise CapacityError(f"{len(states) * k} coverage states exceed the limit {STATE_LIMIT}")
        nxt = (states[:, None, :] + vecs[None, :, :]).reshape(-1, n)
        np.minimum(nxt, maxcov, out=nxt)
        _, first = np.unique(nxt, axis=0, return_index=True)
        first.sort()  # generation order is lexicographic in (prefix, option)
        nxt = nxt[first]
        lb = reach[g - p - 1][cols[None, :], nxt].sum(axis=1)
        if best_known is not None:
            keep = np.nonzero(lb < best_known)[0]
            nxt, first = nxt[keep], first[keep]
        if len(nxt) == 0:
            return None, None
        parents.append(first // k)
        picks.append(first % k)
        states = nxt
    vals = table[cols[None, :], states].sum(axis=1)
    t = int(np.argmin(vals))
    choice = []
    for p in range(g - 1, -1, -1):
        choice.append(int(picks[p][t]))
        t = int(parents[p][t])
    choice.reverse()
    return int(vals.min()), choice


def _scaled_tables(pc, n, maxcov):
    """Integer table[i, c] = scale * f_i(1 - c) for c = 0..maxcov."""
    scale = math.lcm(pc.P.denominator, pc.lambda1.denominator, *(l.denominator for l in pc.lambda2))
    table = np.zeros((n, maxcov + 1), dtype=np.int64)
    for i in range(n):
        for c in range(maxcov + 1):
            val = unbalanced_term(1 - c, pc.lambda1, pc.lambda2[i]) * scale
            table[i, c] = int(val)
    return scale, table


def uqubo_minimum(m: QuboModel) -> QuboOptimum:
    """Exact minimum of the unbalanced-penalty model.

    The one-hot assignments are searched first (one vertex per column,
    lexicographically first sequence on ties). Any assignment breaking a
    column block costs at least P plus the least possible vertex terms; the
    other column-count patterns are only searched when that floor lies
    strictly below the one-hot optimum, and the one-hot optimum is kept on
    ties.
    """
    if m.kind != UQUBO or m.graph is None or m.penalties is None:
        raise ParameterError("uqubo_minimum needs an unbalanced model built from a graph")
    G, g, n, pc = m.graph, m.g, m.n, m.penalties
    scale, table = _scaled_tables(pc, n, g)
    options = _column_options(G, g)
    val, choice = _min_vertex_cost(options, table)
    seq = tuple(options[p][1][c][0] for p, c in enumerate(choice))
    best_bits = encode_sequence(m, seq)
    best_e = energy(m, best_bits)
    assert best_e == Fraction(val, scale)
    method = "one-hot"

    # vertex terms are convex in the count; their unconstrained integer floor
    floor_terms = sum(
        min(unbalanced_term(1 - c, pc.lambda1, pc.lambda2[i]) for c in range(0, n * g + 1))
        for i in range(n)
    )
    if pc.P + floor_terms < best_e:
        P = pc.P
        for sizes in _count_patterns(n, g, (best_e - floor_terms) / P):
            opts = _column_options(G, g, sizes)
            block = P * sum((k - 1) ** 2 for k in sizes)
            big_scale, big_table = _scaled_tables(pc, n, sum(sizes))
            limit = math.ceil((best_e - block) * big_scale)
            v, ch = _min_vertex_cost(opts, big_table, best_known=limit)
            if ch is None:
                continue
            e = block + Fraction(v, big_scale)
            if e < best_e:
                bits = [0] * m.dim
                for p, c in enumerate(ch):
                    for u in opts[p][1][c]:
                        bits[m.x_index(u + 1, g - p)] = 1
                assert energy(m, bits) == e
                best_bits, best_e, method = bits, e, "pattern"
    return QuboOptimum(best_bits, best_e, method)


def _count_patterns(n, g, max_violation):
    """Column-size vectors other than all-ones with sum (k_j - 1)^2 < max_violation."""
    ks = range(0, min(n, 1 + math.isqrt(math.ceil(max_violation))) + 1)
    for sizes in itertools.product(ks, repeat=g):
        t = sum((k - 1) ** 2 for k in sizes)
        if 0 < t < max_violation:
            yield sizes


def qubo_minimum(m: QuboModel) -> QuboOptimum:
    """Exact minimum. Unbalanced models always use the structured search so
    that ties break the same way (first sequence) at every size."""
    if m.kind == UQUBO and m.graph is not None and m.penalties is not None:
        return uqubo_minimum(m)
    if m.dim <= SWEEP_LIMIT:
        return exhaustive_minimum(m)
    if m.kind == SQUBO and m.graph is not None:
        seq = squbo_certificate(m.graph, m.g)
        if seq is None:
            raise CapacityError(
                "slack model has positive minimum; its exact value needs a sweep (dim too large)"
            )
        bits = encode_sequence(m, seq)
        return QuboOptimum(bits, energy(m, bits), "certificate")
    raise CapacityError(f"no exact method for a {m.kind} model of dim {m.dim}")


def squbo_decide(m: QuboModel) -> QuboOptimum:
    """Exact answer to "is the slack-model minimum zero?".

    Small models are swept, so the true minimum is returned. Larger ones
    get a zero-energy certificate, or bits=None when the minimum is positive.
    """
    if m.kind != SQUBO or m.graph is None:
        raise ParameterError("squbo_decide needs a slack model built from a graph")
    if m.dim <= SWEEP_LIMIT:
        return exhaustive_minimum(m)
    seq = squbo_certificate(m.graph, m.g)
    if seq is None:
        return QuboOptimum(None, None, "no-certificate")
    bits = encode_sequence(m, seq)
    return QuboOptimum(bits, energy(m, bits), "certificate")
