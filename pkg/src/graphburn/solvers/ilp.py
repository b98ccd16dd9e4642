"""Exact in-process solver for LinearModel.

The four burning programs all select one vertex per column, so they are
solved by covering search over per-column choices rather than over 2^dim
binary vectors. Models of any other shape fall back to a depth-first branch
and bound on the binaries.
"""
from __future__ import annotations

from fractions import Fraction

from ..errors import CapacityError, ParameterError
from ..formulations import (
    COV_CSP,
    COV_ILP,
    GBP_ILP,
    PROP_MILP,
    Assignment,
    LinearModel,
    encode,
)
from ..graph import ball_masks
from .cover import DEFAULT_NODE_BUDGET, SearchStats, find_cover, max_coverage

BINARY_LIMIT = 40


def internal_ilp_solve(
    model: LinearModel,
    *,
    limit: int = BINARY_LIMIT,
    node_budget: int = DEFAULT_NODE_BUDGET,
    lower_bound: int = 0,
    structured: bool = True,
    stats: SearchStats | None = None,
) -> Assignment:
    """Optimal assignment of ``model`` (status "infeasible" when none exists).

    ``lower_bound`` lets a caller that already knows the GBP-ILP optimum
    cannot fall below some value skip the smaller prefixes (row generation).
    """
    stats = stats if stats is not None else SearchStats()
    if structured and model.kind in _STRUCTURED:
        return _STRUCTURED[model.kind](model, node_budget, lower_bound, stats)
    if len(model.binaries) > limit:
        raise CapacityError(
            f"{len(model.binaries)} binaries exceed the generic search limit of {limit}"
        )
    return branch_and_bound(model, node_budget, stats)


# --- structure-exploiting paths -------------------------------------------


def _cover_slots(model: LinearModel, columns):
    """Targets are the model's coverage rows; candidate k of column j reaches
    every row that contains x_{k,j} as a coverage term."""
    xid = model.var_map["x"]
    owner = {var: ij for ij, var in xid.items()}
    rows = [c for c in model.constraints if c.tag and c.tag[0] == "cover"]
    masks = {j: [0] * model.n for j in columns}
    for t, row in enumerate(rows):
        for var, coef in row.coeffs:
            i, j = owner[var]
            if j not in masks:
                continue
            if model.kind == COV_ILP and j == 1:
                continue
            masks[j][i - 1] |= 1 << t
    if model.kind == COV_ILP and 1 in masks:
        # column 1 of COV-ILP is radius 0: it "covers" only its own row
        for t, row in enumerate(rows):
            masks[1][row.tag[1]] |= 1 << t
    full = (1 << len(rows)) - 1
    return [masks[j] for j in columns], full, rows


def _from_columns(model: LinearModel, picks: dict[int, int]) -> dict[int, Fraction]:
    values = {v: Fraction(0) for v in range(model.num_vars)}
    xid = model.var_map["x"]
    for j, k in picks.items():
        values[xid[(k + 1, j)]] = Fraction(1)
    return values


def _solve_gbp(model, budget, lower_bound, stats):
    U = model.width
    for k in range(max(lower_bound, 0), U + 1):
        columns = list(range(1, k + 1))
        slots, full, _ = _cover_slots(model, columns)
        if full == 0:
            picks = {j: 0 for j in columns}
        else:
            if k == 0:
                continue
            # larger radii first: better early branching
            order = columns[::-1]
            found = find_cover([slots[j - 1] for j in order], full, budget, stats)
            if found is None:
                continue
            picks = dict(zip(order, found))
        values = _from_columns(model, picks)
        return Assignment(values, model.objective_value(values))
    return Assignment({}, None, "infeasible")


def _solve_csp(model, budget, lower_bound, stats):
    columns = list(range(model.width, 0, -1))
    slots, full, _ = _cover_slots(model, columns)
    found = find_cover(slots, full, budget, stats)
    if found is None:
        return Assignment({}, None, "infeasible")
    values = _from_columns(model, dict(zip(columns, found)))
    return Assignment(values, None)


def _solve_cov_ilp(model, budget, lower_bound, stats):
    g = model.width
    upper = list(range(g, 1, -1))
    slots, full, rows = _cover_slots(model, upper + [1])
    picks = None
    if upper:
        found = find_cover(slots[:-1], full, budget, stats)
        if found is not None:
            picks = dict(zip(upper, found))
    if picks is None:
        found = find_cover(slots, full, budget, stats)
        if found is not None:
            picks = dict(zip(upper + [1], found))
            del picks[1]
    if picks is None:
        if upper:
            _, found = max_coverage(slots[:-1], full, budget, stats)
            picks = dict(zip(upper, found))
        else:
            picks = {}
    values = _from_columns(model, picks)
    xid = model.var_map["x"]
    reached = 0
    for j, k in picks.items():
        reached |= slots[upper.index(j)][k]
    for t, row in enumerate(rows):
        values[xid[(row.tag[1] + 1, 1)]] = Fraction((reached >> t) & 1)
    return Assignment(values, model.objective_value(values))


def _solve_prop(model, budget, lower_bound, stats):
    """min z = b(G) - 1: for fixed s the simulated burn pattern is the best b,
    and the latest burn step is the first prefix that burns every vertex."""
    G = model.graph
    if G is None:
        raise ParameterError("PROP-MILP structured solve needs the model's graph")
    full = (1 << G.n) - 1
    masks = ball_masks(G, range(model.width))
    for k in range(1, model.width + 1):
        found = find_cover([masks[r] for r in range(k - 1, -1, -1)], full, budget, stats)
        if found is not None:
            a = encode(model, tuple(found))
            return a
    # nothing burns within U rounds: every choice leaves some vertex at z = U
    a = encode(model, (0,))
    return a


_STRUCTURED = {
    GBP_ILP: _solve_gbp,
    COV_CSP: _solve_csp,
    COV_ILP: _solve_cov_ilp,
    PROP_MILP: _solve_prop,
}


# --- generic binary branch and bound --------------------------------------


def branch_and_bound(model: LinearModel, node_budget: int = DEFAULT_NODE_BUDGET, stats=None) -> Assignment:
    """Depth-first search over binaries in id order with activity-bound pruning.

    Each constraint tracks the least and greatest activity its unfixed
    variables still allow; a branch is cut once some row cannot be satisfied
    or the objective bound cannot beat the incumbent.
    """
    stats = stats if stats is not None else SearchStats()
    if any(v.kind != "binary" for v in model.variables):
        raise ParameterError("generic search handles pure binary models only")
    nv = model.num_vars
    sign = -1 if model.sense == "max" else 1
    obj = [0] * nv
    for v, c in model.objective:
        obj[v] += sign * c
    rows = model.constraints
    lo = [sum(min(c, 0) for _, c in r.coeffs) for r in rows]
    hi = [sum(max(c, 0) for _, c in r.coeffs) for r in rows]
    occ: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    for ri, r in enumerate(rows):
        for v, c in r.coeffs:
            occ[v].append((ri, c))
    # objective bound from unfixed variables: sum of negative coefficients left
    rest_neg = [0] * (nv + 1)
    for v in range(nv - 1, -1, -1):
        rest_neg[v] = rest_neg[v + 1] + min(obj[v], 0)
    best = {"val": None, "x": None}
    x = [0] * nv
    feasible_only = model.sense == "none"

    def row_ok(ri):
        r = rows[ri]
        if r.rel == "<=":
            return lo[ri] <= r.rhs
        if r.rel == ">=":
            return hi[ri] >= r.rhs
        return lo[ri] <= r.rhs <= hi[ri]

    def dfs(v, val):
        if best["val"] is not None and (feasible_only or val + rest_neg[v] >= best["val"]):
            return
        if v == nv:
            best["val"], best["x"] = val, x[:]
            return
        stats.nodes += 1
        if stats.nodes > node_budget:
            raise CapacityError(f"branch and bound exceeded {node_budget} nodes")
        for bit in (0, 1):
            x[v] = bit
            touched = occ[v]
            for ri, c in touched:
                # fix v: drop its free range, add its fixed contribution
                if c > 0:
                    hi[ri] -= c * (1 - bit)
                    lo[ri] += c * bit
                else:
                    lo[ri] -= c * (1 - bit)
                    hi[ri] += c * bit
            if all(row_ok(ri) for ri, _ in touched):
                dfs(v + 1, val + obj[v] * bit)
            for ri, c in touched:
                if c > 0:
                    hi[ri] += c * (1 - bit)
                    lo[ri] -= c * bit
                else:
                    lo[ri] += c * (1 - bit)
                    hi[ri] -= c * bit
        x[v] = 0

    if all(row_ok(ri) for ri in range(len(rows))):
        dfs(0, 0)
    if best["x"] is None:
        return Assignment({}, None, "infeasible")
    values = {v: Fraction(b) for v, b in enumerate(best["x"])}
    objective = model.objective_value(values) if model.sense != "none" else None
    return Assignment(values, objective)
