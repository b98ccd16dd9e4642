"""Solver-agnostic linear models for the four linear burning programs.

Index conventions: vertex ``i`` and column ``j`` are 1-based in variable
names (``x_3_2``) and 0/1-based internally as noted. Column ``j`` of the
coverage programs carries coverage radius ``j - 1``, so the vertex chosen in
column ``j`` sits at sequence position ``g - j + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

from .burning import BurningSequence, validate
from .errors import DecodeError, ParameterError
from .graph import Graph, distances

INTEGRALITY_TOL = 1e-6

PROP_MILP = "prop-milp"
COV_CSP = "cov-csp"
COV_ILP = "cov-ilp"
GBP_ILP = "gbp-ilp"
KINDS = (PROP_MILP, COV_CSP, COV_ILP, GBP_ILP)


class NoBurningSequence(DecodeError):
    """The assignment is optimal but encodes no burning sequence of this length."""


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str = "binary"  # or "continuous"
    lb: float = 0
    ub: float | None = 1


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: tuple[tuple[int, int], ...]  # (variable id, coefficient), ascending ids
    rel: str  # "<=", "=", ">="
    rhs: int
    tag: tuple = ()

    def activity(self, values) -> Fraction:
        return sum((c * values[v] for v, c in self.coeffs), Fraction(0))

    def holds(self, values, tol: float = INTEGRALITY_TOL) -> bool:
        lhs = self.activity(values)
        if self.rel == "<=":
            return lhs <= self.rhs + tol
        if self.rel == ">=":
            return lhs >= self.rhs - tol
        return abs(lhs - self.rhs) <= tol


@dataclass(frozen=True)
class LinearModel:
    kind: str
    n: int
    width: int  # g for the coverage programs, U for PROP-MILP / GBP-ILP
    variables: tuple[Variable, ...]
    sense: str  # "min", "max" or "none"
    objective: tuple[tuple[int, int], ...]
    constraints: tuple[Constraint, ...]
    var_map: Mapping[str, Mapping[tuple[int, int], int]] = field(compare=False)
    covered_rows: frozenset[int] = frozenset()
    graph: Graph | None = field(default=None, compare=False, repr=False)

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    @property
    def binaries(self) -> list[int]:
        return [k for k, v in enumerate(self.variables) if v.kind == "binary"]

    def objective_value(self, values) -> Fraction:
        return sum((c * values[v] for v, c in self.objective), Fraction(0))

    def violated(self, values, tol: float = INTEGRALITY_TOL) -> list[str]:
        return [c.name for c in self.constraints if not c.holds(values, tol)]

    def with_coverage_rows(self, vertices: Iterable[int]) -> "LinearModel":
        """Copy of a GBP-ILP / COV-CSP model extended by coverage rows for ``vertices``."""
        if self.kind not in (GBP_ILP, COV_CSP):
            raise ParameterError(f"lazy coverage rows are not supported for {self.kind}")
        new = [v for v in dict.fromkeys(vertices) if v not in self.covered_rows]
        rows = tuple(_cover_row(self.graph, self.var_map["x"], self.width, v) for v in new)
        return replace(
            self,
            constraints=self.constraints + rows,
            covered_rows=self.covered_rows | frozenset(new),
        )


@dataclass
class Assignment:
    values: dict[int, Fraction]
    objective_value: Fraction | None
    status: str = "optimal"  # or "infeasible"

    @property
    def feasible(self) -> bool:
        return self.status == "optimal"


def _x_grid(n: int, width: int, prefix: str, offset: int = 0):
    variables = []
    ids = {}
    for j in range(1, width + 1):
        for i in range(1, n + 1):
            ids[(i, j)] = offset + len(variables)
            variables.append(Variable(f"{prefix}_{i}_{j}"))
    return variables, ids


def _cover_row(G: Graph, xid, width: int, v: int) -> Constraint:
    """sum_j sum_{k in N_{j-1}[v]} x_{k,j} >= 1"""
    dist = distances(G, v, limit=width - 1)
    terms = {}
    for k, d in enumerate(dist):
        if d <= width - 1:
            for j in range(int(d) + 1, width + 1):
                terms[xid[(k + 1, j)]] = 1
    return Constraint(f"cover_{v + 1}", tuple(sorted(terms.items())), ">=", 1, ("cover", v))


def _check_width(value: int, what: str):
    if int(value) != value or value < 1:
        raise ParameterError(f"{what} must be a positive integer (got {value})")


def build_prop_milp(G: Graph, U: int) -> LinearModel:
    """Propagation model: s picks one vertex per round, b tracks burned vertices, min z."""
    _check_width(U, "U")
    n = G.n
    s_vars, sid = _x_grid(n, U, "s")
    b_vars, bid = _x_grid(n, U, "b", offset=len(s_vars))
    zid = len(s_vars) + len(b_vars)
    variables = tuple(s_vars + b_vars + [Variable("z", "continuous", 0, None)])
    cons = []
    for j in range(1, U + 1):
        for i in range(1, n + 1):
            terms = {bid[(i, j)]: 1, sid[(i, j)]: -1}
            if j > 1:
                for k in (i - 1, *G.neighbors(i - 1)):
                    terms[bid[(k + 1, j - 1)]] = -1
            cons.append(Constraint(f"spread_{i}_{j}", tuple(sorted(terms.items())), "<=", 0, ("spread", i - 1, j)))
    for j in range(1, U + 1):
        terms = tuple((sid[(i, j)], 1) for i in range(1, n + 1))
        cons.append(Constraint(f"round_{j}", terms, "=", 1, ("column", j)))
    for i in range(1, n + 1):
        # sum_j (1 - b_ij) <= z   <=>   -sum_j b_ij - z <= -U
        terms = tuple((bid[(i, j)], -1) for j in range(1, U + 1)) + ((zid, -1),)
        cons.append(Constraint(f"late_{i}", terms, "<=", -U, ("late", i - 1)))
    return LinearModel(
        PROP_MILP, n, U, variables, "min", ((zid, 1),), tuple(cons),
        {"s": sid, "b": bid, "z": {(0, 0): zid}}, graph=G,
    )


def build_cov_csp(G: Graph, g: int, rows: Iterable[int] | None = None) -> LinearModel:
    """Feasibility model: one vertex per radius, every vertex covered."""
    _check_width(g, "g")
    variables, xid = _x_grid(G.n, g, "x")
    cons = [
        Constraint(f"col_{j}", tuple((xid[(i, j)], 1) for i in range(1, G.n + 1)), "=", 1, ("column", j))
        for j in range(1, g + 1)
    ]
    rows = range(G.n) if rows is None else list(dict.fromkeys(rows))
    cons += [_cover_row(G, xid, g, v) for v in rows]
    return LinearModel(COV_CSP, G.n, g, tuple(variables), "none", (), tuple(cons), {"x": xid}, frozenset(rows), G)


def build_cov_ilp(G: Graph, g: int) -> LinearModel:
    """Max-coverage model: column 1 counts vertices covered by columns 2..g."""
    _check_width(g, "g")
    n = G.n
    variables, xid = _x_grid(n, g, "x")
    cons = [
        Constraint(f"col_{j}", tuple((xid[(i, j)], 1) for i in range(1, n + 1)), "=", 1, ("column", j))
        for j in range(2, g + 1)
    ]
    for v in range(n):
        # x_{v,1} - sum_{j>=2} sum_{k in N_{j-1}[v]} x_{k,j} <= 0
        terms = {xid[(v + 1, 1)]: 1}
        if g > 1:
            for var, _ in _cover_row(G, xid, g, v).coeffs:
                if var != xid[(v + 1, 1)]:
                    terms[var] = -1
        cons.append(Constraint(f"count_{v + 1}", tuple(sorted(terms.items())), "<=", 0, ("cover", v)))
    objective = tuple((xid[(i, 1)], 1) for i in range(1, n + 1))
    return LinearModel(COV_ILP, n, g, tuple(variables), "max", objective, tuple(cons), {"x": xid}, frozenset(range(n)), G)


def build_gbp_ilp(G: Graph, U: int, rows: Iterable[int] | None = None) -> LinearModel:
    """Min-length model with upper bound U; used columns form a prefix 1..k.

    The compound chain ``sum x_j <= sum x_{j-1} <= 1`` is written as a unit cap
    on every column plus one link row per ``j >= 2``.
    """
    _check_width(U, "U")
    n = G.n
    variables, xid = _x_grid(n, U, "x")
    col = {j: tuple((xid[(i, j)], 1) for i in range(1, n + 1)) for j in range(1, U + 1)}
    cons = [Constraint(f"cap_{j}", col[j], "<=", 1, ("cap", j)) for j in range(1, U + 1)]
    for j in range(2, U + 1):
        terms = col[j] + tuple((v, -1) for v, _ in col[j - 1])
        cons.append(Constraint(f"chain_{j}", tuple(sorted(terms)), "<=", 0, ("chain", j)))
    rows = range(n) if rows is None else list(dict.fromkeys(rows))
    cons += [_cover_row(G, xid, U, v) for v in rows]
    objective = tuple(sorted(v for j in col for v in col[j]))
    return LinearModel(GBP_ILP, n, U, tuple(variables), "min", objective, tuple(cons), {"x": xid}, frozenset(rows), G)


def expected_counts(kind: str, n: int, width: int) -> tuple[int, int]:
    """(variables, constraints) of a full model."""
    return {
        PROP_MILP: (2 * width * n + 1, width * n + width + n),
        COV_CSP: (width * n, width + n),
        COV_ILP: (width * n, width + n - 1),
        GBP_ILP: (width * n, 2 * width + n - 1),
    }[kind]


# --- decoding --------------------------------------------------------------


def _bit(model: LinearModel, a: Assignment, var: int) -> int:
    val = a.values.get(var, 0)
    r = round(val)
    if abs(val - r) > INTEGRALITY_TOL or r not in (0, 1):
        raise DecodeError(f"variable {model.variables[var].name} = {val} is not binary")
    return int(r)


def _column(model: LinearModel, a: Assignment, role: str, j: int) -> list[int]:
    ids = model.var_map[role]
    return [i - 1 for i in range(1, model.n + 1) if _bit(model, a, ids[(i, j)])]


def _one(model, a, role, j) -> int:
    chosen = _column(model, a, role, j)
    if len(chosen) != 1:
        raise DecodeError(f"column {j} selects {len(chosen)} vertices")
    return chosen[0]


def decode(model: LinearModel, a: Assignment, check: bool = True) -> BurningSequence:
    """Read the burning sequence encoded by an assignment.

    With ``check`` the result is validated against the model's graph and a
    DecodeError is raised if it does not burn every vertex.
    """
    if not a.feasible:
        raise NoBurningSequence(f"{model.kind} reported {a.status}")
    k = model.kind
    if k == PROP_MILP:
        z = a.values.get(model.var_map["z"][(0, 0)], 0)
        length = int(round(z)) + 1
        if length > model.width:
            raise NoBurningSequence(f"z = {z} exceeds the U = {model.width} horizon")
        seq = tuple(_one(model, a, "s", j) for j in range(1, length + 1))
    elif k == COV_CSP:
        g = model.width
        seq = tuple(_one(model, a, "x", g - p + 1) for p in range(1, g + 1))
    elif k == COV_ILP:
        g, n = model.width, model.n
        count = sum(_bit(model, a, model.var_map["x"][(i, 1)]) for i in range(1, n + 1))
        if count < n - 1:
            raise NoBurningSequence(f"COV-ILP covers {count} < n - 1 = {n - 1} vertices")
        zeros = [i - 1 for i in range(1, n + 1) if not _bit(model, a, model.var_map["x"][(i, 1)])]
        last = zeros[0] if zeros else 0
        seq = tuple(_one(model, a, "x", g - p + 1) for p in range(1, g)) + (last,)
    elif k == GBP_ILP:
        used = [j for j in range(1, model.width + 1) if _column(model, a, "x", j)]
        length = len(used)
        if used != list(range(1, length + 1)):
            raise DecodeError(f"used columns {used} are not a prefix")
        seq = tuple(_one(model, a, "x", length - p + 1) for p in range(1, length + 1))
    else:
        raise ParameterError(f"unknown model kind {k!r}")
    if check and model.graph is not None and not validate(model.graph, seq):
        raise DecodeError(f"decoded sequence {seq} does not burn the graph")
    return seq


def encode(model: LinearModel, seq: BurningSequence) -> Assignment:
    """Assignment representing ``seq`` in ``model`` (inverse of ``decode`` for valid sequences).

    For PROP-MILP the sequence is padded with vertex 0 to U rounds and b is
    the simulated (maximal) burn pattern; z is then the latest burn step
    minus one.
    """
    from .burning import simulate

    G = model.graph
    values = {v: Fraction(0) for v in range(model.num_vars)}
    g = len(seq)
    if model.kind == PROP_MILP:
        U = model.width
        if g > U:
            raise ParameterError("sequence longer than U")
        padded = tuple(seq) + (0,) * (U - g)
        rounds = simulate(G, padded)
        for j, u in enumerate(padded, 1):
            values[model.var_map["s"][(u + 1, j)]] = Fraction(1)
            for v in rounds[j - 1]:
                values[model.var_map["b"][(v + 1, j)]] = Fraction(1)
        late = max(sum(1 for r in rounds if v not in r) for v in range(model.n)) if model.n else 0
        values[model.var_map["z"][(0, 0)]] = Fraction(late)
    elif model.kind in (COV_CSP, GBP_ILP):
        if model.kind == COV_CSP and g != model.width:
            raise ParameterError("COV-CSP needs a sequence of length g")
        if g > model.width:
            raise ParameterError("sequence longer than U")
        for p, u in enumerate(seq, 1):
            values[model.var_map["x"][(u + 1, g - p + 1)]] = Fraction(1)
    elif model.kind == COV_ILP:
        if g != model.width:
            raise ParameterError("COV-ILP needs a sequence of length g")
        for p, u in enumerate(seq[:-1], 1):
            values[model.var_map["x"][(u + 1, g - p + 1)]] = Fraction(1)
        for c in model.constraints:
            if c.tag[0] == "cover":
                v = c.tag[1]
                # x_{v,1} may be 1 only if some larger radius already covers v
                covered = any(values[var] for var, coef in c.coeffs if coef < 0)
                values[model.var_map["x"][(v + 1, 1)]] = Fraction(int(covered))
    obj = model.objective_value(values) if model.sense != "none" else None
    return Assignment(values, obj)
