"""Binary search over the sequence length with pluggable decision embeddings."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from ..burning import BurningSequence, greedy_heuristic, upper_bound, validate
from ..errors import CapacityError, DecodeError, GraphBurnError, ParameterError
from ..formulations import (
    COV_CSP,
    COV_ILP,
    GBP_ILP,
    PROP_MILP,
    Assignment,
    LinearModel,
    build_cov_csp,
    build_cov_ilp,
    build_gbp_ilp,
    build_prop_milp,
    decode,
)
from ..graph import Graph, ball_masks
from ..qubo import (
    SQUBO,
    UQUBO,
    QuboModel,
    build_squbo,
    build_uqubo,
    decode_qubo,
    default_penalties,
    guided_penalties,
)
from .anneal import SaParams, simulated_annealing
from .cover import DEFAULT_NODE_BUDGET, SearchStats, find_cover, max_coverage
from .external import PROFILES, check_template, external_solve
from .ilp import BINARY_LIMIT, internal_ilp_solve
from .quboexact import qubo_minimum, squbo_decide

INTERNAL = "internal-exhaustive"
EXTERNAL = "external-command"
ANNEAL = "simulated-annealing"
BACKEND_KINDS = (INTERNAL, EXTERNAL, ANNEAL)

CMCP = "cmcp"
EMBEDDINGS = (CMCP, COV_CSP, COV_ILP, SQUBO, UQUBO)
PENALTY_MODES = ("uniform", "guided")

OPTIMAL = "optimal"
UPPER_BOUND_ONLY = "upper-bound-only"
NOT_FOUND = "not-found"


@dataclass(frozen=True)
class Backend:
    kind: str = INTERNAL
    command: str | None = None
    profile: str = "generic"
    sa: SaParams = SaParams()
    node_budget: int = DEFAULT_NODE_BUDGET
    binary_limit: int = BINARY_LIMIT
    timeout: float | None = None

    def __post_init__(self):
        if self.kind not in BACKEND_KINDS:
            raise ParameterError(f"unknown backend kind {self.kind!r}")
        if self.kind == EXTERNAL:
            if self.profile not in PROFILES:
                raise ParameterError(f"unknown solver profile {self.profile!r}")
            check_template(self.command or PROFILES[self.profile].template)

    @property
    def exact(self) -> bool:
        return self.kind != ANNEAL

    def describe(self) -> str:
        if self.kind == EXTERNAL:
            return f"{self.kind}:{self.profile}"
        return self.kind

    def solve_linear(self, model: LinearModel, stats: SearchStats | None = None, **kw) -> Assignment:
        if self.kind == INTERNAL:
            return internal_ilp_solve(
                model, limit=self.binary_limit, node_budget=self.node_budget, stats=stats, **kw
            )
        if self.kind == EXTERNAL:
            prof = PROFILES[self.profile]
            return external_solve(model, self.command or prof.template, prof, self.timeout)
        raise ParameterError("simulated annealing only handles QUBO embeddings")

    def solve_qubo(self, m: QuboModel):
        if self.kind == INTERNAL:
            opt = squbo_decide(m) if m.kind == SQUBO else qubo_minimum(m)
            return opt.bits, opt.energy
        if self.kind == ANNEAL:
            return simulated_annealing(m, self.sa)
        raise ParameterError("QUBO embeddings need the internal or annealing backend")


@dataclass
class Iteration:
    probe: int
    backend: str
    wall_time: float
    sizes: dict
    outcome: str
    detail: dict = field(default_factory=dict)


@dataclass
class SolveReport:
    method: str
    burning_number: int | None
    witness: BurningSequence | None
    status: str
    iterations: list[Iteration] = field(default_factory=list)
    total_time: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_json(self, G: Graph | None = None) -> dict:
        """Plain-JSON view; witness vertices are written as graph labels when G is given."""
        d = asdict(self)
        if self.witness is not None and G is not None:
            d["witness"] = [G.label(u) for u in self.witness]
        elif self.witness is not None:
            d["witness"] = list(self.witness)
        return _jsonable(d)


def _jsonable(x):
    from fractions import Fraction

    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


# --- exhaustive CMCP -------------------------------------------------------


def _radius_slots(G: Graph, g: int) -> list[list[int]]:
    masks = ball_masks(G, range(g))
    return [masks[r] for r in range(g - 1, -1, -1)]


def solve_cmcp_exhaustive(
    G: Graph, g: int, node_budget: int = DEFAULT_NODE_BUDGET, stats: SearchStats | None = None
) -> tuple[int, BurningSequence]:
    """Most vertices covered by one ball per radius g-1..0, lexicographically first selection."""
    if g < 1:
        raise ParameterError("g must be >= 1")
    try:
        covered, picks = max_coverage(_radius_slots(G, g), (1 << G.n) - 1, node_budget, stats)
    except CapacityError as exc:
        raise CapacityError(f"{exc}; use row generation for large graphs") from None
    return covered, tuple(picks)


# --- decision probes -------------------------------------------------------


@dataclass
class _Probe:
    success: bool
    sequence: BurningSequence | None
    sizes: dict
    outcome: str
    detail: dict = field(default_factory=dict)


def _probe_cmcp(G, g, backend, ctx):
    if backend.kind != INTERNAL:
        raise ParameterError("the cmcp embedding runs on the internal backend only")
    stats = SearchStats()
    found = find_cover(_radius_slots(G, g), (1 << G.n) - 1, backend.node_budget, stats)
    sizes = {"candidates": G.n * g}
    if found is None:
        return _Probe(False, None, sizes, "does not burn all vertices", {"nodes": stats.nodes})
    return _Probe(True, tuple(found), sizes, "burns all vertices", {"nodes": stats.nodes})


def _lp_sizes(model):
    return {"variables": model.num_vars, "constraints": model.num_constraints}


def _probe_csp(G, g, backend, ctx):
    model = build_cov_csp(G, g)
    a = backend.solve_linear(model)
    if not a.feasible:
        return _Probe(False, None, _lp_sizes(model), "infeasible")
    return _Probe(True, decode(model, a), _lp_sizes(model), "feasible")


def _probe_cov_ilp(G, g, backend, ctx):
    model = build_cov_ilp(G, g)
    a = backend.solve_linear(model)
    sizes = _lp_sizes(model)
    detail = {"objective": a.objective_value}
    try:
        seq = decode(model, a)
    except DecodeError as exc:
        return _Probe(False, None, sizes, f"not a burning sequence ({exc})", detail)
    return _Probe(True, seq, sizes, "burning sequence", detail)


def _probe_squbo(G, g, backend, ctx):
    m = build_squbo(G, g)
    bits, e = backend.solve_qubo(m)
    if bits is None:
        return _Probe(False, None, {"dim": m.dim}, "OPT>0", {"energy": "positive"})
    seq, report = decode_qubo(m, bits)
    detail = {"energy": e, "valid": report["valid"]}
    if e == 0:
        # zero energy forces one vertex per column and full coverage
        assert seq is not None and report["valid"]
        return _Probe(True, seq, {"dim": m.dim}, "OPT=0", detail)
    return _Probe(False, None, {"dim": m.dim}, "OPT>0", detail)


def _probe_uqubo(G, g, backend, ctx):
    mode = ctx["penalties"]
    if mode == "uniform" and g < 2:
        return _Probe(False, None, {"dim": g * G.n}, "rejected: uniform penalties need g >= 2")
    if mode == "uniform":
        pc = default_penalties(G, g)
    else:
        pc = guided_penalties(G, g, ctx["guide"])
    m = build_uqubo(G, g, pc)
    bits, e = backend.solve_qubo(m)
    seq, report = decode_qubo(m, bits)
    detail = {"energy": e, "P": pc.P, "mode": mode}
    if seq is not None and report["valid"]:
        return _Probe(True, seq, {"dim": m.dim}, "burning sequence", detail)
    return _Probe(False, None, {"dim": m.dim}, report.get("violation", "invalid"), detail)


_PROBES: dict[str, Callable] = {
    CMCP: _probe_cmcp,
    COV_CSP: _probe_csp,
    COV_ILP: _probe_cov_ilp,
    SQUBO: _probe_squbo,
    UQUBO: _probe_uqubo,
}


def binary_search_burning(
    G: Graph,
    embedding: str = CMCP,
    backend: Backend = Backend(),
    *,
    literal_upper: bool = False,
    penalties: str = "guided",
    guide: BurningSequence | None = None,
) -> SolveReport:
    """Smallest g whose decision probe succeeds, by bisection on [1, u].

    ``u`` starts at the greedy/Bonato-Kamali bound, or at n with
    ``literal_upper``. Only sequences produced by successful probes are
    reported; when none succeeds the status is "not-found". The result is certified optimal only when every
    failed probe proves infeasibility: exact backends on cmcp, cov-csp,
    cov-ilp and squbo. uqubo minimizers need not be burning sequences even
    when g >= b(G), and annealing failures prove nothing, so those runs
    report an upper bound.
    """
    if embedding not in _PROBES:
        raise ParameterError(f"unknown embedding {embedding!r}; choose from {EMBEDDINGS}")
    if penalties not in PENALTY_MODES:
        raise ParameterError(f"penalty mode must be one of {PENALTY_MODES}")
    t0 = time.perf_counter()
    n = G.n
    lo, hi = 1, (n if literal_upper else upper_bound(G))
    best: BurningSequence | None = None
    ctx = {"penalties": penalties}
    if embedding == UQUBO and penalties == "guided":
        ctx["guide"] = guide if guide is not None else greedy_heuristic(G)
    report = SolveReport(f"binary-search:{embedding}", None, None, OPTIMAL)
    report.extra["initial_upper"] = hi
    while lo <= hi:
        g = (lo + hi) // 2
        t = time.perf_counter()
        try:
            pr = _PROBES[embedding](G, g, backend, ctx)
        except GraphBurnError as exc:
            raise type(exc)(f"binary search at g={g}: {exc}") from exc
        report.iterations.append(
            Iteration(g, backend.describe(), time.perf_counter() - t, pr.sizes, pr.outcome, pr.detail)
        )
        if pr.success:
            assert validate(G, pr.sequence)
            if best is None or len(pr.sequence) <= len(best):
                best = pr.sequence
            hi = g - 1
        else:
            lo = g + 1
    report.witness = best
    if best is None:
        # only reachable when probes can fail for g >= b(G)
        report.status = NOT_FOUND
    else:
        report.burning_number = len(best)
        if not (backend.exact and embedding != UQUBO):
            report.status = UPPER_BOUND_ONLY
    report.total_time = time.perf_counter() - t0
    return report


# --- single formulation solves --------------------------------------------


def solve_direct(
    G: Graph,
    formulation: str,
    width: int,
    backend: Backend = Backend(),
    *,
    penalties: str = "guided",
    guide: BurningSequence | None = None,
) -> SolveReport:
    """Solve one model at a fixed g (coverage programs, QUBOs) or horizon U (PROP-MILP, GBP-ILP)."""
    t0 = time.perf_counter()
    rep = SolveReport(f"direct:{formulation}", None, None, OPTIMAL)
    if formulation in (PROP_MILP, GBP_ILP):
        builder = build_prop_milp if formulation == PROP_MILP else build_gbp_ilp
        model = builder(G, width)
        a = backend.solve_linear(model)
        if not a.feasible:
            raise ParameterError(f"{formulation} is infeasible for U = {width} (U < b(G))")
        seq = decode(model, a)
        rep.extra["objective"] = a.objective_value
        rep.witness, rep.burning_number = seq, len(seq)
        sizes = _lp_sizes(model)
        outcome = "optimal"
    elif formulation in _PROBES:
        ctx = {"penalties": penalties}
        if formulation == UQUBO and penalties == "guided":
            ctx["guide"] = guide if guide is not None else greedy_heuristic(G)
        pr = _PROBES[formulation](G, width, backend, ctx)
        rep.extra.update(pr.detail)
        rep.extra["success"] = pr.success
        sizes, outcome = pr.sizes, pr.outcome
        if pr.success:
            rep.witness, rep.burning_number = pr.sequence, len(pr.sequence)
        else:
            rep.status = NOT_FOUND
        if formulation == UQUBO or not backend.exact:
            rep.status = UPPER_BOUND_ONLY if pr.success else NOT_FOUND
    else:
        raise ParameterError(f"unknown formulation {formulation!r}")
    rep.iterations.append(Iteration(width, backend.describe(), time.perf_counter() - t0, sizes, outcome))
    rep.total_time = time.perf_counter() - t0
    return rep
