"""Success-rate tables for binary search on random graph families.

Instance graphs are seeded by splitting a root seed: instance (cell k,
replication r) uses ``SeedSequence([root, k, r])``, so any single instance
can be replayed without running the rest of the table.
"""
from __future__ import annotations

import csv
import io
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .burning import ORACLE_LIMIT, brute_force_burning_number, validate
from .errors import ParameterError
from .graph import Graph, connected_components, gen_erdos_renyi, gen_geometric
from .solvers.anneal import SaParams
from .solvers.search import ANNEAL, INTERNAL, Backend, binary_search_burning

# method name -> (embedding, penalty mode, backend kind)
METHODS = {
    "uqubo-uniform": ("uqubo", "uniform", INTERNAL),
    "uqubo-guided": ("uqubo", "guided", INTERNAL),
    "uqubo-uniform-sa": ("uqubo", "uniform", ANNEAL),
    "uqubo-guided-sa": ("uqubo", "guided", ANNEAL),
    "squbo": ("squbo", "guided", INTERNAL),
    "squbo-sa": ("squbo", "guided", ANNEAL),
    "cmcp": ("cmcp", "guided", INTERNAL),
    "cov-csp": ("cov-csp", "guided", INTERNAL),
    "cov-ilp": ("cov-ilp", "guided", INTERNAL),
}
FAMILIES = ("er", "geo")


def parse_er_p(text: str, n: int) -> float:
    """'5/n' -> 5/n, '1/2n' -> 1/(2n), '3/2n' -> 3/(2n), '0.2' -> 0.2."""
    t = text.strip().replace(" ", "")
    m = re.fullmatch(r"(\d+(?:\.\d+)?)/(\d*)n", t)
    if m:
        num = Fraction(m.group(1))
        den = Fraction(m.group(2) or 1) * n
        return float(num / den)
    try:
        p = float(t)
    except ValueError:
        raise ParameterError(f"cannot read edge probability {text!r}") from None
    if not 0 <= p <= 1:
        raise ParameterError(f"edge probability {p} outside [0, 1]")
    return p


@dataclass(frozen=True)
class BenchConfig:
    family: str
    sizes: tuple[int, ...]
    params: tuple[str, ...]  # p specs for er, radii for geo
    replications: int = 100
    methods: tuple[str, ...] = ("uqubo-uniform", "uqubo-guided")
    root_seed: int = 0
    literal_upper: bool = False
    sa: SaParams = SaParams()
    workers: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"family must be one of {FAMILIES}")
        if self.replications < 1:
            raise ParameterError("replications must be >= 1")
        for m in self.methods:
            if m not in METHODS:
                raise ParameterError(f"unknown method {m!r}; choose from {sorted(METHODS)}")
        for n in self.sizes:
            if not 1 <= n <= ORACLE_LIMIT:
                raise ParameterError(f"bench sizes must lie in 1..{ORACLE_LIMIT} (oracle cap)")


@dataclass
class InstanceResult:
    cell: int
    rep: int
    seed: int
    n: int
    m: int
    components: int
    oracle: int
    found: dict = field(default_factory=dict)  # method -> witness length or None
    success: dict = field(default_factory=dict)


def instance_seed(root: int, cell: int, rep: int) -> int:
    return int(np.random.SeedSequence([root, cell, rep]).generate_state(1)[0])


def cells(cfg: BenchConfig) -> list[tuple[int, str]]:
    return [(n, p) for p in cfg.params for n in cfg.sizes]


def make_graph(cfg: BenchConfig, n: int, param: str, seed: int) -> Graph:
    if cfg.family == "er":
        return gen_erdos_renyi(n, parse_er_p(param, n), seed)
    return gen_geometric(n, float(param), seed)


def run_instance(cfg: BenchConfig, cell: int, rep: int) -> InstanceResult:
    n, param = cells(cfg)[cell]
    seed = instance_seed(cfg.root_seed, cell, rep)
    G = make_graph(cfg, n, param, seed)
    b, _ = brute_force_burning_number(G)
    res = InstanceResult(cell, rep, seed, n, G.m, connected_components(G)[1], b)
    for name in cfg.methods:
        emb, pen, kind = METHODS[name]
        sa = SaParams(**{**cfg.sa.__dict__, "seed": seed}) if kind == ANNEAL else cfg.sa
        report = binary_search_burning(
            G, emb, Backend(kind=kind, sa=sa), literal_upper=cfg.literal_upper, penalties=pen
        )
        w = report.witness
        res.found[name] = None if w is None else len(w)
        res.success[name] = w is not None and validate(G, w) and len(w) == b
    return res


def _run(args):
    return run_instance(*args)


def run_bench(cfg: BenchConfig) -> list[InstanceResult]:
    jobs = [(cfg, c, r) for c in range(len(cells(cfg))) for r in range(cfg.replications)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            out = list(ex.map(_run, jobs, chunksize=4))
    else:
        out = [_run(j) for j in jobs]
    return sorted(out, key=lambda r: (r.cell, r.rep))


@dataclass
class CellSummary:
    n: int
    param: str
    rates: dict
    mean_components: float
    sd_components: float
    replications: int


def summarize(cfg: BenchConfig, results: list[InstanceResult]) -> list[CellSummary]:
    out = []
    for c, (n, param) in enumerate(cells(cfg)):
        rows = [r for r in results if r.cell == c]
        comps = np.array([r.components for r in rows], dtype=float)
        rates = {m: 100.0 * sum(r.success[m] for r in rows) / len(rows) for m in cfg.methods}
        sd = float(comps.std(ddof=1)) if len(rows) > 1 else 0.0
        out.append(CellSummary(n, param, rates, float(comps.mean()), sd, len(rows)))
    return out


def table_tsv(cfg: BenchConfig, summary: list[CellSummary]) -> str:
    """One row per (parameter, n): success % per method, then mean component count."""
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(["# family", cfg.family, "root_seed", cfg.root_seed, "replications", cfg.replications])
    w.writerow(["p" if cfg.family == "er" else "r", "n", *cfg.methods, "<c>"])
    for s in summary:
        w.writerow([s.param, s.n, *(f"{s.rates[m]:.0f}%" for m in cfg.methods), f"{s.mean_components:.2f}"])
    return buf.getvalue()


def bench(cfg: BenchConfig) -> tuple[list[InstanceResult], list[CellSummary], float]:
    t = time.perf_counter()
    results = run_bench(cfg)
    return results, summarize(cfg, results), time.perf_counter() - t
