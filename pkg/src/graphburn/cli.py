"""Command-line entry point: gen, emit, solve, validate, bench."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import bench as benchmod
from .burning import brute_force_burning_number, fire_sources, uncovered, upper_bound, validate
from .errors import (
    BackendError,
    CapacityError,
    GraphBurnError,
    ParameterError,
    ParseError,
)
from .formulations import (
    COV_CSP,
    COV_ILP,
    GBP_ILP,
    KINDS,
    PROP_MILP,
    build_cov_csp,
    build_cov_ilp,
    build_gbp_ilp,
    build_prop_milp,
    expected_counts,
)
from .graph import (
    Graph,
    connected_components,
    gen_complete,
    gen_cycle,
    gen_erdos_renyi,
    gen_geometric,
    gen_grid,
    gen_path,
    gen_star,
    load_graph,
    write_edge_list,
)
from .lpfile import write_lp
from .qubo import SQUBO, UQUBO, build_squbo, build_uqubo, default_penalties, guided_penalties, slack_bits, write_qubo_file
from .solvers.anneal import SaParams
from .solvers.external import PROFILES
from .solvers.rowgen import row_generation_solve
from .solvers.search import (
    ANNEAL,
    EMBEDDINGS,
    EXTERNAL,
    INTERNAL,
    OPTIMAL,
    Backend,
    SolveReport,
    binary_search_burning,
    solve_direct,
)

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_CAPACITY, EXIT_BACKEND = 0, 1, 2, 3, 4
FORMULATIONS = KINDS + (SQUBO, UQUBO)


class UsageError(GraphBurnError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    graph: Graph | None
    graph_source: str | None
    formulation: str | None = None
    g: int | None = None
    U: int | None = None
    out: str | None = None

    def __post_init__(self):
        f = self.formulation
        if f in (COV_CSP, COV_ILP, SQUBO, UQUBO) and self.g is None:
            raise UsageError(f"{f} needs --g")
        if f in (PROP_MILP, GBP_ILP) and self.U is None:
            raise UsageError(f"{f} needs --U")


# --- graph sources ---------------------------------------------------------


def _relabel(G: Graph) -> Graph:
    """Generated graphs carry 1-based labels v1..vn."""
    return Graph(G.n, G.edges(), labels=range(1, G.n + 1))


def _ints(parts, k, spec):
    try:
        return [int(x) for x in parts[:k]]
    except ValueError:
        raise UsageError(f"bad generator spec {spec!r}") from None


def graph_from_spec(spec: str) -> tuple[Graph, dict]:
    """path:N, cycle:N, complete:N, star:LEAVES, grid:RxC, er:N:P:SEED, geo:N:R:SEED."""
    parts = spec.split(":")
    fam, rest = parts[0], parts[1:]
    try:
        if fam in ("path", "cycle", "complete", "star") and len(rest) == 1:
            (k,) = _ints(rest, 1, spec)
            gen = {"path": gen_path, "cycle": gen_cycle, "complete": gen_complete, "star": gen_star}[fam]
            return _relabel(gen(k)), {"family": fam, "n" if fam != "star" else "leaves": k}
        if fam == "grid" and len(rest) == 1 and "x" in rest[0]:
            r, c = _ints(rest[0].split("x"), 2, spec)
            return _relabel(gen_grid(r, c)), {"family": fam, "rows": r, "cols": c}
        if fam in ("er", "geo") and len(rest) == 3:
            n, seed = int(rest[0]), int(rest[2])
            if fam == "er":
                p = benchmod.parse_er_p(rest[1], n)
                return _relabel(gen_erdos_renyi(n, p, seed)), {"family": fam, "n": n, "p": p, "seed": seed}
            r = float(rest[1])
            return _relabel(gen_geometric(n, r, seed)), {"family": fam, "n": n, "r": r, "seed": seed}
    except ValueError as exc:
        raise UsageError(f"bad generator spec {spec!r}: {exc}") from None
    raise UsageError(f"bad generator spec {spec!r}")


def load_source(args) -> tuple[Graph, str]:
    if args.graph:
        return load_graph(args.graph, args.format), args.graph
    G, _ = graph_from_spec(args.gen)
    return G, args.gen


def _add_source(p):
    src = p.add_argument_group("graph source (exactly one)")
    x = src.add_mutually_exclusive_group(required=True)
    x.add_argument("--graph", help="edge list or Matrix Market file")
    x.add_argument("--gen", help="generator spec, e.g. path:9, grid:10x10, er:9:0.333:7, geo:15:0.45:1")
    src.add_argument("--format", default="edge-list", choices=["edge-list", "matrix-market"])


def _write_json(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path in (None, "-"):
        print(text)
    else:
        Path(path).write_text(text + "\n")


# --- gen -------------------------------------------------------------------


def cmd_gen(args) -> int:
    fam = args.family
    if fam in ("er", "geo") and args.n is None:
        raise UsageError(f"{fam} needs --n")
    if fam == "er":
        if args.p is None:
            raise UsageError("er needs --p")
        spec = f"er:{args.n}:{args.p}:{args.seed}"
    elif fam == "geo":
        if args.r is None:
            raise UsageError("geo needs --r")
        spec = f"geo:{args.n}:{args.r}:{args.seed}"
    elif fam == "grid":
        if args.rows is None or args.cols is None:
            raise UsageError("grid needs --rows and --cols")
        spec = f"grid:{args.rows}x{args.cols}"
    else:
        if args.n is None:
            raise UsageError(f"{fam} needs --n")
        spec = f"{fam}:{args.n}"
    G, meta = graph_from_spec(spec)
    out = Path(args.out)
    write_edge_list(G, out)
    meta.update(n=G.n, m=G.m, components=connected_components(G)[1], spec=spec)
    _write_json(meta, str(out) + ".json")
    print(f"wrote {out} (n={G.n}, m={G.m})")
    return EXIT_OK


# --- emit ------------------------------------------------------------------


def build_model(G: Graph, formulation: str, g=None, U=None, penalties="guided", lambda1="1"):
    if formulation == PROP_MILP:
        return build_prop_milp(G, U)
    if formulation == GBP_ILP:
        return build_gbp_ilp(G, U)
    if formulation == COV_CSP:
        return build_cov_csp(G, g)
    if formulation == COV_ILP:
        return build_cov_ilp(G, g)
    if formulation == SQUBO:
        return build_squbo(G, g)
    from fractions import Fraction

    lam1 = Fraction(lambda1)
    if penalties == "uniform":
        pc = default_penalties(G, g, lambda1=lam1)
    else:
        from .burning import greedy_heuristic

        pc = guided_penalties(G, g, greedy_heuristic(G), lambda1=lam1)
    return build_uqubo(G, g, pc)


def manifest(G: Graph, formulation: str, model, g=None, U=None) -> dict:
    d = {"formulation": formulation, "n": G.n, "m": G.m}
    if formulation in KINDS:
        width = U if formulation in (PROP_MILP, GBP_ILP) else g
        ev, ec = expected_counts(formulation, G.n, width)
        d.update(
            width=width,
            variables=model.num_vars,
            constraints=model.num_constraints,
            expected_variables=ev,
            expected_constraints=ec,
        )
        d["binaries"] = len(model.binaries)
    else:
        expected = g * G.n + (G.n * slack_bits(g) if formulation == SQUBO else 0)
        d.update(g=g, dim=model.dim, expected_dim=expected, variables=model.dim, offset=str(model.offset))
        if model.penalties is not None:
            d["penalties"] = {"mode": model.penalties.mode, "P": str(model.penalties.P),
                              "lambda1": str(model.penalties.lambda1)}
    d["counts_match"] = (
        d["variables"] == d["expected_variables"] and d["constraints"] == d["expected_constraints"]
        if formulation in KINDS
        else d["dim"] == d["expected_dim"]
    )
    return d


def cmd_emit(args) -> int:
    G, src = load_source(args)
    cfg = RunConfig("emit", G, src, args.formulation, args.g, args.U, args.out)
    model = build_model(G, cfg.formulation, cfg.g, cfg.U, args.penalties, args.lambda1)
    suffix = ".lp" if cfg.formulation in KINDS else ".qubo"
    out = Path(args.out) if args.out else Path(f"{cfg.formulation}{suffix}")
    if cfg.formulation in KINDS:
        write_lp(model, out)
    else:
        write_qubo_file(model, out)
    man = manifest(G, cfg.formulation, model, cfg.g, cfg.U)
    man["model_file"] = str(out)
    _write_json(man, str(out) + ".json")
    _write_json(man, None)
    return EXIT_OK


# --- solve -----------------------------------------------------------------


def make_backend(args) -> Backend:
    kind = {"internal": INTERNAL, "sa": ANNEAL, "external": EXTERNAL}[args.backend]
    sa = SaParams(
        initial_temperature=args.sa_t0,
        cooling=args.sa_cooling,
        steps_per_temperature=args.sa_steps,
        restarts=args.sa_restarts,
        seed=args.sa_seed,
        final_temperature=args.sa_tfinal,
    )
    return Backend(
        kind=kind,
        command=args.command,
        profile=args.profile,
        sa=sa,
        node_budget=args.node_budget,
        timeout=args.timeout,
    )


def _report_exit(rep: SolveReport) -> int:
    return EXIT_OK if rep.status == OPTIMAL else EXIT_INVALID


def cmd_solve(args) -> int:
    G, src = load_source(args)
    method = args.method
    backend = make_backend(args)
    if method == "oracle":
        import time

        t = time.perf_counter()
        b, seq = brute_force_burning_number(G, limit=args.oracle_limit)
        rep = SolveReport("oracle", b, seq, OPTIMAL, total_time=time.perf_counter() - t)
    elif method.startswith("binary-search:"):
        emb = method.split(":", 1)[1]
        if emb not in EMBEDDINGS:
            raise UsageError(f"embedding must be one of {EMBEDDINGS}")
        rep = binary_search_burning(
            G, emb, backend, literal_upper=args.literal_upper, penalties=args.penalties
        )
    elif method == "row-generation":
        U = None if args.U in (None, "auto") else _int_arg(args.U, "--U")
        rep = row_generation_solve(G, U, backend)
    elif method.startswith("direct:"):
        form = method.split(":", 1)[1]
        if form not in FORMULATIONS:
            raise UsageError(f"formulation must be one of {FORMULATIONS}")
        if form in (PROP_MILP, GBP_ILP):
            width = upper_bound(G, tighten=False) if args.U in (None, "auto") else _int_arg(args.U, "--U")
        else:
            if args.g is None:
                raise UsageError(f"{form} needs --g")
            width = args.g
        rep = solve_direct(G, form, width, backend, penalties=args.penalties)
    else:
        raise UsageError(f"unknown method {method!r}")
    data = rep.to_json(G)
    data["graph"] = {"source": src, "n": G.n, "m": G.m}
    _write_json(data, args.out)
    return _report_exit(rep)


def _int_arg(text, flag):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise UsageError(f"{flag} must be an integer or 'auto'") from None


# --- validate --------------------------------------------------------------


def read_sequence(text: str) -> list[str]:
    toks = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        toks += line.replace(",", " ").split()
    return toks


def cmd_validate(args) -> int:
    G, _ = load_source(args)
    text = sys.stdin.read() if args.sequence == "-" else Path(args.sequence).read_text()
    seq = []
    for tok in read_sequence(text):
        try:
            label = int(tok)
        except ValueError:
            raise ParseError(f"sequence entry {tok!r} is not an integer label") from None
        try:
            seq.append(G.index_of(label))
        except (KeyError, ValueError, ParameterError):
            raise ParseError(f"unknown vertex label {label}") from None
    missed = uncovered(G, seq)
    counts = fire_sources(G, seq).counts
    out = {
        "valid": validate(G, seq),
        "length": len(seq),
        "uncovered": [G.label(v) for v in missed],
        "fire_sources": {str(G.label(v)): c for v, c in enumerate(counts)},
    }
    print("valid" if out["valid"] else "invalid")
    if missed:
        print("uncovered: " + " ".join(str(x) for x in out["uncovered"]))
    print("fire sources: " + " ".join(f"{k}:{v}" for k, v in out["fire_sources"].items()))
    if args.json:
        _write_json(out, args.json)
    return EXIT_OK if out["valid"] else EXIT_INVALID


# --- bench -----------------------------------------------------------------


def cmd_bench(args) -> int:
    params = tuple(x for x in args.params.split(",") if x)
    cfg = benchmod.BenchConfig(
        family=args.family,
        sizes=tuple(int(x) for x in args.n.split(",")),
        params=params,
        replications=args.reps,
        methods=tuple(args.methods.split(",")),
        root_seed=args.seed,
        literal_upper=args.literal_upper,
        workers=args.workers,
    )
    results, summary, elapsed = benchmod.bench(cfg)
    if args.format == "tsv":
        text = benchmod.table_tsv(cfg, summary)
        if args.out:
            Path(args.out).write_text(text)
        print(text, end="")
    else:
        data = {
            "config": {"family": cfg.family, "sizes": cfg.sizes, "params": cfg.params,
                       "replications": cfg.replications, "methods": cfg.methods,
                       "root_seed": cfg.root_seed},
            "cells": [s.__dict__ for s in summary],
            "instances": [r.__dict__ for r in results],
            "elapsed": elapsed,
        }
        _write_json(data, args.out)
    return EXIT_OK


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphburn", description="Exact and heuristic graph burning.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="write a generated graph and a JSON sidecar")
    p.add_argument("family", choices=["er", "geo", "grid", "path", "cycle", "complete", "star"])
    p.add_argument("--n", type=int)
    p.add_argument("--p", help="edge probability, e.g. 0.333 or 5/n")
    p.add_argument("--r", type=float)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("emit", help="write an .lp or .qubo model plus a count manifest")
    p.add_argument("formulation", choices=FORMULATIONS)
    _add_source(p)
    p.add_argument("--g", type=int)
    p.add_argument("--U", type=int)
    p.add_argument("--penalties", choices=["uniform", "guided"], default="guided")
    p.add_argument("--lambda1", default="1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("solve", help="compute a burning sequence")
    _add_source(p)
    p.add_argument("--method", default="binary-search:cmcp",
                   help="oracle | binary-search:<cmcp|cov-csp|cov-ilp|squbo|uqubo> | row-generation | direct:<formulation>")
    p.add_argument("--backend", choices=["internal", "sa", "external"], default="internal")
    p.add_argument("--profile", choices=sorted(PROFILES), default="generic")
    p.add_argument("--command", help="external command template with {in} and {out}")
    p.add_argument("--timeout", type=float)
    p.add_argument("--g", type=int)
    p.add_argument("--U", help="horizon, or 'auto' for the greedy bound")
    p.add_argument("--penalties", choices=["uniform", "guided"], default="guided")
    p.add_argument("--literal-upper", action="store_true", help="start the search at u = n")
    p.add_argument("--node-budget", type=int, default=10**8)
    p.add_argument("--oracle-limit", type=int, default=16)
    p.add_argument("--sa-t0", type=float, default=SaParams.initial_temperature)
    p.add_argument("--sa-tfinal", type=float, default=SaParams.final_temperature)
    p.add_argument("--sa-cooling", type=float, default=SaParams.cooling)
    p.add_argument("--sa-steps", type=int, default=None)
    p.add_argument("--sa-restarts", type=int, default=SaParams.restarts)
    p.add_argument("--sa-seed", type=int, default=0)
    p.add_argument("--out", help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check a burning sequence given as vertex labels")
    _add_source(p)
    p.add_argument("--sequence", required=True, help="file of labels in order, or - for stdin")
    p.add_argument("--json", help="also write a JSON verdict here")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="success-rate table over random graphs")
    p.add_argument("--family", choices=list(benchmod.FAMILIES), default="er")
    p.add_argument("--n", default="9", help="comma-separated sizes")
    p.add_argument("--params", required=True, help="comma-separated p specs (er) or radii (geo)")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--methods", default="uqubo-uniform,uqubo-guided")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--literal-upper", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (GraphBurnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
