import pytest

from graphburn.bench import (
    BenchConfig,
    instance_seed,
    make_graph,
    parse_er_p,
    run_bench,
    run_instance,
    summarize,
    table_tsv,
)
from graphburn.errors import ParameterError


def test_parse_er_p():
    assert parse_er_p("5/n", 10) == 0.5
    assert parse_er_p("1/2n", 10) == 0.05
    assert parse_er_p("3/2n", 3) == 0.5
    assert parse_er_p("0.25", 7) == 0.25
    for bad in ("x", "1.5", "-0.1"):
        with pytest.raises(ParameterError):
            parse_er_p(bad, 5)


def test_config_validation():
    with pytest.raises(ParameterError):
        BenchConfig("ba", (9,), ("5/n",))
    with pytest.raises(ParameterError):
        BenchConfig("er", (9,), ("5/n",), methods=("nope",))
    with pytest.raises(ParameterError):
        BenchConfig("er", (40,), ("5/n",))


def test_seeds_are_split_per_instance():
    seeds = {instance_seed(0, c, r) for c in range(3) for r in range(50)}
    assert len(seeds) == 150
    assert instance_seed(7, 1, 2) == instance_seed(7, 1, 2) != instance_seed(8, 1, 2)


def test_single_instance_replays():
    cfg = BenchConfig("er", (7, 8), ("1/2n", "5/n"), replications=4, methods=("cmcp", "uqubo-guided"))
    full = run_bench(cfg)
    again = run_instance(cfg, 3, 2)
    assert full[3 * 4 + 2] == again
    assert make_graph(cfg, 8, "5/n", again.seed).m == again.m


def test_exact_methods_always_succeed():
    cfg = BenchConfig("er", (8,), ("1/2n", "3/n"), replications=10, methods=("cmcp", "cov-csp", "cov-ilp", "squbo"))
    summary = summarize(cfg, run_bench(cfg))
    assert all(rate == 100.0 for s in summary for rate in s.rates.values())
    assert summary[0].mean_components > summary[1].mean_components
    text = table_tsv(cfg, summary)
    assert text.splitlines()[1] == "p\tn\tcmcp\tcov-csp\tcov-ilp\tsqubo\t<c>"


def test_geometric_family():
    cfg = BenchConfig("geo", (8,), ("0.3",), replications=3, methods=("cmcp",))
    assert [r.success["cmcp"] for r in run_bench(cfg)] == [True] * 3


def test_parallel_matches_serial():
    cfg = BenchConfig("er", (7,), ("2/n",), replications=6, methods=("uqubo-guided",))
    par = BenchConfig("er", (7,), ("2/n",), replications=6, methods=("uqubo-guided",), workers=2)
    assert run_bench(cfg) == run_bench(par)
