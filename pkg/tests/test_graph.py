import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphburn.errors import CapacityError, EmptyGraphError, ParameterError, ParseError
from graphburn.graph import (
    Graph,
    all_pairs_within,
    ball_masks,
    connected_components,
    distances,
    gen_complete,
    gen_cycle,
    gen_erdos_renyi,
    gen_geometric,
    gen_grid,
    gen_path,
    gen_star,
    greedy_permutation,
    is_connected,
    load_graph,
    neighborhood,
    parse_edge_list,
    parse_matrix_market,
    write_edge_list,
)

from conftest import graph_to_nx, graphs


def test_csr_is_sorted_and_symmetric():
    G = Graph(4, [(2, 0), (0, 1), (1, 0), (3, 3), (0, 2)])
    assert G.m == 2
    assert G.neighbors(0) == (1, 2)
    assert list(G.indptr) == [0, 2, 3, 4, 4]
    assert G.degree(3) == 0


def test_graph_is_immutable():
    G = gen_path(3)
    with pytest.raises(AttributeError):
        G.n = 5
    with pytest.raises(ValueError):
        G.indices[0] = 2


def test_edge_out_of_range():
    with pytest.raises(ParameterError):
        Graph(2, [(0, 2)])


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=12))
def test_distances_match_networkx(G):
    H = graph_to_nx(G)
    for s in range(G.n):
        ref = nx.single_source_shortest_path_length(H, s)
        got = distances(G, s)
        assert got == [ref.get(v, math.inf) for v in range(G.n)]


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=10), st.integers(0, 4))
def test_neighborhood_matches_ego_graph(G, r):
    H = graph_to_nx(G)
    masks = ball_masks(G, [r])
    for v in range(G.n):
        ref = frozenset(nx.ego_graph(H, v, radius=r).nodes())
        assert neighborhood(G, v, r) == ref
        assert masks[r][v] == sum(1 << u for u in ref)


def test_neighborhood_radius_zero_and_errors():
    G = gen_path(5)
    assert neighborhood(G, 2, 0) == {2}
    assert neighborhood(G, 2, 1) == {1, 2, 3}
    with pytest.raises(ParameterError):
        neighborhood(G, 5, 1)
    with pytest.raises(ParameterError):
        neighborhood(G, 0, -1)


def test_all_pairs_capacity():
    G = gen_complete(20)
    assert len(all_pairs_within(G, 1)[0]) == 20
    with pytest.raises(CapacityError):
        all_pairs_within(G, 1, max_entries=100)


def test_components():
    G = Graph(5, [(0, 1), (3, 4)])
    comp, k = connected_components(G)
    assert k == 3 and comp[0] == comp[1] and comp[3] == comp[4] != comp[2]
    assert not is_connected(G) and is_connected(gen_cycle(5))


def test_greedy_permutation_path():
    # from one end of P9: far end first, then the midpoint
    assert greedy_permutation(gen_path(9), 0, 3) == [0, 8, 4]


def test_greedy_permutation_prefers_other_components():
    G = Graph(4, [(0, 1), (2, 3)])
    assert greedy_permutation(G, 0, 4)[1] == 2


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=10), st.data())
def test_greedy_permutation_is_farthest_first(G, data):
    start = data.draw(st.integers(0, G.n - 1))
    order = greedy_permutation(G, start, G.n + 3)
    assert sorted(order) == list(range(G.n)) and order[0] == start
    for k in range(1, len(order)):
        d = distances(G, order[:k])
        assert d[order[k]] == max(d[v] for v in range(G.n) if v not in order[:k])


def test_generators():
    assert gen_path(1).m == 0
    assert gen_cycle(5).m == 5 and gen_cycle(2).m == 1
    assert gen_complete(6).m == 15
    S = gen_star(4)
    assert S.n == 5 and S.degree(0) == 4
    assert gen_grid(50, 50).m == 4900
    assert gen_erdos_renyi(9, 0.4, 3) == gen_erdos_renyi(9, 0.4, 3)
    assert gen_erdos_renyi(9, 1.0, 0).m == 36 and gen_erdos_renyi(9, 0.0, 0).m == 0
    assert gen_geometric(15, 2.0, 1).m == 105
    assert gen_geometric(15, 0.3, 5) == gen_geometric(15, 0.3, 5)
    with pytest.raises(ParameterError):
        gen_erdos_renyi(5, 1.5, 0)


def test_edge_list_parsing():
    G = parse_edge_list("# comment\n% other\n10 20\n20 30 1.5\n\n30 30\n")
    assert G.n == 3 and G.m == 2
    assert G.label_list() == [10, 20, 30]
    assert G.index_of(30) == 2


@pytest.mark.parametrize(
    "text,line",
    [("1 2\n3\n", 2), ("1 x\n", 1), ("1 -2\n", 1), ("1 2 w\n", 1)],
)
def test_edge_list_errors_carry_line(text, line):
    with pytest.raises(ParseError, match=f"line {line}"):
        parse_edge_list(text)


def test_empty_edge_list():
    with pytest.raises(EmptyGraphError):
        parse_edge_list("# nothing\n")


def test_matrix_market():
    text = "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n4 4 3\n2 1\n3 2\n4 3\n"
    G = parse_matrix_market(text)
    assert G.n == 4 and G.m == 3 and G.label(0) == 1
    with pytest.raises(ParseError):
        parse_matrix_market("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1.0\n")
    with pytest.raises(ParseError, match="line 3"):
        parse_matrix_market("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 5\n")


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=10))
def test_edge_list_round_trip(tmp_path_factory, G):
    path = tmp_path_factory.mktemp("rt") / "g.txt"
    write_edge_list(G, path)
    assert load_graph(path) == G


def test_round_trip_keeps_isolated_vertices(tmp_path):
    G = Graph(5, [(3, 1)], labels=[7, 8, 9, 10, 11])
    write_edge_list(G, tmp_path / "g")
    H = load_graph(tmp_path / "g")
    assert H == G and H.label_list() == [7, 8, 9, 10, 11]
