import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphburn.burning import brute_force_burning_number, validate
from graphburn.errors import DecodeError, ParameterError
from graphburn.formulations import (
    COV_CSP,
    COV_ILP,
    GBP_ILP,
    PROP_MILP,
    Assignment,
    NoBurningSequence,
    build_cov_csp,
    build_cov_ilp,
    build_gbp_ilp,
    build_prop_milp,
    decode,
    encode,
    expected_counts,
)
from graphburn.graph import Graph, gen_path
from graphburn.lpfile import lp_text, write_lp

from conftest import FIXTURES, graphs, read_lp

BUILDERS = {
    PROP_MILP: build_prop_milp,
    COV_CSP: build_cov_csp,
    COV_ILP: build_cov_ilp,
    GBP_ILP: build_gbp_ilp,
}


def v(*labels):
    return tuple(x - 1 for x in labels)


@pytest.mark.parametrize(
    "kind,width,counts",
    [(PROP_MILP, 5, (91, 59)), (COV_CSP, 3, (27, 12)), (COV_ILP, 3, (27, 11)), (GBP_ILP, 5, (45, 18))],
)
def test_p9_counts(kind, width, counts):
    m = BUILDERS[kind](gen_path(9), width)
    assert (m.num_vars, m.num_constraints) == counts == expected_counts(kind, 9, width)


def test_prop_milp_z_is_the_only_continuous():
    m = build_prop_milp(gen_path(5), 5)
    assert len(m.binaries) == 2 * 5 * 5
    (z,) = [x for x in m.variables if x.kind != "binary"]
    assert z.name == "z" and z.lb == 0 and z.ub is None


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=9), st.integers(1, 4), st.sampled_from(sorted(BUILDERS)))
def test_counts_formulas(G, w, kind):
    m = BUILDERS[kind](G, w)
    assert (m.num_vars, m.num_constraints) == expected_counts(kind, G.n, w)


def test_bad_width():
    with pytest.raises(ParameterError):
        build_cov_csp(gen_path(3), 0)


def test_cov_csp_feasibility_on_p5():
    P5 = gen_path(5)
    m = build_cov_csp(P5, 3)
    a = encode(m, v(1, 5, 3))
    assert m.violated(a.values) == []
    # no length-2 sequence burns P5: every encoding violates some row
    m2 = build_cov_csp(P5, 2)
    for seq in itertools.product(range(5), repeat=2):
        assert m2.violated(encode(m2, seq).values)


def test_prop_milp_p5_example():
    P5 = gen_path(5)
    m = build_prop_milp(P5, 5)
    a = encode(m, v(3, 2, 3))
    assert m.violated(a.values) == [] and m.objective_value(a.values) == 2
    assert decode(m, a) == v(3, 2, 3)


def test_gbp_ilp_p9_example():
    m = build_gbp_ilp(gen_path(9), 5)
    a = encode(m, v(3, 7, 9))
    assert m.violated(a.values) == [] and m.objective_value(a.values) == 3
    assert decode(m, a) == v(3, 7, 9)


def test_gbp_ilp_gap_is_not_a_prefix():
    m = build_gbp_ilp(gen_path(3), 3)
    values = {k: Fraction(0) for k in range(m.num_vars)}
    values[m.var_map["x"][(2, 2)]] = Fraction(1)
    with pytest.raises(DecodeError):
        decode(m, Assignment(values, Fraction(1)))


def test_cov_ilp_p9_objective():
    m = build_cov_ilp(gen_path(9), 3)
    a = encode(m, v(3, 7, 9))
    assert m.violated(a.values) == []
    # radii 2 and 1 reach 8 of the 9 vertices; the last position covers the rest
    assert m.objective_value(a.values) == 8
    assert decode(m, a) == v(3, 7, 9)


def test_cov_ilp_undershoot_is_reported():
    m = build_cov_ilp(gen_path(9), 2)
    values = {k: Fraction(0) for k in range(m.num_vars)}
    values[m.var_map["x"][(5, 2)]] = Fraction(1)
    for i in (4, 5, 6):
        values[m.var_map["x"][(i, 1)]] = Fraction(1)
    a = Assignment(values, m.objective_value(values))
    assert m.violated(values) == []
    with pytest.raises(NoBurningSequence):
        decode(m, a)


def test_infeasible_assignment_does_not_decode():
    m = build_cov_csp(gen_path(5), 2)
    with pytest.raises(NoBurningSequence):
        decode(m, Assignment({}, None, "infeasible"))


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=8))
def test_encode_decode_round_trip(G):
    b, seq = brute_force_burning_number(G)
    for kind in (COV_CSP, COV_ILP):
        m = BUILDERS[kind](G, b)
        a = encode(m, seq)
        assert m.violated(a.values) == []
        out = decode(m, a)
        assert validate(G, out) and len(out) == b
    for kind in (GBP_ILP, PROP_MILP):
        m = BUILDERS[kind](G, b + 1)
        a = encode(m, seq)
        assert m.violated(a.values) == []
        assert len(decode(m, a)) <= b + 1
    assert build_gbp_ilp(G, b + 1).objective_value(encode(build_gbp_ilp(G, b + 1), seq).values) == b


def test_lazy_rows():
    G = gen_path(9)
    m = build_gbp_ilp(G, 4, rows=[0, 8])
    assert m.num_constraints == 2 * 4 - 1 + 2 and m.covered_rows == {0, 8}
    m2 = m.with_coverage_rows([8, 4, 4])
    assert m2.num_constraints == m.num_constraints + 1 and m2.covered_rows == {0, 4, 8}
    with pytest.raises(ParameterError):
        build_prop_milp(G, 3).with_coverage_rows([1])


# --- LP files --------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=6), st.integers(1, 3), st.sampled_from(sorted(BUILDERS)))
def test_lp_text_round_trip(G, w, kind):
    m = BUILDERS[kind](G, w)
    sense, obj, rows, binaries, bounds = read_lp(lp_text(m))
    names = [x.name for x in m.variables]
    assert sense == {"min": "Minimize", "max": "Maximize", "none": "Minimize"}[m.sense]
    want_obj = {names[k]: c for k, c in m.objective}
    assert {k: c for k, c in obj.items() if c} == want_obj
    assert len(rows) == m.num_constraints
    for (name, coeffs, rel, rhs), con in zip(rows, m.constraints):
        assert name == con.name and rel == con.rel and rhs == con.rhs
        assert coeffs == {names[k]: c for k, c in con.coeffs}
    assert binaries == [names[k] for k in m.binaries]
    assert bounds == (["z >= 0"] if kind == PROP_MILP else [])


def test_long_rows_are_wrapped():
    m = build_cov_csp(Graph(60), 2)
    text = lp_text(m)
    assert max(len(l) for l in text.splitlines()) <= 210
    assert len(read_lp(text)[2]) == m.num_constraints


def test_golden_lp(tmp_path):
    m = build_cov_csp(gen_path(4), 2)
    write_lp(m, tmp_path / "a.lp")
    write_lp(build_cov_csp(gen_path(4), 2), tmp_path / "b.lp")
    a = (tmp_path / "a.lp").read_bytes()
    assert a == (tmp_path / "b.lp").read_bytes()
    assert a == (FIXTURES / "cov_csp_p4_g2.lp").read_bytes()
