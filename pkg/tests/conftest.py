import re
import sys
from fractions import Fraction
from pathlib import Path

import networkx as nx
import numpy as np
import pytest
from hypothesis import strategies as st

from graphburn.graph import Graph, gen_erdos_renyi

FIXTURES = Path(__file__).parent / "fixtures"


def nx_to_graph(H) -> Graph:
    H = nx.convert_node_labels_to_integers(H)
    return Graph(H.number_of_nodes(), list(H.edges()))


def graph_to_nx(G: Graph):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges())
    return H


@st.composite
def graphs(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, k in zip(pairs, keep) if k])


def er_corpus(count, max_n=12, seed=0, multipliers=(0.5, 1, 1.5, 2, 3, 4, 5)):
    """Random ER graphs with p = c/n, c spanning sparse (disconnected) to dense."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        c = float(rng.choice(multipliers))
        out.append(gen_erdos_renyi(n, min(1.0, c / n), int(rng.integers(2**31))))
    return out


# --- independent readers for emitted files ---------------------------------


def read_lp(text):
    """Minimal LP-format reader: returns (sense, objective, rows, binaries, bounds)."""
    lines = [l for l in text.splitlines() if not l.startswith("\\")]
    section, sense = None, None
    objective, rows, binaries, bounds = {}, [], [], []
    current = []
    heads = {"Minimize": "obj", "Maximize": "obj", "Subject To": "rows", "Bounds": "bounds",
             "Binaries": "bin", "End": "end"}
    for line in lines:
        if line.strip() in heads:
            if line.strip() in ("Minimize", "Maximize"):
                sense = line.strip()
            section = heads[line.strip()]
            continue
        if section == "obj":
            body = line.split(":", 1)[1]
            for coef, name in _terms(body):
                objective[name] = objective.get(name, 0) + coef
        elif section == "rows":
            if ":" in line and not line.startswith("   "):
                current = [line]
                rows.append(current)
            else:
                current.append(line)
        elif section == "bounds":
            bounds.append(line.strip())
        elif section == "bin":
            binaries += line.split()
    parsed = []
    for parts in rows:
        text_row = " ".join(p.strip() for p in parts)
        name, body = text_row.split(":", 1)
        m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+)\s*$", body)
        lhs, rel, rhs = m.group(1), m.group(2), int(m.group(3))
        parsed.append((name.strip(), dict((n, c) for c, n in _terms(lhs)), rel, rhs))
    return sense, objective, parsed, binaries, bounds


def _terms(body):
    toks = body.split()
    out, sign, coef = [], 1, None
    for tok in toks:
        if tok in "+-":
            sign = -1 if tok == "-" else 1
        elif re.fullmatch(r"-?\d+", tok):
            coef = int(tok)
        else:
            out.append((sign * (1 if coef is None else coef), tok))
            sign, coef = 1, None
    return out


def read_qubo(text):
    """Returns (dim, offset, q dict, header counts, names)."""
    offset, names, q, header = None, {}, {}, None
    for line in text.splitlines():
        parts = line.split()
        if parts[0] == "c":
            if parts[1] == "offset":
                offset = _num(parts[2])
            elif parts[1] == "var":
                names[int(parts[2])] = parts[3]
        elif parts[0] == "p":
            header = tuple(int(x) for x in parts[3:])
        else:
            q[(int(parts[0]), int(parts[1]))] = _num(parts[2])
    return header[0], offset, q, header, names


def _num(tok):
    # emitted decimals are exact when terminating, else repr(float)
    f = Fraction(tok)
    return f if "e" in tok.lower() or len(tok) < 17 else f.limit_denominator(10**9)


FAKE_SOLVER = r'''
import sys
from pathlib import Path
args = dict(a.split("=", 1) for a in sys.argv[1:] if "=" in a)
src, dst, mode = args["in"], args["out"], args.get("mode", "copy")
if mode == "fail":
    print("license error", file=sys.stderr); sys.exit(7)
if mode == "garbage":
    Path(dst).write_text("x_1_1 banana\n"); sys.exit(0)
if mode == "nofile":
    print("model is infeasible"); sys.exit(0)
Path(dst).write_text(Path(args["sol"]).read_text())
'''


@pytest.fixture
def fake_solver(tmp_path):
    script = tmp_path / "fake_solver.py"
    script.write_text(FAKE_SOLVER)

    def template(sol_path=None, mode="copy"):
        extra = f" sol={sol_path}" if sol_path else ""
        return f"{sys.executable} {script} in={{in}} out={{out}} mode={mode}{extra}"

    return template


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(mod.RESULTS):
            terminalreporter.write_line(mod.RESULTS[k])
