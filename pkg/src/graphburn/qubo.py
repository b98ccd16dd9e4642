"""Slack-variable and unbalanced-penalty QUBO encodings of the covering program.

Coefficients are exact ``Fraction`` values. ``q`` is upper-triangular and
its diagonal holds the linear terms (x_i^2 = x_i); the constant part of the
expanded objective lives in ``offset`` so that ``energy`` returns the value
of the original penalty expression.

Variable layout: ``x(i, j)`` at ``(j - 1) * n + (i - 1)`` (column blocks),
then, for the slack model, ``s(i, l)`` at ``g * n + (i - 1) * L + (l - 1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .burning import BurningSequence, FireSourceCounts, fire_sources, validate
from .errors import ParameterError
from .graph import Graph, distances

SQUBO = "squbo"
UQUBO = "uqubo"


@dataclass(frozen=True)
class PenaltyConfig:
    P: Fraction
    lambda1: Fraction
    lambda2: tuple[Fraction, ...]
    mode: str  # "uniform" or "guided"


@dataclass(frozen=True)
class QuboModel:
    kind: str
    n: int
    g: int
    dim: int
    q: dict[tuple[int, int], Fraction]
    offset: Fraction
    names: tuple[str, ...]
    penalties: PenaltyConfig | None = None
    graph: Graph | None = field(default=None, compare=False, repr=False)

    def x_index(self, i: int, j: int) -> int:
        """Flat index of x(i, j), both 1-based."""
        return (j - 1) * self.n + (i - 1)


def slack_bits(g: int) -> int:
    return math.ceil(math.log2(g)) if g > 1 else 0


class _Builder:
    def __init__(self, dim):
        self.q: dict[tuple[int, int], Fraction] = {}
        self.offset = Fraction(0)
        self.dim = dim

    def add(self, a, b, c):
        if c == 0:
            return
        key = (a, b) if a <= b else (b, a)
        val = self.q.get(key, 0) + c
        if val:
            self.q[key] = val
        else:
            self.q.pop(key, None)

    def square(self, terms, const, weight):
        """weight * (const + sum c_k y_k)^2 with y^2 = y."""
        weight = Fraction(weight)
        self.offset += weight * const * const
        for k, (a, ca) in enumerate(terms):
            self.add(a, a, weight * (2 * const * ca + ca * ca))
            for b, cb in terms[k + 1:]:
                self.add(a, b, weight * 2 * ca * cb)

    def linear(self, terms, const, weight):
        weight = Fraction(weight)
        self.offset += weight * const
        for a, c in terms:
            self.add(a, a, weight * c)


def _coverage_vars(G: Graph, g: int) -> list[list[int]]:
    """For each vertex v, the flat ids x(k, j) with d(k, v) <= j - 1."""
    n = G.n
    out = []
    for v in range(n):
        dist = distances(G, v, limit=g - 1)
        ids = []
        for j in range(1, g + 1):
            ids += [(j - 1) * n + k for k, d in enumerate(dist) if d <= j - 1]
        out.append(sorted(ids))
    return out


def _x_names(n, g):
    return [f"x_{i}_{j}" for j in range(1, g + 1) for i in range(1, n + 1)]


def _column_blocks(b: _Builder, n: int, g: int, weight):
    for j in range(g):
        b.square([(j * n + i, 1) for i in range(n)], -1, weight)


def build_squbo(G: Graph, g: int) -> QuboModel:
    """One-hot column penalties plus squared coverage equalities with binary slack."""
    if g < 1:
        raise ParameterError("g must be >= 1")
    n = G.n
    L = slack_bits(g)
    dim = g * n + n * L
    b = _Builder(dim)
    _column_blocks(b, n, g, 1)
    for v, cov in enumerate(_coverage_vars(G, g)):
        terms = [(x, -1) for x in cov]
        terms += [(g * n + v * L + l, 2 ** l) for l in range(L)]
        b.square(terms, 1, 1)
    names = _x_names(n, g) + [f"s_{i}_{l}" for i in range(1, n + 1) for l in range(1, L + 1)]
    return QuboModel(SQUBO, n, g, dim, b.q, b.offset, tuple(names), None, G)


def default_penalties(
    G: Graph, g: int, guide: FireSourceCounts | None = None, lambda1=1
) -> PenaltyConfig:
    """Penalty triple for the unbalanced model.

    Uniform mode (no guide): lambda2_i = lambda1 / (g - 1), the value that
    makes g fire sources cost exactly zero. Guided mode: lambda2_i =
    lambda1 / (l_i - 1) from a feasible sequence's fire-source counts, or
    lambda1 when l_i = 1. P exceeds n * lambda1^2 / (4 min lambda2) by one.
    """
    lam1 = Fraction(lambda1)
    if guide is None:
        if g < 2:
            raise ParameterError("uniform penalties need g >= 2 (lambda1 / (g - 1))")
        lam2 = (lam1 / (g - 1),) * G.n
        mode = "uniform"
    else:
        if not guide.valid:
            raise ParameterError("guide sequence does not burn the graph")
        lam2 = tuple(lam1 / (l - 1) if l >= 2 else lam1 for l in guide.counts)
        mode = "guided"
    P = G.n * lam1 * lam1 / (4 * min(lam2)) + 1 if G.n else Fraction(1)
    return PenaltyConfig(Fraction(P), lam1, lam2, mode)


def guided_penalties(G: Graph, g: int, guide_sequence: Sequence[int], lambda1=1) -> PenaltyConfig:
    return default_penalties(G, g, fire_sources(G, guide_sequence), lambda1)


def build_uqubo(G: Graph, g: int, pc: PenaltyConfig) -> QuboModel:
    """P * one-hot blocks + lambda1 * h_i + lambda2_i * h_i^2, h_i = 1 - coverage_i."""
    if g < 1:
        raise ParameterError("g must be >= 1")
    if len(pc.lambda2) != G.n or min(pc.lambda2, default=1) <= 0:
        raise ParameterError("lambda2 needs one positive entry per vertex")
    n = G.n
    b = _Builder(g * n)
    _column_blocks(b, n, g, pc.P)
    for v, cov in enumerate(_coverage_vars(G, g)):
        terms = [(x, -1) for x in cov]
        b.linear(terms, 1, pc.lambda1)
        b.square(terms, 1, pc.lambda2[v])
    return QuboModel(UQUBO, n, g, g * n, b.q, b.offset, tuple(_x_names(n, g)), pc, G)


def unbalanced_term(h, lambda1, lambda2) -> Fraction:
    """f(h) = lambda1 h + lambda2 h^2."""
    return Fraction(lambda1) * h + Fraction(lambda2) * h * h


def energy(m: QuboModel, a: Sequence[int]) -> Fraction:
    if len(a) != m.dim:
        raise ParameterError(f"assignment has {len(a)} bits, model has {m.dim}")
    total = m.offset
    for (i, j), c in m.q.items():
        if a[i] and a[j]:
            total += c
    return total


def scaled_form(m: QuboModel) -> tuple[int, np.ndarray, int]:
    """Integer matrix ``Q * scale`` (upper-triangular) and ``offset * scale``."""
    scale = 1
    for c in list(m.q.values()) + [m.offset]:
        scale = math.lcm(scale, c.denominator)
    Q = np.zeros((m.dim, m.dim), dtype=np.int64)
    for (i, j), c in m.q.items():
        Q[i, j] = int(c * scale)
    return scale, Q, int(m.offset * scale)


def encode_sequence(m: QuboModel, seq: BurningSequence) -> list[int]:
    """Bits for ``seq`` (length g); slack bits of the slack model hold l_i - 1 when representable."""
    if len(seq) != m.g:
        raise ParameterError("sequence length must equal g")
    bits = [0] * m.dim
    for p, u in enumerate(seq, 1):
        bits[m.x_index(u + 1, m.g - p + 1)] = 1
    if m.kind == SQUBO:
        L = slack_bits(m.g)
        counts = fire_sources(m.graph, seq).counts
        for v, l in enumerate(counts):
            extra = l - 1
            if 0 <= extra < 2 ** L:
                for k in range(L):
                    bits[m.g * m.n + v * L + k] = (extra >> k) & 1
    return bits


def decode_qubo(m: QuboModel, a: Sequence[int]) -> tuple[BurningSequence | None, dict]:
    """Sequence encoded by the x bits; slack bits are ignored."""
    if len(a) != m.dim:
        raise ParameterError(f"assignment has {len(a)} bits, model has {m.dim}")
    report: dict = {"column_counts": [], "valid": False}
    picks = []
    for j in range(1, m.g + 1):
        chosen = [i - 1 for i in range(1, m.n + 1) if a[m.x_index(i, j)]]
        report["column_counts"].append(len(chosen))
        picks.append(chosen)
    bad = [j for j, c in enumerate(report["column_counts"], 1) if c != 1]
    if bad:
        report["violation"] = f"column multiplicity != 1 in columns {bad}"
        return None, report
    seq = tuple(picks[m.g - p][0] for p in range(1, m.g + 1))
    if m.graph is not None:
        report["valid"] = validate(m.graph, seq)
        if not report["valid"]:
            report["violation"] = "sequence leaves vertices unburned"
    return seq, report


# --- file format -----------------------------------------------------------


def _render(c: Fraction) -> str:
    den = c.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den != 1:
        return repr(float(c))
    if c.denominator == 1:
        return str(c.numerator)
    # terminating decimal, written exactly
    digits = 0
    d = c.denominator
    while d != 1:
        d //= math.gcd(d, 10)
        digits += 1
    text = f"{abs(c.numerator) * 10 ** digits // c.denominator:0{digits + 1}d}"
    text = text[:-digits] + "." + text[-digits:]
    return ("-" if c < 0 else "") + text.rstrip("0")


def qubo_text(m: QuboModel) -> str:
    diag = sorted((k, c) for k, c in m.q.items() if k[0] == k[1])
    off = sorted((k, c) for k, c in m.q.items() if k[0] != k[1])
    lines = [
        f"c {m.kind} n={m.n} g={m.g} dim={m.dim}",
        f"c offset {_render(m.offset)}",
    ]
    if m.penalties is not None:
        lines.append(f"c penalties mode={m.penalties.mode} P={_render(m.penalties.P)} lambda1={_render(m.penalties.lambda1)}")
    lines += [f"c var {k} {name}" for k, name in enumerate(m.names)]
    lines.append(f"p qubo 0 {m.dim} {len(diag)} {len(off)}")
    lines += [f"{i} {j} {_render(c)}" for (i, j), c in diag]
    lines += [f"{i} {j} {_render(c)}" for (i, j), c in off]
    return "\n".join(lines) + "\n"


def write_qubo_file(m: QuboModel, path) -> None:
    Path(path).write_text(qubo_text(m))
