"""Undirected simple graphs in compressed adjacency form, plus I/O and generators.

Vertices are dense 0-based indices. When a graph comes from a file the
original labels are kept in ``labels`` (``labels[i]`` is the external label of
internal vertex ``i``) and every user-facing report goes through them.
"""
from __future__ import annotations

import math
from collections import deque
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, EmptyGraphError, ParameterError, ParseError

INF = math.inf

# the writer stores the vertex order in this comment so isolated vertices and
# the internal numbering survive a round trip; foreign readers skip it
VERTEX_DIRECTIVE = "# vertices:"


class Graph:
    """Immutable graph with sorted CSR adjacency (``indptr``/``indices``)."""

    __slots__ = ("n", "m", "indptr", "indices", "labels", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels: Sequence | None = None):
        if n < 0:
            raise ParameterError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) out of range for n={n}")
            if u != v:
                nbrs[u].add(v)
                nbrs[v].add(u)
        adj = tuple(tuple(sorted(s)) for s in nbrs)
        degrees = np.fromiter((len(a) for a in adj), dtype=np.int64, count=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=indptr[1:])
        indices = np.fromiter((w for a in adj for w in a), dtype=np.int64, count=int(indptr[-1]))
        indptr.setflags(write=False)
        indices.setflags(write=False)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise ParameterError("labels must have one entry per vertex")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", int(indptr[-1]) // 2)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_adj", adj)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self._adj == other._adj
            and self.label_list() == other.label_list()
        )

    def __hash__(self):
        return hash((self.n, self._adj))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in internal order."""
        return [(u, w) for u, a in enumerate(self._adj) for w in a if u < w]

    def label(self, v: int):
        return self.labels[v] if self.labels is not None else v

    def label_list(self) -> list:
        return list(self.labels) if self.labels is not None else list(range(self.n))

    def index_of(self, label) -> int:
        if self.labels is None:
            if isinstance(label, int) and 0 <= label < self.n:
                return label
            raise KeyError(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None


# --- traversal -------------------------------------------------------------


def distances(G: Graph, source: int | Sequence[int], limit: int | None = None) -> list[float]:
    """BFS distances from one source or a source set; ``inf`` beyond ``limit`` or unreachable."""
    sources = [source] if isinstance(source, (int, np.integer)) else list(source)
    dist = [INF] * G.n
    queue = deque()
    for s in sources:
        if dist[s] != 0:
            dist[s] = 0
            queue.append(s)
    adj = G._adj
    while queue:
        u = queue.popleft()
        du = dist[u]
        if limit is not None and du >= limit:
            continue
        for w in adj[u]:
            if dist[w] == INF:
                dist[w] = du + 1
                queue.append(w)
    return dist


def neighborhood(G: Graph, v: int, r: int) -> frozenset[int]:
    """Closed r-th neighborhood: all vertices within distance ``r`` of ``v``."""
    if not 0 <= v < G.n:
        raise ParameterError(f"vertex {v} out of range")
    if r < 0:
        raise ParameterError("radius must be non-negative")
    seen = {v}
    frontier = [v]
    adj = G._adj
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return frozenset(seen)


def all_pairs_within(G: Graph, r: int, max_entries: int = 50_000_000) -> list[frozenset[int]]:
    """``table[v] = neighborhood(G, v, r)`` for every vertex.

    Raises CapacityError once the total table size would pass ``max_entries``;
    callers should then fall back to on-demand ``neighborhood`` queries.
    """
    table = []
    total = 0
    for v in range(G.n):
        ball = neighborhood(G, v, r)
        total += len(ball)
        if total > max_entries:
            raise CapacityError(
                f"radius-{r} neighborhood table exceeds {max_entries} entries; query on demand"
            )
        table.append(ball)
    return table


def ball_masks(G: Graph, radii: Iterable[int]) -> dict[int, list[int]]:
    """Bitmask form of every closed neighborhood: ``masks[r][v]`` has bit ``u`` set iff d(u, v) <= r."""
    radii = sorted(set(radii))
    out = {r: [0] * G.n for r in radii}
    if not radii:
        return out
    top = radii[-1]
    for v in range(G.n):
        dist = distances(G, v, limit=top)
        by_level: dict[int, int] = {}
        for u, d in enumerate(dist):
            if d != INF:
                by_level[d] = by_level.get(d, 0) | (1 << u)
        acc = 0
        level = 0
        for r in radii:
            while level <= r:
                acc |= by_level.get(level, 0)
                level += 1
            out[r][v] = acc
    return out


def connected_components(G: Graph) -> tuple[list[int], int]:
    comp = [-1] * G.n
    count = 0
    adj = G._adj
    for s in range(G.n):
        if comp[s] >= 0:
            continue
        comp[s] = count
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if comp[w] < 0:
                    comp[w] = count
                    stack.append(w)
        count += 1
    return comp, count


def is_connected(G: Graph) -> bool:
    return G.n > 0 and connected_components(G)[1] == 1


def greedy_permutation(G: Graph, start: int, k: int) -> list[int]:
    """Farthest-first ordering: each vertex maximizes its distance to those already chosen.

    Vertices unreachable from every chosen vertex count as infinitely far, so
    other components are visited first. Ties go to the lowest index. Stops
    after ``min(k, n)`` vertices.
    """
    if not 0 <= start < G.n:
        raise ParameterError(f"start vertex {start} out of range")
    if k < 1:
        raise ParameterError("permutation length must be at least 1")
    order = [start]
    chosen = {start}
    while len(order) < min(k, G.n):
        dist = distances(G, order)
        best, best_d = -1, -1.0
        for v, d in enumerate(dist):
            if v not in chosen and d > best_d:
                best, best_d = v, d
        order.append(best)
        chosen.add(best)
    return order


# --- generators ------------------------------------------------------------


def gen_path(n: int) -> Graph:
    _need(n >= 1, "path needs n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def gen_cycle(n: int) -> Graph:
    _need(n >= 1, "cycle needs n >= 1")
    if n < 3:
        return gen_path(n)
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def gen_complete(n: int) -> Graph:
    _need(n >= 1, "complete graph needs n >= 1")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def gen_star(leaves: int) -> Graph:
    """K_{1,leaves}: centre 0, leaves 1..leaves."""
    _need(leaves >= 1, "star needs at least one leaf")
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def gen_grid(rows: int, cols: int) -> Graph:
    _need(rows >= 1 and cols >= 1, "grid needs rows, cols >= 1")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def gen_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each pair ``i < j`` is an edge independently with probability ``p``."""
    _need(n >= 1, "n must be >= 1")
    _need(0.0 <= p <= 1.0, "p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def gen_geometric(n: int, r: float, seed: int) -> Graph:
    """Random geometric graph on the unit square with connection radius ``r``."""
    _need(n >= 1, "n must be >= 1")
    _need(r > 0, "radius must be positive")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    close = np.einsum("ijk,ijk->ij", diff, diff) <= r * r
    iu, ju = np.triu_indices(n, k=1)
    keep = close[iu, ju]
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def _need(cond, msg):
    if not cond:
        raise ParameterError(msg)


# --- file I/O --------------------------------------------------------------


def load_graph(path, format: str = "edge-list") -> Graph:
    """Read an edge list or a Matrix Market pattern file.

    Self-loops and duplicate edges are dropped. Edge-list labels are
    non-negative integers mapped to indices in order of first appearance.
    """
    text = Path(path).read_text()
    if format in ("edge-list", "edgelist", "edges"):
        return parse_edge_list(text)
    if format in ("matrix-market", "mtx"):
        return parse_matrix_market(text)
    raise ParameterError(f"unknown graph format {format!r}")


def parse_edge_list(text: str) -> Graph:
    index: dict[int, int] = {}
    edges = []

    def idx(label):
        if label not in index:
            index[label] = len(index)
        return index[label]

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith(VERTEX_DIRECTIVE):
            for tok in line[len(VERTEX_DIRECTIVE):].split():
                idx(_label(tok, lineno))
            continue
        if not line or line[0] in "#%":
            continue
        parts = line.split()
        # a third numeric column (edge weight) is tolerated and ignored
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'u v', got {raw!r}", lineno)
        if len(parts) == 3:
            try:
                float(parts[2])
            except ValueError:
                raise ParseError(f"bad weight column in {raw!r}", lineno) from None
        u, v = _label(parts[0], lineno), _label(parts[1], lineno)
        edges.append((idx(u), idx(v)))
    if not index:
        raise EmptyGraphError("edge list defines no vertices")
    labels = [None] * len(index)
    for lab, i in index.items():
        labels[i] = lab
    return Graph(len(index), edges, labels)


def _label(tok: str, lineno: int) -> int:
    try:
        val = int(tok)
    except ValueError:
        raise ParseError(f"vertex label {tok!r} is not an integer", lineno) from None
    if val < 0:
        raise ParseError(f"vertex label {tok!r} is negative", lineno)
    return val


def parse_matrix_market(text: str) -> Graph:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    header = lines[0].lower().split()
    if (
        len(header) != 5
        or header[0] != "%%matrixmarket"
        or header[1:4] != ["matrix", "coordinate", "pattern"]
        or header[4] not in ("symmetric", "general")
    ):
        raise ParseError(
            "only 'matrix coordinate pattern symmetric|general' headers are supported", 1
        )
    size = None
    edges = []
    for lineno, raw in enumerate(lines[1:], 2):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"non-integer entry {raw!r}", lineno) from None
        if size is None:
            if len(nums) != 3:
                raise ParseError("size line must be 'rows cols entries'", lineno)
            size = nums
            continue
        if len(nums) != 2:
            raise ParseError(f"expected 'i j', got {raw!r}", lineno)
        i, j = nums
        if not (1 <= i <= size[0] and 1 <= j <= size[1]):
            raise ParseError(f"entry ({i}, {j}) outside declared size", lineno)
        edges.append((i - 1, j - 1))
    if size is None:
        raise ParseError("missing size line", len(lines))
    n = max(size[0], size[1])
    if n == 0:
        raise EmptyGraphError("matrix declares no vertices")
    return Graph(n, edges, list(range(1, n + 1)))


def write_edge_list(G: Graph, path) -> None:
    """Canonical writer: vertex-order directive, then one ``u v`` line per edge."""
    labels = G.label_list()
    out = [f"{VERTEX_DIRECTIVE} " + " ".join(str(x) for x in labels)]
    out += [f"{labels[u]} {labels[v]}" for u, v in G.edges()]
    Path(path).write_text("\n".join(out) + "\n")
