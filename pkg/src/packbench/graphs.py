"""Undirected host graphs, seeded G(n,p) sampling, and edge-list I/O.

Vertices are integers 0..n-1.  Edges are unordered pairs stored as (u, v)
with u < v.  Graph instances are immutable by convention: every operation
that changes structure returns a new Graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .seeds import check_seed

# draws per chunk when sampling pair indicators; bounds peak memory while
# keeping the uniform stream identical to one big draw
_GNP_CHUNK = 1 << 22


class GraphFormatError(ValueError):
    """Malformed edge-list text: bad counts, self-loop, duplicate, range."""


def vertex_tuple(n: int, members: Iterable[int]) -> tuple[int, ...]:
    """Normalize an iterable of vertex ids to a sorted duplicate-free tuple.

    Raises ValueError on out-of-range ids or duplicates.  This is the
    canonical vertex-set representation used across the package.
    """
    out = tuple(sorted(members))
    for v in out:
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
            raise ValueError(f"vertex id {v!r} is not an integer")
        if not 0 <= v < n:
            raise ValueError(f"vertex id {v} out of range for n={n}")
    for a, b in zip(out, out[1:]):
        if a == b:
            raise ValueError(f"duplicate vertex id {a}")
    return tuple(int(v) for v in out)


class Graph:
    """Simple undirected graph with set and sorted-list adjacency views."""

    __slots__ = ("n", "edge_count", "adj", "adj_sorted", "_csr")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be >= 0, got {n}")
        self.n = n
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if v in adj[u]:
                raise ValueError(f"duplicate edge ({u},{v})")
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        self.adj = adj
        self.adj_sorted = [sorted(s) for s in adj]
        self.edge_count = m
        self._csr = None

    @classmethod
    def _from_arrays(cls, n: int, us: np.ndarray, vs: np.ndarray) -> "Graph":
        """Build from validated edge endpoint arrays (u < v, no dupes)."""
        g = cls.__new__(cls)
        g.n = n
        g.edge_count = int(us.shape[0])
        heads = np.concatenate([us, vs])
        tails = np.concatenate([vs, us])
        order = np.lexsort((tails, heads))
        heads = heads[order]
        tails = tails[order]
        counts = np.bincount(heads, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        tail_list = tails.tolist()
        g.adj_sorted = [
            tail_list[indptr[i]:indptr[i + 1]] for i in range(n)
        ]
        g.adj = [set(lst) for lst in g.adj_sorted]
        g._csr = (indptr, tails.astype(np.int64))
        return g

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield edges as (u, v) with u < v, in lexicographic order."""
        for u in range(self.n):
            for v in self.adj_sorted[u]:
                if v > u:
                    yield (u, v)

    def edge_list(self) -> list[tuple[int, int]]:
        return list(self.edges())

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in CSR form (indptr, flat neighbor array), cached."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            degs = np.fromiter(
                (len(s) for s in self.adj_sorted), dtype=np.int64, count=self.n
            )
            np.cumsum(degs, out=indptr[1:])
            flat = np.fromiter(
                (v for lst in self.adj_sorted for v in lst),
                dtype=np.int64,
                count=int(indptr[-1]),
            )
            self._csr = (indptr, flat)
        return self._csr

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    __hash__ = None  # mutable container inside; compare by value only

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def complete_graph(t: int) -> Graph:
    return Graph(t, [(i, j) for i in range(t) for j in range(i + 1, t)])


def cycle_graph(t: int) -> Graph:
    if t < 3:
        raise ValueError(f"cycle needs at least 3 vertices, got {t}")
    return Graph(t, [(i, (i + 1) % t) for i in range(t)])


@dataclass(frozen=True)
class GnpConfig:
    """Parameters for one G(n,p) draw."""

    n: int
    p: float
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0,1], got {self.p}")
        check_seed(self.seed)


def gnp_generate(cfg: GnpConfig) -> Graph:
    """Sample G(n,p) with one uniform per vertex pair.

    Pairs are visited in lexicographic order (0,1), (0,2), ..., (n-2,n-1)
    and pair (u,v) becomes an edge iff its uniform is < p.  The uniform
    stream comes from PCG64 seeded with cfg.seed, consumed in chunks, so
    the draw is reproducible bit-for-bit for a given (n, p, seed).
    """
    n = cfg.n
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    total = n * (n - 1) // 2
    hits = []
    done = 0
    while done < total:
        take = min(_GNP_CHUNK, total - done)
        u = rng.random(take)
        idx = np.flatnonzero(u < cfg.p)
        if idx.size:
            hits.append(idx + done)
        done += take
    if hits:
        ks = np.concatenate(hits)
    else:
        ks = np.empty(0, dtype=np.int64)
    # invert flat pair index k -> (i, j): row i starts at offset
    # i*n - i*(i+1)/2 and holds pairs (i, i+1..n-1)
    rows = np.arange(n, dtype=np.int64)
    offsets = rows * n - rows * (rows + 1) // 2
    us = np.searchsorted(offsets, ks, side="right") - 1
    vs = ks - offsets[us] + us + 1
    return Graph._from_arrays(n, us, vs)


def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise ValueError("min_degree of an empty-vertex graph is undefined")
    return min(len(s) for s in g.adj)


def degree_into(g: Graph, v: int, s: Iterable[int]) -> int:
    """Number of neighbors of v inside the vertex set s."""
    members = vertex_tuple(g.n, s)
    if not 0 <= v < g.n:
        raise ValueError(f"vertex id {v} out of range for n={g.n}")
    nbrs = g.adj[v]
    if len(members) < len(nbrs):
        return sum(1 for w in members if w in nbrs)
    return sum(1 for w in nbrs if w in set(members))


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph on s plus the new-id -> old-id mapping.

    New ids follow the sorted order of s, so the mapping tuple is sorted.
    """
    members = vertex_tuple(g.n, s)
    pos = {old: new for new, old in enumerate(members)}
    sub = Graph.__new__(Graph)
    sub.n = len(members)
    adj_sorted: list[list[int]] = []
    m2 = 0
    for old in members:
        row = [pos[w] for w in g.adj_sorted[old] if w in pos]
        row.sort()
        adj_sorted.append(row)
        m2 += len(row)
    sub.adj_sorted = adj_sorted
    sub.adj = [set(r) for r in adj_sorted]
    sub.edge_count = m2 // 2
    sub._csr = None
    return sub, members


def delete_edges(g: Graph, removals: Iterable[tuple[int, int]]) -> Graph:
    """Copy of g with the given edges removed.

    Pairs are normalized to (min, max) and deduplicated; every pair must
    be an existing edge.
    """
    gone: set[tuple[int, int]] = set()
    for u, v in removals:
        u, v = int(u), int(v)
        if u > v:
            u, v = v, u
        if u == v or not (0 <= u < g.n and 0 <= v < g.n) or v not in g.adj[u]:
            raise ValueError(f"({u},{v}) is not an edge of the graph")
        gone.add((u, v))
    out = Graph.__new__(Graph)
    out.n = g.n
    out.edge_count = g.edge_count - len(gone)
    adj_sorted: list[list[int]] = []
    for u in range(g.n):
        row = [
            w
            for w in g.adj_sorted[u]
            if ((u, w) if u < w else (w, u)) not in gone
        ]
        adj_sorted.append(row)
    out.adj_sorted = adj_sorted
    out.adj = [set(r) for r in adj_sorted]
    out._csr = None
    return out


def read_edge_list(text: str) -> Graph:
    """Parse the plain edge-list format.

    First non-blank line: "n m".  Then exactly m lines "u v" with
    0 <= u < v < n.  Blank lines and lines starting with '#' are skipped.
    Duplicate edges, self-loops, reversed order, and count mismatches are
    rejected with GraphFormatError.
    """
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise GraphFormatError("empty edge-list input")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphFormatError(f"non-integer header {lines[0]!r}") from exc
    if n < 0 or m < 0:
        raise GraphFormatError(f"negative counts in header {lines[0]!r}")
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"expected {m} edge lines, found {len(body)}")
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"edge line must be 'u v', got {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphFormatError(f"non-integer edge line {ln!r}") from exc
        if u == v:
            raise GraphFormatError(f"self-loop {u}")
        if not u < v:
            raise GraphFormatError(f"edge ({u},{v}) must be written u < v")
        if v >= n:
            raise GraphFormatError(f"edge ({u},{v}) out of range for n={n}")
        edges.append((u, v))
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def read_edge_list_file(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return read_edge_list(fh.read())


def write_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def write_edge_list_file(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_edge_list(g))
