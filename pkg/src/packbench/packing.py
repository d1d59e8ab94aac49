"""Vertex-disjoint pattern packings: greedy oracle and local search.

The greedy packer is the workhorse oracle: scan vertices in a seeded
random order and embed a copy through each still-uncovered vertex if one
exists among uncovered vertices.  One pass per sweep is enough for
maximality, because the uncovered set only shrinks: a vertex that failed
once can never succeed later.  Multiple sweeps are independent restarts;
the best sweep wins on (leftover size, sweep index).

Local search then tries to shrink the leftover with remove-one re-embed-two
moves: free one packed copy, and look for two disjoint copies inside the
freed vertices plus the current leftover.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .copies import Copy, PatternIndex, embed_through, enumerate_in_pool
from .graphs import Graph
from .patterns import Pattern
from .seeds import check_seed, stable_seed


@dataclass(frozen=True)
class OracleConfig:
    """Work budget and seed for the packing oracle."""

    seed: int
    sweeps: int = 1
    swap_budget: int = 0

    def __post_init__(self):
        check_seed(self.seed)
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        if self.swap_budget < 0:
            raise ValueError(f"swap_budget must be >= 0, got {self.swap_budget}")


@dataclass(frozen=True)
class Verdict:
    """Outcome of an independent structural check."""

    ok: bool
    reason: str = ""


@dataclass(frozen=True)
class Packing:
    """A vertex-disjoint family of pattern copies in a host on host_n vertices.

    copies are sorted by edge image; leftover is the sorted tuple of
    uncovered vertices.
    """

    host_n: int
    copies: tuple[Copy, ...]
    leftover: tuple[int, ...]


def _finish_packing(host_n: int, copies: list[Copy], uncovered) -> Packing:
    return Packing(
        host_n=host_n,
        copies=tuple(sorted(copies, key=lambda c: c.edges)),
        leftover=tuple(sorted(uncovered)),
    )


def leftover_count(packing: Packing) -> int:
    return len(packing.leftover)


def greedy_pack(g: Graph, h: Pattern, cfg: OracleConfig) -> Packing:
    """Best-of-sweeps randomized greedy packing of h into g."""
    index = PatternIndex(h)
    best: Optional[tuple[int, int, list[Copy], set[int]]] = None
    for s in range(cfg.sweeps):
        rng = np.random.Generator(np.random.PCG64(stable_seed(cfg.seed, "sweep", s)))
        order = rng.permutation(g.n)
        uncovered = set(range(g.n))
        copies: list[Copy] = []
        for v in order:
            v = int(v)
            if v not in uncovered:
                continue
            c = embed_through(g, index, v, allowed_set=uncovered)
            if c is not None:
                copies.append(c)
                uncovered.difference_update(c.vertices)
        key = (len(uncovered), s)
        if best is None or key < (best[0], best[1]):
            best = (len(uncovered), s, copies, uncovered)
    assert best is not None
    return _finish_packing(g.n, best[2], best[3])


def _first_disjoint_pair(pool_copies: list[Copy]) -> Optional[tuple[Copy, Copy]]:
    for i, c1 in enumerate(pool_copies):
        v1 = set(c1.vertices)
        for c2 in pool_copies[i + 1:]:
            if v1.isdisjoint(c2.vertices):
                return c1, c2
    return None


def local_search_improve(g: Graph, h: Pattern, pk: Packing, cfg: OracleConfig) -> Packing:
    """Shrink the leftover with remove-one re-embed-two moves.

    Scans packed copies in edge-image order; for each, enumerates all
    copies inside (that copy's vertices + leftover) and applies the first
    disjoint pair found, which frees the copy but covers 2*v(H) pool
    vertices, shrinking the leftover by v(H).  Each applied move consumes
    one unit of swap_budget.  After a move the scan restarts.
    """
    index = PatternIndex(h)
    copies = sorted(pk.copies, key=lambda c: c.edges)
    leftover = set(pk.leftover)
    moves = 0
    while moves < cfg.swap_budget:
        applied = False
        for i, c in enumerate(copies):
            pool = sorted(leftover.union(c.vertices))
            if len(pool) < 2 * index.k:
                continue
            pair = _first_disjoint_pair(enumerate_in_pool(g, h, pool, index=index))
            if pair is None:
                continue
            c1, c2 = pair
            del copies[i]
            copies.append(c1)
            copies.append(c2)
            copies.sort(key=lambda cc: cc.edges)
            leftover.update(c.vertices)
            leftover.difference_update(c1.vertices)
            leftover.difference_update(c2.vertices)
            moves += 1
            applied = True
            break
        if not applied:
            break
    return _finish_packing(pk.host_n, copies, leftover)


def verify_packing(g: Graph, h: Pattern, pk: Packing) -> Verdict:
    """Independent structural check of a packing against its host.

    Recomputes everything from the witnesses: edge images present in g,
    fields internally consistent, copies pairwise disjoint, leftover the
    exact complement of the covered set.
    """
    k = h.v
    if pk.host_n != g.n:
        return Verdict(False, f"host_n {pk.host_n} != graph n {g.n}")
    pedges = h.graph.edge_list()
    seen: set[int] = set()
    for c in pk.copies:
        if len(c.witness) != k:
            return Verdict(False, f"witness length {len(c.witness)} != v(H) {k}")
        if len(set(c.witness)) != k:
            return Verdict(False, f"witness not injective: {c.witness}")
        for w in c.witness:
            if not 0 <= w < g.n:
                return Verdict(False, f"witness vertex {w} out of range")
        for a, b in pedges:
            if not g.has_edge(c.witness[a], c.witness[b]):
                return Verdict(
                    False,
                    f"pattern edge ({a},{b}) maps to non-edge "
                    f"({c.witness[a]},{c.witness[b]})",
                )
        image = tuple(
            sorted(
                (c.witness[a], c.witness[b])
                if c.witness[a] < c.witness[b]
                else (c.witness[b], c.witness[a])
                for a, b in pedges
            )
        )
        if image != c.edges:
            return Verdict(False, f"edge image mismatch for copy {c.vertices}")
        if tuple(sorted(c.witness)) != c.vertices:
            return Verdict(False, f"vertex set mismatch for copy {c.vertices}")
        for w in c.witness:
            if w in seen:
                return Verdict(False, f"vertex {w} covered twice")
            seen.add(w)
    expected_leftover = tuple(v for v in range(g.n) if v not in seen)
    if pk.leftover != expected_leftover:
        return Verdict(False, "leftover is not the complement of covered vertices")
    if len(pk.leftover) != g.n - k * len(pk.copies):
        return Verdict(False, "leftover size arithmetic mismatch")
    return Verdict(True)
