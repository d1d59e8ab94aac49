"""Pattern-copy enumeration in host graphs.

A copy of pattern H in host G is an injective map from V(H) to V(G) that
sends every pattern edge to a host edge.  Copies are identified by their
edge image: two witnesses with the same set of host edges are the same
copy.  All enumeration output is deduplicated on that identity and sorted
lexicographically by the sorted edge-image list, so results are
deterministic regardless of search order.

The search is plain backtracking over a connectivity-aware slot order with
adjacency-set intersection and degree pruning.  Anchored searches start
from one representative per automorphism orbit of H, which is enough to
find every copy through a given host vertex exactly once per edge image.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .graphs import Graph, vertex_tuple
from .patterns import Pattern


@dataclass(frozen=True, eq=False)
class Copy:
    """One pattern copy: vertex set, witness map, and edge image.

    witness[i] is the host vertex that pattern vertex i maps to.  Equality
    and hashing use only the edge image.
    """

    vertices: tuple[int, ...]
    witness: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __eq__(self, other):
        if not isinstance(other, Copy):
            return NotImplemented
        return self.edges == other.edges

    def __hash__(self):
        return hash(self.edges)

    def __repr__(self):
        return f"Copy(vertices={self.vertices})"


class EnumResult(NamedTuple):
    copies: list[Copy]
    truncated: bool


def _build_order(g: Graph, start: int) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Slot order from a start vertex, preferring already-connected slots.

    Returns (order, backs, need): backs[i] lists slot positions adjacent
    to slot i among earlier slots; need[i] is the pattern degree of the
    vertex at slot i (a host-degree lower bound for pruning).
    """
    k = g.n
    order = [start]
    placed = {start}
    while len(order) < k:
        best_key, best_v = None, None
        for v in range(k):
            if v in placed:
                continue
            back = sum(1 for u in g.adj[v] if u in placed)
            key = (back > 0, back, len(g.adj[v]), -v)
            if best_key is None or key > best_key:
                best_key, best_v = key, v
        order.append(best_v)
        placed.add(best_v)
    backs = tuple(
        tuple(j for j in range(i) if order[j] in g.adj[order[i]])
        for i in range(k)
    )
    need = tuple(len(g.adj[v]) for v in order)
    return tuple(order), backs, need


def _maps_to(g: Graph, a: int, b: int) -> bool:
    """Whether some automorphism of g sends a to b (first-only search)."""
    k = g.n
    deg = [len(s) for s in g.adj]
    if deg[a] != deg[b]:
        return False
    order = [a] + [v for v in range(k) if v != a]
    image = [-1] * k
    used = [False] * k

    def rec(i: int) -> bool:
        if i == k:
            return True
        va = order[i]
        cands = (b,) if i == 0 else range(k)
        for vb in cands:
            if used[vb] or deg[vb] != deg[va]:
                continue
            ok = True
            for j in range(i):
                u = order[j]
                if (u in g.adj[va]) != (image[u] in g.adj[vb]):
                    ok = False
                    break
            if not ok:
                continue
            image[va] = vb
            used[vb] = True
            if rec(i + 1):
                return True
            image[va] = -1
            used[vb] = False
        return False

    return rec(0)


def _orbit_reps(g: Graph) -> tuple[int, ...]:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(g.n):
        for b in range(a + 1, g.n):
            if find(a) != find(b) and _maps_to(g, a, b):
                parent[find(a)] = find(b)
    groups: dict[int, int] = {}
    for v in range(g.n):
        r = find(v)
        groups[r] = min(groups.get(r, v), v)
    return tuple(sorted(set(groups.values())))


class PatternIndex:
    """Search machinery for one pattern: slot orders and orbit reps."""

    __slots__ = ("pattern", "k", "pedges", "orbit_reps", "free_order", "anchored")

    def __init__(self, h: Pattern):
        self.pattern = h
        g = h.graph
        self.k = g.n
        self.pedges = g.edge_list()
        start = max(range(g.n), key=lambda v: (len(g.adj[v]), -v))
        self.free_order = _build_order(g, start)
        self.orbit_reps = _orbit_reps(g)
        self.anchored = {r: _build_order(g, r) for r in self.orbit_reps}


def _search(
    g: Graph,
    slots,
    on_complete,
    anchor: Optional[int] = None,
    allowed_set=None,
    allowed_sorted=None,
    banned=None,
    lo: int = 0,
):
    """Backtracking embedding search over one slot order.

    on_complete(assign) is called with the per-slot host assignment and
    returns True to stop the whole search.  allowed_set restricts every
    slot; allowed_sorted (if given) is its ascending list, used as an
    iteration base when cheaper.  banned excludes hosts from every slot
    except slot 0.  lo is a minimum host id applied to every slot.
    """
    order, backs, need = slots
    k = len(order)
    adj = g.adj
    adj_sorted = g.adj_sorted
    n = g.n
    assign = [0] * k
    used: set[int] = set()

    def rec(pos: int) -> bool:
        bks = backs[pos]
        min_deg = need[pos]
        check_allowed = allowed_set is not None
        check_banned = banned is not None and pos > 0
        if pos == 0 and anchor is not None:
            base = (anchor,)
            others = ()
        elif bks:
            bhosts = [assign[b] for b in bks]
            pivot = min(bhosts, key=lambda hst: len(adj[hst]))
            if allowed_sorted is not None and len(allowed_sorted) < len(adj_sorted[pivot]):
                base = allowed_sorted
                others = [adj[b] for b in bhosts]
                check_allowed = False
            else:
                base = adj_sorted[pivot]
                others = [adj[b] for b in bhosts if b != pivot]
        else:
            if allowed_sorted is not None:
                base = allowed_sorted
                check_allowed = False
            elif allowed_set is not None:
                base = sorted(allowed_set)
                check_allowed = False
            else:
                base = range(lo, n)
            others = ()
        for w in base:
            if w < lo:
                continue
            if w in used:
                continue
            if len(adj[w]) < min_deg:
                continue
            if check_allowed and w not in allowed_set:
                continue
            if check_banned and w in banned:
                continue
            ok = True
            for o in others:
                if w not in o:
                    ok = False
                    break
            if not ok:
                continue
            assign[pos] = w
            if pos + 1 == k:
                stop = on_complete(assign)
            else:
                used.add(w)
                stop = rec(pos + 1)
                used.discard(w)
            if stop:
                return True
        return False

    return rec(0)


def _make_copy(index: PatternIndex, order, assign) -> Copy:
    w2h = [0] * index.k
    for pos, pv in enumerate(order):
        w2h[pv] = assign[pos]
    edges = sorted(
        (w2h[a], w2h[b]) if w2h[a] < w2h[b] else (w2h[b], w2h[a])
        for a, b in index.pedges
    )
    return Copy(
        vertices=tuple(sorted(w2h)),
        witness=tuple(w2h),
        edges=tuple(edges),
    )


def _collector(index: PatternIndex, order, found: dict, limit: Optional[int]):
    def on_complete(assign) -> bool:
        c = _make_copy(index, order, assign)
        if c.edges not in found:
            found[c.edges] = c
            if limit is not None and len(found) >= limit:
                return True
        return False

    return on_complete


def enumerate_copies(g: Graph, h: Pattern, limit: Optional[int] = None) -> EnumResult:
    """All distinct copies of h in g, sorted by edge image.

    With a limit, the search stops once that many distinct copies are
    collected and the result is flagged truncated; the copies returned are
    then the first `limit` found in scan order, sorted.
    """
    if limit is not None and limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    index = PatternIndex(h)
    found: dict = {}
    truncated = False
    if index.k <= g.n:
        # scan by minimum host vertex: anchored searches with all other
        # slots above the anchor visit each copy exactly once per rep
        for w in range(g.n):
            stop = False
            for rep in index.orbit_reps:
                slots = index.anchored[rep]
                coll = _collector(index, slots[0], found, limit)
                if _search(g, slots, coll, anchor=w, lo=w):
                    stop = True
                    break
            if stop:
                truncated = True
                break
    copies = sorted(found.values(), key=lambda c: c.edges)
    return EnumResult(copies, truncated)


def copies_through(g: Graph, h: Pattern, w: int, index: Optional[PatternIndex] = None) -> list[Copy]:
    """All distinct copies of h in g whose vertex set contains w."""
    if not 0 <= w < g.n:
        raise ValueError(f"vertex id {w} out of range for n={g.n}")
    if index is None:
        index = PatternIndex(h)
    found: dict = {}
    if index.k <= g.n:
        for rep in index.orbit_reps:
            slots = index.anchored[rep]
            _search(g, slots, _collector(index, slots[0], found, None), anchor=w)
    return sorted(found.values(), key=lambda c: c.edges)


def copies_meeting(g: Graph, h: Pattern, w: int, x: Iterable[int]) -> list[Copy]:
    """Copies through w that also use at least one vertex of x besides w."""
    xs = set(vertex_tuple(g.n, x)) - {w}
    out = [c for c in copies_through(g, h, w) if any(v in xs for v in c.vertices)]
    return out


def copies_meeting_set(g: Graph, h: Pattern, x: Iterable[int], index: Optional[PatternIndex] = None) -> list[Copy]:
    """All distinct copies of h in g using at least one vertex of x.

    Each copy is found once, anchored at its smallest member of x: earlier
    x-members are banned from the other slots.
    """
    xt = vertex_tuple(g.n, x)
    if index is None:
        index = PatternIndex(h)
    found: dict = {}
    if index.k <= g.n:
        earlier: set[int] = set()
        for w in xt:
            for rep in index.orbit_reps:
                slots = index.anchored[rep]
                _search(
                    g,
                    slots,
                    _collector(index, slots[0], found, None),
                    anchor=w,
                    banned=earlier if earlier else None,
                )
            earlier = earlier | {w}
    return sorted(found.values(), key=lambda c: c.edges)


def enumerate_in_pool(g: Graph, h: Pattern, pool: Iterable[int], index: Optional[PatternIndex] = None) -> list[Copy]:
    """All distinct copies of h with every vertex inside the pool."""
    pt = vertex_tuple(g.n, pool)
    if index is None:
        index = PatternIndex(h)
    found: dict = {}
    if index.k <= len(pt):
        slots = index.free_order
        _search(
            g,
            slots,
            _collector(index, slots[0], found, None),
            allowed_set=set(pt),
            allowed_sorted=list(pt),
        )
    return sorted(found.values(), key=lambda c: c.edges)


def embed_through(
    g: Graph,
    index: PatternIndex,
    anchor: int,
    allowed_set=None,
) -> Optional[Copy]:
    """First copy through anchor with all vertices in allowed_set, or None.

    First-only search used by the greedy packer; deterministic for a given
    graph, pattern, anchor, and allowed set.
    """
    hit: list[Copy] = []

    for rep in index.orbit_reps:
        slots = index.anchored[rep]
        order = slots[0]

        def on_complete(assign) -> bool:
            hit.append(_make_copy(index, order, assign))
            return True

        if _search(g, slots, on_complete, anchor=anchor, allowed_set=allowed_set):
            return hit[0]
    return None
