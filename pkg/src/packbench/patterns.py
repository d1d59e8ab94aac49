"""Pattern graphs and their exact packing-relevant parameters.

A pattern H is a small graph (3..10 vertices) that contains at least one
cycle.  The quantities computed here are exact:

  two-density     m2(H)  = max (e(H')-1)/(v(H')-2) over subgraphs with
                           v(H') >= 3, as a Fraction
  chromatic       chi(H)
  sigma           minimum size of the smallest color class over all proper
                  colorings with exactly chi(H) colors
  critical ratio  chi_cr(H) = (chi(H)-1) * v(H) / (v(H) - sigma(H))

chi_cr controls the degree margin the bootstrap partition stages demand;
m2 controls where the leftover plateau sits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph, complete_graph, cycle_graph, read_edge_list_file

MIN_PATTERN_VERTICES = 3
MAX_PATTERN_VERTICES = 10


class PatternError(ValueError):
    """Pattern fails the size or cycle requirements, or a bad preset name."""


def _has_cycle(g: Graph) -> bool:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        ru, rv = find(u), find(v)
        if ru == rv:
            return True
        parent[ru] = rv
    return False


@dataclass(frozen=True)
class Pattern:
    """Validated pattern graph with an optional display name."""

    graph: Graph
    name: str = "custom"

    def __post_init__(self):
        g = self.graph
        if not MIN_PATTERN_VERTICES <= g.n <= MAX_PATTERN_VERTICES:
            raise PatternError(
                f"pattern must have {MIN_PATTERN_VERTICES}.."
                f"{MAX_PATTERN_VERTICES} vertices, got {g.n}"
            )
        if not _has_cycle(g):
            raise PatternError("pattern must contain a cycle")

    @property
    def v(self) -> int:
        return self.graph.n

    @property
    def e(self) -> int:
        return self.graph.edge_count


_PRESET_RE = re.compile(r"^([KC])(\d+)$")


def pattern_preset(name: str) -> Pattern:
    """Build a preset pattern: K3..K10 (cliques) or C3..C10 (cycles)."""
    m = _PRESET_RE.match(name.strip().upper())
    if not m:
        raise PatternError(f"unknown preset {name!r} (use K3..K10 or C3..C10)")
    kind, t = m.group(1), int(m.group(2))
    if not MIN_PATTERN_VERTICES <= t <= MAX_PATTERN_VERTICES:
        raise PatternError(f"preset size {t} outside {MIN_PATTERN_VERTICES}..{MAX_PATTERN_VERTICES}")
    if kind == "K":
        return Pattern(complete_graph(t), f"K{t}")
    return Pattern(cycle_graph(t), f"C{t}")


def pattern_from_edge_list(path) -> Pattern:
    g = read_edge_list_file(path)
    return Pattern(g, name=str(path))


def density_m2(h: Pattern) -> Fraction:
    """Maximum (e'-1)/(v'-2) over subgraphs with at least 3 vertices.

    Only induced subgraphs need checking: dropping edges at fixed vertex
    count never raises the ratio.  Subsets are enumerated as bitmasks.
    """
    g = h.graph
    k = g.n
    edge_masks = [(1 << u) | (1 << v) for u, v in g.edges()]
    best = Fraction(0)
    for mask in range(1, 1 << k):
        s = mask.bit_count()
        if s < 3:
            continue
        e_in = sum(1 for em in edge_masks if em & mask == em)
        if e_in < 1:
            continue
        cand = Fraction(e_in - 1, s - 2)
        if cand > best:
            best = cand
    if best <= 0:
        raise PatternError("pattern has no subgraph with an edge on >= 3 vertices")
    return best


def _is_k_colorable(g: Graph, k: int) -> bool:
    order = sorted(range(g.n), key=lambda v: -len(g.adj[v]))
    colors = [-1] * g.n

    def rec(i: int, used: int) -> bool:
        if i == g.n:
            return True
        v = order[i]
        seen = {colors[w] for w in g.adj[v] if colors[w] >= 0}
        # allowing at most one brand-new color kills color-permutation symmetry
        limit = min(k, used + 1)
        for c in range(limit):
            if c in seen:
                continue
            colors[v] = c
            if rec(i + 1, max(used, c + 1)):
                return True
            colors[v] = -1
        return False

    return rec(0, 0)


def chromatic_number(h: Pattern) -> int:
    g = h.graph
    for k in range(1, g.n + 1):
        if _is_k_colorable(g, k):
            return k
    raise AssertionError("unreachable: every graph is n-colorable")


def sigma_min_class(h: Pattern, chi: int | None = None) -> int:
    """Smallest color-class size achievable in a proper chi-coloring.

    Enumerates partitions into exactly chi independent classes in
    restricted-growth order (vertex 0 in class 0, a new class may only be
    opened in index order), tracking the minimum class size seen.
    """
    g = h.graph
    k = chi if chi is not None else chromatic_number(h)
    n = g.n
    classes: list[set[int]] = [set() for _ in range(k)]
    sizes = [0] * k
    best = n

    def rec(v: int, opened: int):
        nonlocal best
        if best == 1:
            return
        if v == n:
            if opened == k:
                best = min(best, min(sizes[:k]))
            return
        # cannot finish with chi classes if too few vertices remain to open them
        if opened + (n - v) < k:
            return
        top = min(opened + 1, k)
        for c in range(top):
            cls = classes[c]
            if any(w in cls for w in g.adj[v]):
                continue
            cls.add(v)
            sizes[c] += 1
            rec(v + 1, max(opened, c + 1))
            sizes[c] -= 1
            cls.discard(v)

    rec(0, 0)
    if best == n and n > 1:
        # only possible when chi == 1, which needs an edgeless pattern;
        # patterns always have a cycle, so a full class can't happen
        raise AssertionError("no proper coloring with exactly chi classes found")
    return best


def critical_chromatic(h: Pattern) -> Fraction:
    chi = chromatic_number(h)
    sigma = sigma_min_class(h, chi)
    return Fraction((chi - 1) * h.v, h.v - sigma)


@dataclass(frozen=True)
class PatternParams:
    """Exact parameter bundle for a pattern."""

    v: int
    e: int
    m2: Fraction
    chi: int
    sigma: int
    chi_cr: Fraction


def pattern_params(h: Pattern) -> PatternParams:
    chi = chromatic_number(h)
    sigma = sigma_min_class(h, chi)
    return PatternParams(
        v=h.v,
        e=h.e,
        m2=density_m2(h),
        chi=chi,
        sigma=sigma,
        chi_cr=Fraction((chi - 1) * h.v, h.v - sigma),
    )


def clique_m2_closed_form(t: int) -> Fraction:
    """Closed form ((t+1)t - 2) / (2(t-1)) for the two-density of K_{t+1}."""
    if t < 2:
        raise ValueError(f"closed form needs t >= 2, got {t}")
    return Fraction((t + 1) * t - 2, 2 * (t - 1))
