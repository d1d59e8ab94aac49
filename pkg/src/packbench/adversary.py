"""Adversarial edge deletion that isolates a planted vertex set.

Given a host drawn at density p and a pattern H with v vertices and e
edges, an adversary that may delete a small number of edges per vertex can
still block every copy of H through a planted set X of size about
c / (n^(v-3) * p^(e-1)): list the copies meeting X in a fixed order and
delete one edge from each copy not already destroyed.  Copies meeting X in
one vertex lose an edge away from X, so deletions never concentrate on X
itself; H containing a cycle guarantees such an edge exists.

kimvu_report computes the parameter arithmetic of the polynomial
concentration bound (Kim-Vu style) that controls how large X can be while
the per-vertex deletion count stays o(np): expectation bounds E_i for the
partial derivatives of the copy-counting polynomial, their maximum E',
and the ratio that must clear (2 e(H) ln n)^e(H) for the construction to
be feasible at that size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Optional

import numpy as np

from .copies import Copy, copies_meeting_set
from .graphs import Graph, delete_edges
from .packing import Verdict
from .patterns import Pattern, density_m2, pattern_preset
from .seeds import check_seed


def _decimal_exact(x: float) -> Fraction:
    """The rational value of x's shortest decimal rendering.

    Size formulas quote clean decimal targets (p = 0.01 means 1/100, not
    the nearest binary float), so the ratios here are evaluated exactly
    over the decimal reading of each input before flooring.
    """
    return Fraction(Decimal(str(x)))


def isolated_set_size(n: int, p: float, h: Pattern, c: float) -> int:
    """floor(c / (n^(v-3) * p^(e-1))), clamped to [0, n]."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0,1], got {p}")
    if c <= 0:
        raise ValueError(f"c must be > 0, got {c}")
    v, e = h.v, h.e
    raw = _decimal_exact(c) / (Fraction(n) ** (v - 3) * _decimal_exact(p) ** (e - 1))
    return min(n, max(0, math.floor(raw)))


def default_c(h: Pattern, epsilon: float, c_emp: float = 1.0) -> float:
    """Default construction constant min(epsilon/c_emp, (2 e(H) v(H))^(-2 e(H))).

    c_emp stands in for the non-explicit concentration constant and is a
    calibration knob; both factors are kept adjustable.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0,1), got {epsilon}")
    if c_emp <= 0:
        raise ValueError(f"c_emp must be > 0, got {c_emp}")
    return min(epsilon / c_emp, float(2 * h.e * h.v) ** (-2 * h.e))


@dataclass(frozen=True)
class AdversaryConfig:
    """Degree-loss margin, construction constant, and seed.

    c=None means derive it at construction time as default_c(h, epsilon).
    """

    seed: int
    epsilon: float = 0.2
    c: Optional[float] = None
    x_override: Optional[int] = None

    def __post_init__(self):
        check_seed(self.seed)
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0,1), got {self.epsilon}")
        if self.c is not None and self.c <= 0:
            raise ValueError(f"c must be > 0, got {self.c}")
        if self.x_override is not None and self.x_override < 0:
            raise ValueError(f"x_override must be >= 0, got {self.x_override}")


@dataclass(frozen=True)
class AdversaryOutcome:
    """Degraded host, planted set, and the full deletion audit trail.

    deleted pairs each removed edge with the copy whose destruction chose
    it, in deletion order.  per_vertex_deletions[v] counts removed edges
    incident to v.
    """

    degraded: Graph
    x: tuple[int, ...]
    deleted: tuple[tuple[tuple[int, int], Copy], ...]
    per_vertex_deletions: tuple[int, ...]


def adversary_construct(g: Graph, h: Pattern, p: float, cfg: AdversaryConfig) -> AdversaryOutcome:
    """Delete one edge from every copy of h meeting a random planted set.

    The planted set X is a uniform sample of isolated_set_size(n, p, h, c)
    vertices (or x_override).  Copies meeting X are enumerated once in
    deterministic order; deletions never create new copies, so one pass
    over that list, skipping copies that already lost an edge, is the same
    as repeatedly picking the first remaining copy.  Edge choice: a copy
    meeting X in two or more vertices loses its lexicographically first
    edge; a copy meeting X in exactly one vertex loses its first edge with
    both endpoints outside X, which exists because h contains a cycle.
    """
    n = g.n
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0,1], got {p}")
    if cfg.x_override is not None:
        if cfg.x_override > n:
            raise ValueError(f"x_override {cfg.x_override} exceeds n={n}")
        x_size = cfg.x_override
    else:
        c = cfg.c if cfg.c is not None else default_c(h, cfg.epsilon)
        x_size = isolated_set_size(n, p, h, c)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    x = tuple(sorted(int(v) for v in rng.choice(n, size=x_size, replace=False)))
    xset = set(x)
    targets = copies_meeting_set(g, h, x)
    gone: set[tuple[int, int]] = set()
    deleted: list[tuple[tuple[int, int], Copy]] = []
    per_vertex = [0] * n
    for c in targets:
        if any(e in gone for e in c.edges):
            continue
        hits = sum(1 for v in c.vertices if v in xset)
        assert hits >= 1, "enumeration returned a copy not meeting X"
        if hits >= 2:
            edge = c.edges[0]
        else:
            edge = None
            for e in c.edges:
                if e[0] not in xset and e[1] not in xset:
                    edge = e
                    break
            assert edge is not None, "cyclic pattern guarantees an edge off X"
        gone.add(edge)
        deleted.append((edge, c))
        per_vertex[edge[0]] += 1
        per_vertex[edge[1]] += 1
    degraded = delete_edges(g, gone) if gone else g
    return AdversaryOutcome(
        degraded=degraded,
        x=x,
        deleted=tuple(deleted),
        per_vertex_deletions=tuple(per_vertex),
    )


def verify_isolation(outcome: AdversaryOutcome, h: Pattern) -> Verdict:
    """Recompute from scratch that no copy of h meets X in the degraded host."""
    if not outcome.x:
        return Verdict(True)
    alive = copies_meeting_set(outcome.degraded, h, outcome.x)
    if alive:
        return Verdict(
            False,
            f"{len(alive)} copies still meet the planted set, "
            f"first at {alive[0].vertices}",
        )
    return Verdict(True)


@dataclass(frozen=True)
class KimVuReport:
    """Parameter arithmetic for the copy-count concentration bound.

    e0 is the expected number of copy extensions counted from the planted
    set (x_size * C(n, v-2) * p^e); e0_lower is the same with the v^-v
    slack used on the feasibility side.  ei_bounds[i-1] bounds the order-i
    partial derivative expectation by n^(v - (i-1)/m2 - 2) * p^(e-i), with
    the exponent computed in exact rational arithmetic.  eprime is their
    maximum, ratio the feasibility side sqrt(x_size * p * v^-v), and the
    construction is feasible when ratio >= (2 e ln n)^e.  ak and dk are
    the constants 8^k sqrt(k!) and 2 e^2 entering the tail bound, lam the
    log weight 2 ln n.
    """

    n: int
    p: float
    x_size: int
    v: int
    e: int
    m2: Fraction
    e0: float
    e0_lower: float
    ei_bounds: tuple[float, ...]
    eprime: float
    ratio: float
    ratio_threshold: float
    feasible: bool
    ak: float
    dk: float
    lam: float


def kimvu_report(h: Pattern, n: int, p: float, x_size: int) -> KimVuReport:
    """Concentration-parameter table for copies through a vertex meeting X.

    x_size may exceed n: the report is a formula calculator and accepts
    the raw planted-set size from the lower-bound chain.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0,1], got {p}")
    if x_size < 0:
        raise ValueError(f"x_size must be >= 0, got {x_size}")
    v, e = h.v, h.e
    m2 = density_m2(h)
    e0 = x_size * math.comb(n, v - 2) * p ** e
    slack = float(v) ** (-v)
    e0_lower = x_size * math.comb(n, v - 2) * p ** e * slack
    ei = []
    for i in range(1, e + 1):
        expo = Fraction(v) - Fraction(i - 1) / m2 - 2
        ei.append(float(n) ** float(expo) * p ** (e - i))
    eprime = max(ei)
    ratio = math.sqrt(x_size * p * slack)
    ratio_threshold = (2.0 * e * math.log(n)) ** e
    k = e
    ak = 8.0 ** k * math.sqrt(math.factorial(k))
    dk = 2.0 * math.e ** 2
    lam = 2.0 * math.log(n)
    return KimVuReport(
        n=n,
        p=p,
        x_size=x_size,
        v=v,
        e=e,
        m2=m2,
        e0=e0,
        e0_lower=e0_lower,
        ei_bounds=tuple(ei),
        eprime=eprime,
        ratio=ratio,
        ratio_threshold=ratio_threshold,
        feasible=ratio >= ratio_threshold,
        ak=ak,
        dk=dk,
        lam=lam,
    )


def cycle_lower_bound(t: int, n: int, p: float, c: float) -> int:
    """Planted-set size floor(c / (n^(t-3) * p^(t-1))) for the t-cycle."""
    if t < 3:
        raise ValueError(f"cycle length must be >= 3, got {t}")
    return isolated_set_size(n, p, pattern_preset(f"C{t}"), c)


def clique_lower_bound(t: int, n: int, p: float, c: float) -> tuple[int, int]:
    """Best planted-set size over clique subpatterns K_l, l = 3..t.

    Every K_l inside K_t gives its own construction; the best term
    c / (n^(l-3) * p^(l(l-1)/2 - 1)) wins, reported raw (no cap at n,
    so the crossover between terms stays visible).  Returns (size, l);
    ties go to the smallest l.
    """
    if t < 3:
        raise ValueError(f"clique size must be >= 3, got {t}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0,1], got {p}")
    if c <= 0:
        raise ValueError(f"c must be > 0, got {c}")
    best_size, best_l = -1, -1
    for l in range(3, t + 1):
        term = _decimal_exact(c) / (
            Fraction(n) ** (l - 3) * _decimal_exact(p) ** (l * (l - 1) // 2 - 1)
        )
        size = math.floor(term)
        if size > best_size:
            best_size, best_l = size, l
    return best_size, best_l
