"""Bootstrap packing: geometric partition stages that shrink the leftover.

A single greedy pass on G(n,p) leaves a leftover of size about gamma*n.
The bootstrap drives it down to the plateau scale gamma*(C/p)^m2 by
splitting the host into geometrically shrinking parts V_1, ..., V_q with
|V_i| = floor(n / 2^i) and a final part V_q that absorbs rounding, then
packing stage by stage: stage 1 packs G[V_1]; stage i+1 packs the induced
graph on (previous leftover) united with V_{i+1}.  Each stage's leftover is
a fraction of its part, so the final leftover lives on the scale of V_q,
which the plan caps near (C/p)^m2.

Stages only help if every vertex keeps a degree margin into every part;
the partition sampler checks that explicitly and resamples on failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .copies import Copy
from .graphs import Graph, induced_subgraph, min_degree
from .packing import OracleConfig, Packing, greedy_pack, leftover_count, local_search_improve
from .patterns import Pattern, PatternParams, density_m2, pattern_params
from .seeds import check_seed, stable_seed


class RegimeViolation(ValueError):
    """The host is too small (or p too low) for even one partition stage."""


class DegreeConditionError(RuntimeError):
    """No sampled partition met the degree condition.

    Carries the least-bad witness: the vertex, part index, and deficit of
    the worst violation in the best sample tried.
    """

    def __init__(self, vertex: int, part_index: int, deficit: float, attempts: int):
        self.vertex = vertex
        self.part_index = part_index
        self.deficit = deficit
        self.attempts = attempts
        super().__init__(
            f"degree condition unsatisfied after {attempts} samples: "
            f"vertex {vertex} misses part {part_index} by {deficit:.3f}"
        )


@dataclass(frozen=True)
class PartitionPlan:
    """Geometric stage sizes for a host of n vertices.

    threshold = ceil((C/p)^m2) is the smallest part the plan allows; q is
    the largest stage count with n / 2^(q-1) > threshold.  sizes[i-1] is
    |V_i|: floor(n / 2^i) for i < q, remainder for i = q.
    """

    n: int
    q: int
    sizes: tuple[int, ...]
    threshold: int


def plan_partition(n: int, p: float, m2: Fraction, C: float) -> PartitionPlan:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0,1], got {p}")
    if C <= 0:
        raise ValueError(f"C must be > 0, got {C}")
    threshold = math.ceil((C / p) ** float(m2))
    if n <= threshold:
        raise RegimeViolation(
            f"n={n} is not above the plateau threshold {threshold}; "
            f"no partition stage fits"
        )
    q = 1
    while n > threshold * (2 ** q):
        q += 1
    sizes = [n >> i for i in range(1, q)]
    last = n - sum(sizes)
    sizes.append(last)
    # remainder stays within [n/2^(q-1), n/2^(q-1) + q], checked exactly
    assert last * (2 ** (q - 1)) >= n
    assert (last - q) * (2 ** (q - 1)) <= n
    return PartitionPlan(n=n, q=q, sizes=tuple(sizes), threshold=threshold)


def _degree_rhs(plan: PartitionPlan, gamma: float, chi_cr: Fraction, p: float) -> np.ndarray:
    base = 1.0 - 1.0 / float(chi_cr) + gamma / 2.0
    return np.array([base * size * p for size in plan.sizes], dtype=np.float64)


def _sample_partition_impl(
    g: Graph,
    plan: PartitionPlan,
    gamma: float,
    chi_cr: Fraction,
    p: float,
    max_resamples: int,
    seed: int,
):
    """Resampling loop shared by the strict and best-effort entry points.

    Returns (parts, ok, witness, attempts): parts from the accepted sample
    if ok, else from the sample whose worst deficit was smallest; witness
    is (vertex, part_index, deficit) for that worst pair, or None if ok.
    """
    if g.n != plan.n:
        raise ValueError(f"plan is for n={plan.n}, graph has n={g.n}")
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0,1], got {p}")
    if max_resamples < 1:
        raise ValueError(f"max_resamples must be >= 1, got {max_resamples}")
    check_seed(seed)
    n, q = plan.n, plan.q
    rhs = _degree_rhs(plan, gamma, chi_cr, p)
    rng = np.random.Generator(np.random.PCG64(seed))
    indptr, indices = g.csr()
    row = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    bounds = np.cumsum((0,) + plan.sizes)
    label = np.empty(n, dtype=np.int64)
    best = None  # (worst_deficit, witness, parts)
    for attempt in range(1, max_resamples + 1):
        perm = rng.permutation(n)
        for i in range(q):
            label[perm[bounds[i]:bounds[i + 1]]] = i
        counts = np.bincount(
            row * q + label[indices], minlength=n * q
        ).reshape(n, q)
        deficits = rhs[np.newaxis, :] - counts
        worst = float(deficits.max())
        parts = tuple(
            tuple(sorted(int(v) for v in perm[bounds[i]:bounds[i + 1]]))
            for i in range(q)
        )
        if worst <= 0.0:
            return parts, True, None, attempt
        v, i = np.unravel_index(int(np.argmax(deficits)), deficits.shape)
        witness = (int(v), int(i), worst)
        if best is None or worst < best[0]:
            best = (worst, witness, parts)
    assert best is not None
    return best[2], False, best[1], max_resamples


def sample_partition(
    g: Graph,
    plan: PartitionPlan,
    gamma: float,
    chi_cr: Fraction,
    p: float,
    max_resamples: int,
    seed: int,
) -> list[tuple[int, ...]]:
    """Random partition into the planned sizes meeting the degree condition.

    Every vertex must have at least (1 - 1/chi_cr + gamma/2) * |V_i| * p
    neighbors inside every part V_i.  Permutations are drawn until one
    satisfies this or max_resamples is exhausted, in which case
    DegreeConditionError carries the least-bad witness.
    """
    parts, ok, witness, attempts = _sample_partition_impl(
        g, plan, gamma, chi_cr, p, max_resamples, seed
    )
    if not ok:
        v, i, deficit = witness
        raise DegreeConditionError(v, i, deficit, attempts)
    return list(parts)


@dataclass(frozen=True)
class BootstrapConfig:
    """Calibration and budgets for a bootstrap run.

    gamma is the leftover fraction the oracle is trusted to reach; C
    calibrates the plateau threshold (C/p)^m2.  Margins derived from gamma
    are fixed fractions: the partition demands gamma/2 over the critical
    degree ratio, each stage's oracle is expected to work with margin
    gamma/20 and to leave at most gamma*|V_i|/10 vertices, and a stage
    leftover may be at most gamma*|V_{i+1}|/4 when carried forward.
    """

    gamma: float
    oracle: OracleConfig
    C: float = 3.0
    max_resamples: int = 20

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must be in (0,1), got {self.gamma}")
        if self.C <= 0:
            raise ValueError(f"C must be > 0, got {self.C}")
        if self.max_resamples < 1:
            raise ValueError(f"max_resamples must be >= 1, got {self.max_resamples}")

    @property
    def margin_degree(self) -> float:
        return self.gamma / 2.0

    @property
    def margin_oracle(self) -> float:
        return self.gamma / 20.0

    @property
    def budget_fraction(self) -> float:
        return self.gamma / 10.0

    @property
    def carry_fraction(self) -> float:
        return self.gamma / 4.0


@dataclass(frozen=True)
class StageTrace:
    """Accounting for one bootstrap stage."""

    stage: int
    part_size: int
    carried_in: int
    pool_size: int
    copies: int
    stage_leftover: int
    budget: float
    within_budget: bool
    carry_ok: bool
    available_margin: float
    required_margin: float
    margin_ok: bool


@dataclass(frozen=True)
class BootstrapResult:
    packing: Packing
    plan: PartitionPlan
    trace: tuple[StageTrace, ...]
    params: PatternParams
    degree_ok: bool
    degree_witness: Optional[tuple[int, int, float]]
    resamples_used: int
    host_degree_ok: bool
    vq_within_cap: bool
    bound: float


Oracle = Callable[[Graph, Pattern, OracleConfig], Packing]


def _default_oracle(g: Graph, h: Pattern, cfg: OracleConfig) -> Packing:
    pk = greedy_pack(g, h, cfg)
    if cfg.swap_budget > 0:
        pk = local_search_improve(g, h, pk, cfg)
    return pk


def _lift_copy(c: Copy, mapping: tuple[int, ...]) -> Copy:
    witness = tuple(mapping[w] for w in c.witness)
    edges = tuple(
        sorted(
            (mapping[a], mapping[b]) if mapping[a] < mapping[b] else (mapping[b], mapping[a])
            for a, b in c.edges
        )
    )
    return Copy(vertices=tuple(sorted(witness)), witness=witness, edges=edges)


def theorem_bound(p: float, m2: Fraction, gamma: float, C: float) -> float:
    """Leftover plateau scale gamma * (C/p)^m2."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0,1], got {p}")
    if gamma <= 0 or C <= 0:
        raise ValueError("gamma and C must be > 0")
    return gamma * (C / p) ** float(m2)


@dataclass(frozen=True)
class RegimeReport:
    """Where (n, p) sits relative to the window the guarantees cover."""

    n: int
    p: float
    lower: float
    upper: float
    status: str  # "below", "inside", "above"


def regime_check(n: int, p: float, h: Pattern, C: float) -> RegimeReport:
    """Compare p against [C * n^(-1/m2), (ln n)^(-1/(m2-1))], closed ends."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0,1], got {p}")
    if C <= 0:
        raise ValueError(f"C must be > 0, got {C}")
    m2 = density_m2(h)
    lower = C * n ** (-1.0 / float(m2))
    upper = math.log(n) ** (-1.0 / float(m2 - 1))
    if p < lower:
        status = "below"
    elif p > upper:
        status = "above"
    else:
        status = "inside"
    return RegimeReport(n=n, p=p, lower=lower, upper=upper, status=status)


def bootstrap_pack(
    g: Graph,
    h: Pattern,
    p: float,
    cfg: BootstrapConfig,
    oracle: Optional[Oracle] = None,
) -> BootstrapResult:
    """Run the staged partition packing on a host drawn at edge density p.

    Stage 1 packs the induced graph on V_1 with the configured oracle;
    stage i+1 packs the induced graph on (stage-i leftover) union V_{i+1}.
    The final leftover is the last stage's leftover.  Degree-condition
    failures do not abort the run: the best sampled partition is used and
    the result carries degree_ok=False plus the worst witness, so callers
    can decide how much to trust the stage accounting.

    With q = 1 and the default oracle this reduces to greedy_pack on g
    itself (same seed, same order).
    """
    if oracle is None:
        oracle = _default_oracle
    params = pattern_params(h)
    plan = plan_partition(g.n, p, params.m2, cfg.C)
    parts, degree_ok, degree_witness, resamples = _sample_partition_impl(
        g, plan, cfg.gamma, params.chi_cr, p,
        cfg.max_resamples, stable_seed(cfg.oracle.seed, "partition"),
    )
    host_need = (1.0 - 1.0 / float(params.chi_cr) + cfg.gamma) * g.n * p
    host_degree_ok = min_degree(g) >= host_need if g.n > 0 else False
    vq_within_cap = plan.sizes[-1] <= 3 * plan.threshold
    crit = 1.0 - 1.0 / float(params.chi_cr)

    carried: tuple[int, ...] = ()
    all_copies: list[Copy] = []
    traces: list[StageTrace] = []
    for i, part in enumerate(parts, start=1):
        pool = tuple(sorted(set(part) | set(carried)))
        carry_ok = (i == 1) or (len(carried) <= cfg.carry_fraction * len(part))
        sub, mapping = induced_subgraph(g, pool)
        if i == 1:
            stage_oracle_cfg = cfg.oracle
        else:
            stage_oracle_cfg = OracleConfig(
                seed=stable_seed(cfg.oracle.seed, "stage", i),
                sweeps=cfg.oracle.sweeps,
                swap_budget=cfg.oracle.swap_budget,
            )
        pk = oracle(sub, h, stage_oracle_cfg)
        lifted = [_lift_copy(c, mapping) for c in pk.copies]
        all_copies.extend(lifted)
        carried = tuple(mapping[v] for v in pk.leftover)
        pool_p = len(pool) * p
        avail = (min_degree(sub) / pool_p - crit) if pool_p > 0 else math.inf
        budget = cfg.budget_fraction * len(part)
        traces.append(
            StageTrace(
                stage=i,
                part_size=len(part),
                carried_in=len(pool) - len(part),
                pool_size=len(pool),
                copies=len(lifted),
                stage_leftover=len(carried),
                budget=budget,
                within_budget=len(carried) <= budget,
                carry_ok=carry_ok,
                available_margin=avail,
                required_margin=cfg.margin_oracle,
                margin_ok=avail >= cfg.margin_oracle,
            )
        )
    packing = Packing(
        host_n=g.n,
        copies=tuple(sorted(all_copies, key=lambda c: c.edges)),
        leftover=tuple(sorted(carried)),
    )
    assert leftover_count(packing) == g.n - params.v * len(packing.copies)
    return BootstrapResult(
        packing=packing,
        plan=plan,
        trace=tuple(traces),
        params=params,
        degree_ok=degree_ok,
        degree_witness=degree_witness,
        resamples_used=resamples,
        host_degree_ok=host_degree_ok,
        vq_within_cap=vq_within_cap,
        bound=theorem_bound(p, params.m2, cfg.gamma, cfg.C),
    )
