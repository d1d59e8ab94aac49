import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from packbench.bootstrap import (
    BootstrapConfig,
    DegreeConditionError,
    RegimeViolation,
    bootstrap_pack,
    plan_partition,
    regime_check,
    sample_partition,
    theorem_bound,
)
from packbench.copies import enumerate_copies
from packbench.graphs import GnpConfig, Graph, complete_graph, gnp_generate
from packbench.packing import OracleConfig, Packing, greedy_pack, leftover_count, verify_packing
from packbench.patterns import pattern_params, pattern_preset

K3 = pattern_preset("K3")
K3_PARAMS = pattern_params(K3)


class TestPlanPartition:
    def test_thousand_vertices(self):
        plan = plan_partition(1000, 0.3, Fraction(2), 3.0)
        assert plan.threshold == 100
        assert plan.q == 4
        assert plan.sizes == (500, 250, 125, 125)

    def test_single_stage(self):
        plan = plan_partition(8, 0.39, Fraction(2), 1.0)
        assert plan.threshold == 7
        assert plan.q == 1
        assert plan.sizes == (8,)

    def test_below_threshold_rejected(self):
        with pytest.raises(RegimeViolation):
            plan_partition(50, 0.3, Fraction(2), 3.0)

    def test_halving_prefix(self):
        plan = plan_partition(1000, 0.3, Fraction(2), 3.0)
        for i in range(plan.q - 1):
            assert plan.sizes[i] == 1000 >> (i + 1)

    @given(
        st.integers(min_value=2, max_value=10**6),
        st.floats(min_value=0.05, max_value=1.0),
        st.sampled_from([Fraction(3, 2), Fraction(2), Fraction(5, 2)]),
        st.floats(min_value=0.5, max_value=5.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_invariants(self, n, p, m2, C):
        try:
            plan = plan_partition(n, p, m2, C)
        except RegimeViolation:
            plan = None
        if plan is None:
            return
        assert plan.q >= 1
        assert len(plan.sizes) == plan.q
        assert sum(plan.sizes) == n
        assert all(s >= 1 for s in plan.sizes)
        # q is maximal: n clears the threshold at 2^(q-1) but not at 2^q
        assert n > plan.threshold * 2 ** (plan.q - 1)
        assert n <= plan.threshold * 2**plan.q


class TestTheoremBound:
    def test_unit_case(self):
        assert theorem_bound(1.0, Fraction(1), 0.1, 1.0) == pytest.approx(0.1)

    def test_scaled_case(self):
        assert theorem_bound(0.1, Fraction(2), 0.1, 2.0) == pytest.approx(40.0)

    def test_decreasing_in_p(self):
        lo = theorem_bound(0.1, Fraction(2), 0.2, 3.0)
        hi = theorem_bound(0.5, Fraction(2), 0.2, 3.0)
        assert hi < lo


class TestRegimeCheck:
    def test_inside_window(self):
        rep = regime_check(10**4, 0.02, K3, 1.0)
        assert rep.status == "inside"
        assert rep.lower == pytest.approx(0.01)
        assert rep.upper == pytest.approx(math.log(10**4) ** -1.0)

    def test_above_window(self):
        assert regime_check(10**4, 1.0, K3, 1.0).status == "above"

    def test_below_window(self):
        assert regime_check(10**4, 0.005, K3, 1.0).status == "below"

    def test_lower_endpoint_included(self):
        rep = regime_check(10**4, 0.02, K3, 1.0)
        assert regime_check(10**4, rep.lower, K3, 1.0).status == "inside"


class TestSamplePartition:
    def test_complete_graph_accepts(self):
        g = complete_graph(60)
        plan = plan_partition(60, 1.0, Fraction(2), 3.0)
        parts = sample_partition(g, plan, 0.1, Fraction(3), 1.0, 10, seed=5)
        assert [len(part) for part in parts] == [30, 15, 15]
        seen = [v for part in parts for v in part]
        assert sorted(seen) == list(range(60))

    def test_partition_meets_degree_condition(self):
        g = gnp_generate(GnpConfig(n=240, p=0.5, seed=8))
        plan = plan_partition(240, 0.5, Fraction(2), 5.0)
        parts = sample_partition(g, plan, 0.05, Fraction(3), 0.5, 50, seed=8)
        from packbench.graphs import degree_into

        for part in parts:
            rhs = (1.0 - 1.0 / 3.0 + 0.025) * len(part) * 0.5
            for v in range(240):
                assert degree_into(g, v, part) >= rhs

    def test_empty_graph_rejected_with_witness(self):
        ge = Graph(60, [])
        plan = plan_partition(60, 1.0, Fraction(2), 3.0)
        with pytest.raises(DegreeConditionError) as exc:
            sample_partition(ge, plan, 0.1, Fraction(3), 1.0, 3, seed=5)
        err = exc.value
        assert err.attempts == 3
        assert 0 <= err.vertex < 60
        assert 0 <= err.part_index < plan.q
        # with no edges the deficit is the full requirement on some part
        sizes = plan.sizes
        assert err.deficit == pytest.approx(
            (1.0 - 1.0 / 3.0 + 0.05) * sizes[err.part_index] * 1.0
        )

    def test_deterministic(self):
        g = complete_graph(60)
        plan = plan_partition(60, 1.0, Fraction(2), 3.0)
        a = sample_partition(g, plan, 0.1, Fraction(3), 1.0, 10, seed=5)
        b = sample_partition(g, plan, 0.1, Fraction(3), 1.0, 10, seed=5)
        assert a == b

    def test_plan_graph_size_mismatch(self):
        plan = plan_partition(60, 1.0, Fraction(2), 3.0)
        with pytest.raises(ValueError):
            sample_partition(complete_graph(59), plan, 0.1, Fraction(3), 1.0, 10, seed=5)

    @pytest.mark.parametrize("gamma", [0.0, -0.5])
    def test_nonpositive_gamma_rejected(self, gamma):
        plan = plan_partition(60, 1.0, Fraction(2), 3.0)
        with pytest.raises(ValueError):
            sample_partition(complete_graph(60), plan, gamma, Fraction(3), 1.0, 10, seed=5)


class TestBootstrapConfig:
    def test_margins_derived_from_gamma(self):
        cfg = BootstrapConfig(gamma=0.2, oracle=OracleConfig(seed=1))
        assert cfg.margin_degree == pytest.approx(0.1)
        assert cfg.margin_oracle == pytest.approx(0.01)
        assert cfg.budget_fraction == pytest.approx(0.02)
        assert cfg.carry_fraction == pytest.approx(0.05)

    @pytest.mark.parametrize("gamma", [0.0, 1.0, -0.1])
    def test_bad_gamma(self, gamma):
        with pytest.raises(ValueError):
            BootstrapConfig(gamma=gamma, oracle=OracleConfig(seed=1))


class TestBootstrapPack:
    def test_complete_sixty(self):
        g = complete_graph(60)
        cfg = BootstrapConfig(gamma=0.1, oracle=OracleConfig(seed=9), C=3.0, max_resamples=10)
        res = bootstrap_pack(g, K3, 1.0, cfg)
        assert res.plan.sizes == (30, 15, 15)
        assert leftover_count(res.packing) == 0
        assert len(res.packing.copies) == 20
        assert [t.copies for t in res.trace] == [10, 5, 5]
        assert verify_packing(g, K3, res.packing).ok
        assert res.degree_ok and res.host_degree_ok and res.vq_within_cap
        assert res.degree_witness is None
        assert res.bound == pytest.approx(theorem_bound(1.0, Fraction(2), 0.1, 3.0))

    def test_single_stage_matches_greedy(self):
        g = gnp_generate(GnpConfig(n=8, p=0.39, seed=2))
        cfg = BootstrapConfig(gamma=0.5, oracle=OracleConfig(seed=7), C=1.0, max_resamples=50)
        res = bootstrap_pack(g, K3, 0.39, cfg)
        assert res.plan.q == 1
        pk = greedy_pack(g, K3, OracleConfig(seed=7))
        assert res.packing == pk

    def test_stage_accounting(self):
        g = gnp_generate(GnpConfig(n=400, p=0.3, seed=21))
        cfg = BootstrapConfig(gamma=0.5, oracle=OracleConfig(seed=4), C=3.0, max_resamples=20)
        res = bootstrap_pack(g, K3, 0.3, cfg)
        assert len(res.packing.copies) == sum(t.copies for t in res.trace)
        assert leftover_count(res.packing) == res.trace[-1].stage_leftover
        assert res.trace[0].carried_in == 0
        for prev, cur in zip(res.trace, res.trace[1:]):
            assert cur.carried_in == prev.stage_leftover
        for t in res.trace:
            assert t.pool_size == t.part_size + t.carried_in
            assert t.budget == pytest.approx(cfg.budget_fraction * t.part_size)
            assert t.within_budget == (t.stage_leftover <= t.budget)
        assert verify_packing(g, K3, res.packing).ok
        assert leftover_count(res.packing) <= res.bound

    def test_deterministic(self):
        g = gnp_generate(GnpConfig(n=400, p=0.3, seed=21))
        cfg = BootstrapConfig(gamma=0.5, oracle=OracleConfig(seed=4), C=3.0, max_resamples=20)
        assert bootstrap_pack(g, K3, 0.3, cfg) == bootstrap_pack(g, K3, 0.3, cfg)

    def test_copies_sorted_by_edges(self):
        g = gnp_generate(GnpConfig(n=400, p=0.3, seed=21))
        cfg = BootstrapConfig(gamma=0.5, oracle=OracleConfig(seed=4), C=3.0, max_resamples=20)
        res = bootstrap_pack(g, K3, 0.3, cfg)
        edge_keys = [c.edges for c in res.packing.copies]
        assert edge_keys == sorted(edge_keys)

    def test_custom_oracle_is_used(self):
        def exact_oracle(gg, hh, cfg):
            cps = enumerate_copies(gg, hh).copies
            chosen = oracles.exact_max_packing(gg, [c.vertices for c in cps])
            picked = tuple(cps[i] for i in chosen)
            covered = set()
            for c in picked:
                covered.update(c.vertices)
            return Packing(
                host_n=gg.n,
                copies=picked,
                leftover=tuple(sorted(set(range(gg.n)) - covered)),
            )

        g = complete_graph(12)
        cfg = BootstrapConfig(gamma=0.3, oracle=OracleConfig(seed=3), C=1.5, max_resamples=30)
        res = bootstrap_pack(g, K3, 1.0, cfg, oracle=exact_oracle)
        assert res.plan.sizes == (6, 6)
        assert leftover_count(res.packing) == 0
        assert verify_packing(g, K3, res.packing).ok

    def test_degree_failure_is_best_effort(self):
        # sparse enough that the sampled partition misses the degree bar,
        # yet the run completes and reports the miss instead of aborting
        g = gnp_generate(GnpConfig(n=400, p=0.3, seed=21))
        cfg = BootstrapConfig(gamma=0.9, oracle=OracleConfig(seed=4), C=3.0, max_resamples=2)
        res = bootstrap_pack(g, K3, 0.3, cfg)
        assert not res.degree_ok
        v, i, deficit = res.degree_witness
        assert 0 <= v < 400
        assert 0 <= i < res.plan.q
        assert deficit > 0
        assert res.resamples_used == 2
        assert verify_packing(g, K3, res.packing).ok

    def test_leftover_at_least_exact_minimum(self):
        g = gnp_generate(GnpConfig(n=12, p=0.9, seed=33))
        cps = enumerate_copies(g, K3).copies
        best = oracles.exact_max_packing(g, [c.vertices for c in cps])
        cfg = BootstrapConfig(gamma=0.3, oracle=OracleConfig(seed=3), C=1.5, max_resamples=30)
        res = bootstrap_pack(g, K3, 0.9, cfg)
        assert len(res.packing.copies) <= len(best)
