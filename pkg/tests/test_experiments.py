import dataclasses
import json

import pytest

from packbench.experiments import (
    ConfigError,
    EmitError,
    FORMAT_VERSION,
    ExperimentConfig,
    emit_results,
    read_records_csv,
    record_to_row,
    resolve_pattern,
    row_to_record,
    run_sweep,
    run_trial,
    trial_seed_for,
)
from packbench.patterns import pattern_preset
from packbench.seeds import stable_seed


def baseline_config(**overrides):
    base = dict(
        pattern="K3",
        n_values=(60,),
        p_values=(1.0,),
        gamma=0.1,
        C=3.0,
        epsilon=0.2,
        c=None,
        trials_per_cell=2,
        base_seed=7,
        mode="baseline",
        out_dir="unused",
        sweeps=5,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def strip_wall_time(records):
    return [dataclasses.replace(r, wall_time_s=0.0) for r in records]


class TestConfigValidation:
    def test_p_values_and_grid_mutually_exclusive(self):
        with pytest.raises(ConfigError):
            baseline_config(p_values=(0.1,), p_grid=(0.1, 0.5, 3))
        with pytest.raises(ConfigError):
            baseline_config(p_values=None, p_grid=None)

    def test_empty_grids_rejected(self):
        with pytest.raises(ConfigError):
            baseline_config(n_values=())
        with pytest.raises(ConfigError):
            baseline_config(p_values=())

    def test_bad_mode(self):
        with pytest.raises(ConfigError):
            baseline_config(mode="turbo")

    def test_bad_trials(self):
        with pytest.raises(ConfigError):
            baseline_config(trials_per_cell=0)

    def test_bad_p_range(self):
        with pytest.raises(ConfigError):
            baseline_config(p_values=(0.0,))
        with pytest.raises(ConfigError):
            baseline_config(p_values=(1.5,))

    def test_bad_grid_bounds(self):
        with pytest.raises(ConfigError):
            baseline_config(p_values=None, p_grid=(0.5, 0.1, 3))
        with pytest.raises(ConfigError):
            baseline_config(p_values=None, p_grid=(0.1, 0.5, 1))

    def test_grid_expansion_is_geometric(self):
        cfg = baseline_config(p_values=None, p_grid=(0.01, 1.0, 5))
        ps = [p for _, p in cfg.cells()]
        assert ps[0] == pytest.approx(0.01)
        assert ps[-1] == pytest.approx(1.0)
        ratios = [b / a for a, b in zip(ps, ps[1:])]
        for r in ratios:
            assert r == pytest.approx(ratios[0])


class TestResolvePattern:
    def test_preset_names(self):
        assert resolve_pattern("K4") == pattern_preset("K4")
        assert resolve_pattern("c6") == pattern_preset("C6")

    def test_edge_list_path(self, tmp_path):
        path = tmp_path / "diamond.txt"
        path.write_text("4 5\n0 1\n0 2\n1 2\n1 3\n2 3\n")
        h = resolve_pattern(str(path))
        assert h.v == 4 and h.e == 5

    def test_missing_path(self):
        with pytest.raises(ConfigError):
            resolve_pattern("no/such/pattern.txt")

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("not a header\n")
        with pytest.raises(ConfigError):
            resolve_pattern(str(path))


class TestTrialSeed:
    def test_documented_formula(self):
        assert trial_seed_for(7, 60, 1.0, 0) == stable_seed(
            7, "cell", 60, repr(1.0), "trial", 0
        )

    def test_distinct_across_cells_and_trials(self):
        seeds = {
            trial_seed_for(7, n, p, t)
            for n in (50, 60)
            for p in (0.3, 0.5)
            for t in (0, 1, 2)
        }
        assert len(seeds) == 12


class TestRunTrial:
    def test_baseline_dense_perfect(self):
        cfg = baseline_config()
        rec = run_trial(cfg, (60, 1.0), 0)
        assert rec.mode == "baseline"
        assert rec.leftover == 0
        assert rec.copies == 20
        assert rec.verified is True
        assert rec.failure == ""
        assert rec.format_version == FORMAT_VERSION
        assert rec.trial_seed == trial_seed_for(7, 60, 1.0, 0)

    def test_identical_reruns_match_except_wall_time(self):
        cfg = baseline_config()
        a = run_trial(cfg, (60, 1.0), 0)
        b = run_trial(cfg, (60, 1.0), 0)
        assert dataclasses.replace(a, wall_time_s=0.0) == dataclasses.replace(
            b, wall_time_s=0.0
        )

    def test_adversary_trivial_override(self):
        cfg = baseline_config(mode="adversary", n_values=(30,), p_values=(0.5,), x_override=0)
        rec = run_trial(cfg, (30, 0.5), 0)
        assert rec.x_size == 0
        assert rec.deletions == 0
        assert rec.min_degree_before == rec.min_degree_after
        assert rec.isolation_ok is True

    def test_adversary_fields_populated(self):
        cfg = baseline_config(mode="adversary", n_values=(40,), p_values=(0.4,), x_override=3, base_seed=3)
        rec = run_trial(cfg, (40, 0.4), 0)
        assert rec.x_size == 3
        assert rec.deletions > 0
        assert rec.max_per_vertex_deletions > 0
        assert rec.min_degree_after <= rec.min_degree_before
        assert rec.isolation_ok is True
        assert rec.leftover is None

    def test_both_packers_shares_host(self):
        cfg = baseline_config(
            mode="both-packers", n_values=(400,), p_values=(0.3,), gamma=0.5, base_seed=5, sweeps=1
        )
        rec = run_trial(cfg, (400, 0.3), 0)
        assert rec.leftover is not None
        assert rec.baseline_leftover is not None
        assert rec.stage_count >= 2
        assert rec.stage_leftovers.count("|") == rec.stage_count - 1
        assert int(rec.stage_leftovers.split("|")[-1]) == rec.leftover

    def test_regime_violation_captured_not_raised(self):
        cfg = baseline_config(mode="bootstrap", n_values=(80,), p_values=(0.3,), gamma=0.3, sweeps=1)
        rec = run_trial(cfg, (80, 0.3), 0)
        assert "RegimeViolation" in rec.failure
        assert rec.leftover is None
        assert rec.copies is None
        assert rec.regime == "below"


class TestSweepAndSummary:
    def test_record_count_and_order(self):
        cfg = baseline_config(n_values=(30, 60), p_values=(0.8, 1.0), trials_per_cell=2, sweeps=1)
        records, _ = run_sweep(cfg)
        assert len(records) == 8
        keys = [(r.n, r.p, r.trial_index) for r in records]
        assert keys == sorted(keys)

    def test_single_cell_summary_echoes_record(self):
        cfg = baseline_config(trials_per_cell=1)
        records, summary = run_sweep(cfg)
        cell = summary["cells"][0]
        assert cell["trials"] == 1
        assert cell["failures"] == 0
        assert cell["median_leftover"] == records[0].leftover
        assert cell["verified_rate"] == 1.0
        assert summary["format_version"] == FORMAT_VERSION
        assert summary["config"]["pattern"] == "K3"

    def test_workers_match_serial(self):
        serial = baseline_config(
            mode="both-packers", n_values=(200,), p_values=(0.3, 0.4), gamma=0.5,
            base_seed=5, sweeps=1, trials_per_cell=2,
        )
        parallel = dataclasses.replace(serial, workers=2)
        rs, _ = run_sweep(serial)
        rp, _ = run_sweep(parallel)
        assert strip_wall_time(rs) == strip_wall_time(rp)

    def test_scaling_slope_on_leftover_cells(self):
        cfg = baseline_config(
            mode="bootstrap", n_values=(300,), p_values=(0.08, 0.12, 0.18, 0.27),
            gamma=0.5, C=1.0, trials_per_cell=3, base_seed=11, sweeps=1,
        )
        _, summary = run_sweep(cfg)
        scaling = summary["leftover_scaling"]
        assert scaling["cells_used"] == 4
        assert scaling["slope"] > 0
        assert scaling["residual_rms"] >= 0

    def test_scaling_absent_without_leftovers(self):
        cfg = baseline_config(trials_per_cell=1)
        _, summary = run_sweep(cfg)
        assert summary["leftover_scaling"]["slope"] is None
        assert summary["leftover_scaling"]["cells_used"] == 0


class TestPersistence:
    def test_csv_round_trip(self, tmp_path):
        cfg = baseline_config(mode="both-packers", n_values=(200,), p_values=(0.3,), gamma=0.5, sweeps=1)
        records, summary = run_sweep(cfg)
        paths = emit_results(records, summary, tmp_path)
        assert read_records_csv(paths["csv"]) == records

    def test_round_trip_covers_failures_and_nones(self, tmp_path):
        cfg = baseline_config(mode="bootstrap", n_values=(80,), p_values=(0.3,), gamma=0.3, sweeps=1, trials_per_cell=1)
        records, summary = run_sweep(cfg)
        assert records[0].failure
        paths = emit_results(records, summary, tmp_path)
        assert read_records_csv(paths["csv"]) == records

    def test_header_comments_and_format_version(self, tmp_path):
        cfg = baseline_config(trials_per_cell=1)
        records, summary = run_sweep(cfg)
        paths = emit_results(records, summary, tmp_path)
        lines = open(paths["csv"]).read().splitlines()
        assert lines[0] == f"# packbench results format_version={FORMAT_VERSION}"
        assert lines[1].startswith("# config: ")
        assert lines[2].startswith("# columns: ")
        assert lines[3].startswith("format_version,mode,pattern,n,p,")
        embedded = json.loads(lines[1][len("# config: "):])
        assert embedded["base_seed"] == 7

    def test_summary_json_content(self, tmp_path):
        cfg = baseline_config(trials_per_cell=1)
        records, summary = run_sweep(cfg)
        paths = emit_results(records, summary, tmp_path)
        loaded = json.loads(open(paths["summary"]).read())
        assert loaded == json.loads(json.dumps(summary))

    def test_emissions_byte_identical_modulo_wall_time(self, tmp_path):
        cfg = baseline_config(trials_per_cell=2)
        r1, s1 = run_sweep(cfg)
        r2, s2 = run_sweep(cfg)
        p1 = emit_results(strip_wall_time(r1), s1, tmp_path / "a")
        p2 = emit_results(strip_wall_time(r2), s2, tmp_path / "b")
        assert open(p1["csv"], "rb").read() == open(p2["csv"], "rb").read()
        assert open(p1["summary"], "rb").read() == open(p2["summary"], "rb").read()

    def test_row_record_inverse(self):
        cfg = baseline_config(mode="adversary", n_values=(30,), p_values=(0.5,), x_override=2, trials_per_cell=1)
        rec = run_trial(cfg, (30, 0.5), 0)
        assert row_to_record(record_to_row(rec)) == rec

    def test_emit_error_on_unwritable_target(self, tmp_path):
        blocker = tmp_path / "blocked"
        blocker.write_text("a file, not a directory")
        cfg = baseline_config(trials_per_cell=1)
        records, summary = run_sweep(cfg)
        with pytest.raises(EmitError):
            emit_results(records, summary, blocker / "sub")
