"""Seeded trial runs, parameter sweeps, and result persistence.

A sweep walks the grid of (n, p) cells for one pattern and mode, runs
trials_per_cell independent trials per cell, and writes one CSV row per
trial plus a JSON summary with per-cell medians and a log-log scaling
diagnostic of the leftover against 1/p.

Per-trial seeding is fixed and documented: the trial seed is
stable_seed(base_seed, "cell", n, repr(p), "trial", trial_index), and the
generator / oracle / adversary seeds derive from it with the labels
"gnp", "oracle", "adversary".  Identical configs therefore reproduce every
record byte for byte, wall time aside.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from .adversary import (
    AdversaryConfig,
    adversary_construct,
    default_c,
    isolated_set_size,
    kimvu_report,
    verify_isolation,
)
from .bootstrap import BootstrapConfig, bootstrap_pack, regime_check, theorem_bound
from .graphs import GnpConfig, gnp_generate, min_degree
from .packing import OracleConfig, greedy_pack, leftover_count, local_search_improve, verify_packing
from .patterns import Pattern, pattern_from_edge_list, pattern_params, pattern_preset
from .seeds import check_seed, stable_seed

FORMAT_VERSION = "packbench-results-1"
MODES = ("bootstrap", "baseline", "adversary", "both-packers")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class EmitError(OSError):
    """Result files could not be written; message carries the path."""


def resolve_pattern(spec: str) -> Pattern:
    """Turn a pattern spec (preset name or edge-list path) into a Pattern."""
    import re

    if re.fullmatch(r"[KkCc]\d+", spec.strip()):
        return pattern_preset(spec)
    if not os.path.exists(spec):
        raise ConfigError(f"pattern {spec!r} is neither a preset nor a file")
    try:
        return pattern_from_edge_list(spec)
    except (ValueError, OSError) as exc:
        raise ConfigError(f"cannot load pattern from {spec!r}: {exc}") from exc


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of a sweep; every trial is a pure function of this."""

    pattern: str = "K3"
    n_values: tuple[int, ...] = (1000,)
    p_values: Optional[tuple[float, ...]] = None
    p_grid: Optional[tuple[float, float, int]] = None  # (p_min, p_max, points), geometric
    gamma: float = 0.3
    C: float = 3.0
    epsilon: float = 0.2
    c: Optional[float] = None  # None: derive per pattern via default_c
    trials_per_cell: int = 1
    base_seed: int = 0
    mode: str = "bootstrap"
    out_dir: str = "results"
    sweeps: int = 1
    swap_budget: int = 0
    max_resamples: int = 20
    x_override: Optional[int] = None
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.n_values:
            raise ConfigError("n_values must be non-empty")
        for n in self.n_values:
            if n < 1:
                raise ConfigError(f"n values must be >= 1, got {n}")
        if (self.p_values is None) == (self.p_grid is None):
            raise ConfigError("exactly one of p_values or p_grid must be given")
        if self.p_values is not None:
            if not self.p_values:
                raise ConfigError("p_values must be non-empty")
            for p in self.p_values:
                if not 0.0 < p <= 1.0:
                    raise ConfigError(f"p values must be in (0,1], got {p}")
        else:
            lo, hi, points = self.p_grid
            if not (0.0 < lo <= hi <= 1.0):
                raise ConfigError(f"p_grid bounds must satisfy 0 < lo <= hi <= 1, got {self.p_grid}")
            if points < 1 or (points < 2 and lo != hi):
                raise ConfigError(f"p_grid needs enough points for its range, got {self.p_grid}")
        if not 0.0 < self.gamma < 1.0:
            raise ConfigError(f"gamma must be in (0,1), got {self.gamma}")
        if self.C <= 0:
            raise ConfigError(f"C must be > 0, got {self.C}")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigError(f"epsilon must be in (0,1), got {self.epsilon}")
        if self.c is not None and self.c <= 0:
            raise ConfigError(f"c must be > 0, got {self.c}")
        if self.trials_per_cell < 1:
            raise ConfigError(f"trials_per_cell must be >= 1, got {self.trials_per_cell}")
        try:
            check_seed(self.base_seed)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.sweeps < 1:
            raise ConfigError(f"sweeps must be >= 1, got {self.sweeps}")
        if self.swap_budget < 0:
            raise ConfigError(f"swap_budget must be >= 0, got {self.swap_budget}")
        if self.max_resamples < 1:
            raise ConfigError(f"max_resamples must be >= 1, got {self.max_resamples}")
        if self.x_override is not None and self.x_override < 0:
            raise ConfigError(f"x_override must be >= 0, got {self.x_override}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def resolved_p_values(self) -> tuple[float, ...]:
        if self.p_values is not None:
            return tuple(float(p) for p in self.p_values)
        lo, hi, points = self.p_grid
        return tuple(float(v) for v in np.geomspace(lo, hi, points))

    def cells(self) -> list[tuple[int, float]]:
        return [(n, p) for n in self.n_values for p in self.resolved_p_values()]


# column table: name -> parse kind; order fixes the CSV layout
_COLUMNS: tuple[tuple[str, str], ...] = (
    ("format_version", "str"),
    ("mode", "str"),
    ("pattern", "str"),
    ("n", "int"),
    ("p", "float"),
    ("trial_index", "int"),
    ("base_seed", "int"),
    ("trial_seed", "int"),
    ("gamma", "float"),
    ("C", "float"),
    ("epsilon", "float"),
    ("c", "float"),
    ("sweeps", "int"),
    ("swap_budget", "int"),
    ("max_resamples", "int"),
    ("trials_per_cell", "int"),
    ("x_override", "opt_int"),
    ("regime", "str"),
    ("leftover", "opt_int"),
    ("copies", "opt_int"),
    ("baseline_leftover", "opt_int"),
    ("theorem_bound", "opt_float"),
    ("lower_bound_size", "opt_int"),
    ("verified", "opt_bool"),
    ("stage_count", "opt_int"),
    ("stage_leftovers", "opt_str"),
    ("shortfall_stages", "opt_str"),
    ("degree_ok", "opt_bool"),
    ("host_degree_ok", "opt_bool"),
    ("vq_within_cap", "opt_bool"),
    ("x_size", "opt_int"),
    ("deletions", "opt_int"),
    ("max_per_vertex_deletions", "opt_int"),
    ("min_degree_before", "opt_int"),
    ("min_degree_after", "opt_int"),
    ("degree_floor", "opt_float"),
    ("isolation_ok", "opt_bool"),
    ("kimvu_feasible", "opt_bool"),
    ("failure", "str"),
    ("wall_time_s", "float"),
)


@dataclass(frozen=True)
class TrialRecord:
    """One trial's coordinates and outcomes; one CSV row."""

    format_version: str
    mode: str
    pattern: str
    n: int
    p: float
    trial_index: int
    base_seed: int
    trial_seed: int
    gamma: float
    C: float
    epsilon: float
    c: float
    sweeps: int
    swap_budget: int
    max_resamples: int
    trials_per_cell: int
    x_override: Optional[int]
    regime: str
    leftover: Optional[int]
    copies: Optional[int]
    baseline_leftover: Optional[int]
    theorem_bound: Optional[float]
    lower_bound_size: Optional[int]
    verified: Optional[bool]
    stage_count: Optional[int]
    stage_leftovers: Optional[str]
    shortfall_stages: Optional[str]
    degree_ok: Optional[bool]
    host_degree_ok: Optional[bool]
    vq_within_cap: Optional[bool]
    x_size: Optional[int]
    deletions: Optional[int]
    max_per_vertex_deletions: Optional[int]
    min_degree_before: Optional[int]
    min_degree_after: Optional[int]
    degree_floor: Optional[float]
    isolation_ok: Optional[bool]
    kimvu_feasible: Optional[bool]
    failure: str
    wall_time_s: float


assert tuple(f.name for f in fields(TrialRecord)) == tuple(name for name, _ in _COLUMNS)


def _cell_value(value, kind: str) -> str:
    if value is None:
        return ""
    if kind in ("bool", "opt_bool"):
        return "true" if value else "false"
    if kind in ("float", "opt_float"):
        return repr(float(value))
    return str(value)


def _parse_value(text: str, kind: str):
    if kind.startswith("opt_") and text == "":
        return None
    base = kind[4:] if kind.startswith("opt_") else kind
    if base == "str":
        return text
    if base == "int":
        return int(text)
    if base == "float":
        return float(text)
    if base == "bool":
        if text not in ("true", "false"):
            raise ValueError(f"bad boolean cell {text!r}")
        return text == "true"
    raise AssertionError(f"unknown column kind {kind}")


def record_to_row(rec: TrialRecord) -> list[str]:
    return [_cell_value(getattr(rec, name), kind) for name, kind in _COLUMNS]


def row_to_record(row: list[str]) -> TrialRecord:
    if len(row) != len(_COLUMNS):
        raise ValueError(f"row has {len(row)} cells, expected {len(_COLUMNS)}")
    kwargs = {
        name: _parse_value(cell, kind)
        for (name, kind), cell in zip(_COLUMNS, row)
    }
    return TrialRecord(**kwargs)


def trial_seed_for(base_seed: int, n: int, p: float, trial_index: int) -> int:
    """The documented per-trial seed derivation; fixed for reproducibility."""
    return stable_seed(base_seed, "cell", n, repr(float(p)), "trial", trial_index)


def run_trial(cfg: ExperimentConfig, cell: tuple[int, float], trial_index: int) -> TrialRecord:
    """Run one trial of the configured mode on cell (n, p).

    Pipeline errors become the record's failure field instead of raising;
    fields the failed stage could not produce stay empty.
    """
    n, p = int(cell[0]), float(cell[1])
    t0 = time.perf_counter()
    tseed = trial_seed_for(cfg.base_seed, n, p, trial_index)
    out: dict = {
        "format_version": FORMAT_VERSION,
        "mode": cfg.mode,
        "pattern": cfg.pattern,
        "n": n,
        "p": p,
        "trial_index": trial_index,
        "base_seed": cfg.base_seed,
        "trial_seed": tseed,
        "gamma": cfg.gamma,
        "C": cfg.C,
        "epsilon": cfg.epsilon,
        "c": 0.0,
        "sweeps": cfg.sweeps,
        "swap_budget": cfg.swap_budget,
        "max_resamples": cfg.max_resamples,
        "trials_per_cell": cfg.trials_per_cell,
        "x_override": cfg.x_override,
        "regime": "",
        "leftover": None,
        "copies": None,
        "baseline_leftover": None,
        "theorem_bound": None,
        "lower_bound_size": None,
        "verified": None,
        "stage_count": None,
        "stage_leftovers": None,
        "shortfall_stages": None,
        "degree_ok": None,
        "host_degree_ok": None,
        "vq_within_cap": None,
        "x_size": None,
        "deletions": None,
        "max_per_vertex_deletions": None,
        "min_degree_before": None,
        "min_degree_after": None,
        "degree_floor": None,
        "isolation_ok": None,
        "kimvu_feasible": None,
        "failure": "",
    }
    try:
        h = resolve_pattern(cfg.pattern)
        params = pattern_params(h)
        c_resolved = cfg.c if cfg.c is not None else default_c(h, cfg.epsilon)
        out["c"] = c_resolved
        out["regime"] = regime_check(n, p, h, cfg.C).status
        out["theorem_bound"] = theorem_bound(p, params.m2, cfg.gamma, cfg.C)
        out["lower_bound_size"] = isolated_set_size(n, p, h, c_resolved)
        g = gnp_generate(GnpConfig(n=n, p=p, seed=stable_seed(tseed, "gnp")))
        oracle_cfg = OracleConfig(
            seed=stable_seed(tseed, "oracle"),
            sweeps=cfg.sweeps,
            swap_budget=cfg.swap_budget,
        )
        if cfg.mode in ("bootstrap", "both-packers"):
            bcfg = BootstrapConfig(
                gamma=cfg.gamma,
                oracle=oracle_cfg,
                C=cfg.C,
                max_resamples=cfg.max_resamples,
            )
            res = bootstrap_pack(g, h, p, bcfg)
            ver = verify_packing(g, h, res.packing)
            out["leftover"] = leftover_count(res.packing)
            out["copies"] = len(res.packing.copies)
            out["verified"] = ver.ok
            out["stage_count"] = len(res.trace)
            out["stage_leftovers"] = "|".join(str(t.stage_leftover) for t in res.trace)
            shortfalls = [str(t.stage) for t in res.trace if not t.within_budget]
            # empty joins to "", which the CSV layer cannot tell from None
            out["shortfall_stages"] = "|".join(shortfalls) if shortfalls else None
            out["degree_ok"] = res.degree_ok
            out["host_degree_ok"] = res.host_degree_ok
            out["vq_within_cap"] = res.vq_within_cap
        if cfg.mode in ("baseline", "both-packers"):
            pk = greedy_pack(g, h, oracle_cfg)
            if cfg.swap_budget > 0:
                pk = local_search_improve(g, h, pk, oracle_cfg)
            ver = verify_packing(g, h, pk)
            if cfg.mode == "baseline":
                out["leftover"] = leftover_count(pk)
                out["copies"] = len(pk.copies)
                out["verified"] = ver.ok
            else:
                out["baseline_leftover"] = leftover_count(pk)
                out["verified"] = bool(out["verified"]) and ver.ok
        if cfg.mode == "adversary":
            acfg = AdversaryConfig(
                seed=stable_seed(tseed, "adversary"),
                epsilon=cfg.epsilon,
                c=c_resolved,
                x_override=cfg.x_override,
            )
            before = min_degree(g)
            outcome = adversary_construct(g, h, p, acfg)
            iso = verify_isolation(outcome, h)
            out["x_size"] = len(outcome.x)
            out["deletions"] = len(outcome.deleted)
            out["max_per_vertex_deletions"] = max(outcome.per_vertex_deletions, default=0)
            out["min_degree_before"] = before
            out["min_degree_after"] = min_degree(outcome.degraded)
            out["degree_floor"] = (1.0 - cfg.epsilon) * n * p
            out["isolation_ok"] = iso.ok
            out["kimvu_feasible"] = kimvu_report(h, n, p, len(outcome.x)).feasible
    except Exception as exc:  # noqa: BLE001 - failures belong in the record
        out["failure"] = f"{type(exc).__name__}: {exc}"
    out["wall_time_s"] = time.perf_counter() - t0
    return TrialRecord(**out)


def _trial_task(args) -> TrialRecord:
    cfg, cell, trial_index = args
    return run_trial(cfg, cell, trial_index)


def _median(values):
    vals = [v for v in values if v is not None]
    return float(statistics.median(vals)) if vals else None


def _rate(flags):
    vals = [v for v in flags if v is not None]
    return (sum(1 for v in vals if v) / len(vals)) if vals else None


def summarize(cfg: ExperimentConfig, records: list[TrialRecord]) -> dict:
    """Per-cell medians plus the log-log leftover scaling diagnostic.

    The slope regresses ln(median leftover) on ln(1/p) over cells whose
    median leftover is >= 1; it is exploratory only (finite-n constants
    are unknown) and never gates anything.
    """
    cells = []
    for n, p in cfg.cells():
        sub = [r for r in records if r.n == n and r.p == p]
        ok = [r for r in sub if not r.failure]
        cells.append(
            {
                "n": n,
                "p": p,
                "trials": len(sub),
                "failures": len(sub) - len(ok),
                "median_leftover": _median(r.leftover for r in ok),
                "median_baseline_leftover": _median(r.baseline_leftover for r in ok),
                "theorem_bound": _median(r.theorem_bound for r in ok),
                "lower_bound_size": _median(r.lower_bound_size for r in ok),
                "verified_rate": _rate(r.verified for r in ok),
                "isolation_rate": _rate(r.isolation_ok for r in ok),
                "median_min_degree_after": _median(r.min_degree_after for r in ok),
                "max_per_vertex_deletions": max(
                    (r.max_per_vertex_deletions for r in ok
                     if r.max_per_vertex_deletions is not None),
                    default=None,
                ),
            }
        )
    xs, ys = [], []
    for cell in cells:
        med = cell["median_leftover"]
        if med is not None and med >= 1:
            xs.append(math.log(1.0 / cell["p"]))
            ys.append(math.log(med))
    if len(xs) >= 2 and len(set(xs)) >= 2:
        slope, intercept = np.polyfit(np.array(xs), np.array(ys), 1)
        resid = float(
            np.sqrt(np.mean((np.array(ys) - (slope * np.array(xs) + intercept)) ** 2))
        )
        scaling = {
            "slope": float(slope),
            "intercept": float(intercept),
            "residual_rms": resid,
            "cells_used": len(xs),
        }
    else:
        scaling = {
            "slope": None,
            "intercept": None,
            "residual_rms": None,
            "cells_used": len(xs),
        }
    return {
        "format_version": FORMAT_VERSION,
        "config": asdict(cfg),
        "cells": cells,
        "leftover_scaling": scaling,
    }


def run_sweep(cfg: ExperimentConfig) -> tuple[list[TrialRecord], dict]:
    """All cells x trials, in (cell, trial) order, plus the summary.

    workers > 1 runs trials in separate processes; results are collected
    in submission order so the output is identical to the serial run.
    """
    tasks = [
        (cfg, cell, t)
        for cell in cfg.cells()
        for t in range(cfg.trials_per_cell)
    ]
    if cfg.workers == 1:
        records = [run_trial(c, cell, t) for c, cell, t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_trial_task, tasks))
    return records, summarize(cfg, records)


def _config_comment(summary: dict) -> str:
    return json.dumps(summary["config"], sort_keys=True)


def emit_results(records: list[TrialRecord], summary: dict, path) -> dict:
    """Write results.csv and summary.json under path (a directory).

    The CSV carries the format version, the full config, and the column
    order in leading '#' comments, then one row per record in input
    order.  Returns {"csv": ..., "summary": ...} with the written paths.
    """
    try:
        os.makedirs(path, exist_ok=True)
        csv_path = os.path.join(path, "results.csv")
        json_path = os.path.join(path, "summary.json")
        buf = io.StringIO()
        buf.write(f"# packbench results format_version={FORMAT_VERSION}\n")
        buf.write(f"# config: {_config_comment(summary)}\n")
        buf.write("# columns: " + ",".join(name for name, _ in _COLUMNS) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([name for name, _ in _COLUMNS])
        for rec in records:
            writer.writerow(record_to_row(rec))
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise EmitError(f"cannot write results under {path!r}: {exc}") from exc
    return {"csv": csv_path, "summary": json_path}


def read_records_csv(path) -> list[TrialRecord]:
    """Parse a results.csv back into records (lossless round-trip)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = [
            row
            for row in csv.reader(ln for ln in fh if not ln.startswith("#"))
            if row
        ]
    if not rows:
        raise ValueError(f"no rows in {path!r}")
    header = rows[0]
    expected = [name for name, _ in _COLUMNS]
    if header != expected:
        raise ValueError(f"unexpected CSV header in {path!r}")
    return [row_to_record(row) for row in rows[1:]]
