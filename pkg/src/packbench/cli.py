"""Command-line interface.

Subcommands: params, count-copies, pack, bootstrap, adversary, sweep.
Options may come from flags or from a JSON config file via --config;
flags win over config values.  The PACKBENCH_OUT environment variable
supplies the default output directory for sweep results.  Exit codes:
0 success, 1 configuration/validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

from .adversary import (
    AdversaryConfig,
    adversary_construct,
    default_c,
    kimvu_report,
    verify_isolation,
)
from .bootstrap import BootstrapConfig, bootstrap_pack, regime_check
from .copies import enumerate_copies
from .experiments import (
    ConfigError,
    EmitError,
    ExperimentConfig,
    emit_results,
    resolve_pattern,
    run_sweep,
)
from .graphs import GnpConfig, GraphFormatError, gnp_generate, min_degree, read_edge_list_file
from .packing import OracleConfig, greedy_pack, leftover_count, local_search_improve, verify_packing
from .patterns import PatternError, pattern_params
from .seeds import stable_seed


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the contract wants 1
    def error(self, message):
        raise ConfigError(message)


_REQUIRED = object()


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}") from exc


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path!r} must hold a JSON object")
    return data


def _effective(args, defaults: dict, config: dict) -> dict:
    """Merge flag values over config values over defaults."""
    unknown = set(config) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    eff = {}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        if flag is not None:
            eff[key] = flag
        elif key in config:
            val = config[key]
            eff[key] = tuple(val) if isinstance(val, list) else val
        elif default is _REQUIRED:
            raise ConfigError(f"missing required option: {key.replace('_', '-')}")
        else:
            eff[key] = default() if callable(default) else default
    return eff


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


def _frac(x) -> str:
    return str(x)


def _cmd_params(args, config) -> None:
    eff = _effective(args, {"pattern": _REQUIRED}, config)
    h = resolve_pattern(eff["pattern"])
    pp = pattern_params(h)
    _emit(
        {
            "pattern": h.name,
            "v": pp.v,
            "e": pp.e,
            "m2": _frac(pp.m2),
            "m2_float": float(pp.m2),
            "chi": pp.chi,
            "sigma": pp.sigma,
            "chi_cr": _frac(pp.chi_cr),
            "chi_cr_float": float(pp.chi_cr),
        }
    )


def _cmd_count_copies(args, config) -> None:
    eff = _effective(
        args,
        {"pattern": _REQUIRED, "host": _REQUIRED, "limit": None},
        config,
    )
    g = read_edge_list_file(eff["host"])
    h = resolve_pattern(eff["pattern"])
    limit = eff["limit"]
    result = enumerate_copies(g, h, limit=limit)
    _emit(
        {
            "host_n": g.n,
            "host_m": g.edge_count,
            "pattern": h.name,
            "count": len(result.copies),
            "truncated": result.truncated,
        }
    )


def _cmd_pack(args, config) -> None:
    eff = _effective(
        args,
        {
            "pattern": _REQUIRED,
            "host": _REQUIRED,
            "seed": 0,
            "sweeps": 1,
            "swap_budget": 0,
            "out": None,
        },
        config,
    )
    g = read_edge_list_file(eff["host"])
    h = resolve_pattern(eff["pattern"])
    cfg = OracleConfig(seed=eff["seed"], sweeps=eff["sweeps"], swap_budget=eff["swap_budget"])
    pk = greedy_pack(g, h, cfg)
    if cfg.swap_budget > 0:
        pk = local_search_improve(g, h, pk, cfg)
    verdict = verify_packing(g, h, pk)
    out_path = eff["out"]
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as fh:
            for c in pk.copies:
                fh.write(" ".join(str(v) for v in c.vertices) + "\n")
    _emit(
        {
            "host_n": g.n,
            "pattern": h.name,
            "copies": len(pk.copies),
            "leftover": leftover_count(pk),
            "verified": verdict.ok,
            "out": out_path,
        }
    )


def _cmd_bootstrap(args, config) -> None:
    eff = _effective(
        args,
        {
            "pattern": _REQUIRED,
            "n": _REQUIRED,
            "p": _REQUIRED,
            "gamma": 0.3,
            "C": 3.0,
            "seed": 0,
            "max_resamples": 20,
            "sweeps": 1,
            "swap_budget": 0,
        },
        config,
    )
    h = resolve_pattern(eff["pattern"])
    g = gnp_generate(
        GnpConfig(n=eff["n"], p=eff["p"], seed=stable_seed(eff["seed"], "gnp"))
    )
    cfg = BootstrapConfig(
        gamma=eff["gamma"],
        C=eff["C"],
        max_resamples=eff["max_resamples"],
        oracle=OracleConfig(
            seed=stable_seed(eff["seed"], "oracle"),
            sweeps=eff["sweeps"],
            swap_budget=eff["swap_budget"],
        ),
    )
    res = bootstrap_pack(g, h, eff["p"], cfg)
    verdict = verify_packing(g, h, res.packing)
    _emit(
        {
            "n": g.n,
            "p": eff["p"],
            "pattern": h.name,
            "regime": regime_check(g.n, eff["p"], h, eff["C"]).status,
            "plan": {
                "q": res.plan.q,
                "sizes": list(res.plan.sizes),
                "threshold": res.plan.threshold,
            },
            "stages": [asdict(t) for t in res.trace],
            "copies": len(res.packing.copies),
            "leftover": leftover_count(res.packing),
            "bound": res.bound,
            "verified": verdict.ok,
            "degree_ok": res.degree_ok,
            "host_degree_ok": res.host_degree_ok,
            "vq_within_cap": res.vq_within_cap,
            "resamples_used": res.resamples_used,
        }
    )


def _cmd_adversary(args, config) -> None:
    eff = _effective(
        args,
        {
            "pattern": _REQUIRED,
            "n": _REQUIRED,
            "p": _REQUIRED,
            "epsilon": 0.2,
            "c": None,
            "x_size": None,
            "seed": 0,
        },
        config,
    )
    h = resolve_pattern(eff["pattern"])
    c_used = eff["c"] if eff["c"] is not None else default_c(h, eff["epsilon"])
    g = gnp_generate(
        GnpConfig(n=eff["n"], p=eff["p"], seed=stable_seed(eff["seed"], "gnp"))
    )
    cfg = AdversaryConfig(
        seed=stable_seed(eff["seed"], "adversary"),
        epsilon=eff["epsilon"],
        c=c_used,
        x_override=eff["x_size"],
    )
    before = min_degree(g)
    outcome = adversary_construct(g, h, eff["p"], cfg)
    verdict = verify_isolation(outcome, h)
    report = kimvu_report(h, g.n, eff["p"], len(outcome.x))
    rep = asdict(report)
    rep["m2"] = _frac(report.m2)
    rep["ei_bounds"] = list(report.ei_bounds)
    _emit(
        {
            "n": g.n,
            "p": eff["p"],
            "pattern": h.name,
            "epsilon": eff["epsilon"],
            "c": c_used,
            "x_size": len(outcome.x),
            "deletions": len(outcome.deleted),
            "max_per_vertex_deletions": max(outcome.per_vertex_deletions, default=0),
            "deletion_cap": eff["epsilon"] * g.n * eff["p"],
            "min_degree_before": before,
            "min_degree_after": min_degree(outcome.degraded),
            "degree_floor": (1.0 - eff["epsilon"]) * g.n * eff["p"],
            "isolation_ok": verdict.ok,
            "kimvu": rep,
        }
    )


def _cmd_sweep(args, config) -> None:
    eff = _effective(
        args,
        {
            "pattern": "K3",
            "n_values": (1000,),
            "p_values": None,
            "p_min": None,
            "p_max": None,
            "p_points": None,
            "gamma": 0.3,
            "C": 3.0,
            "epsilon": 0.2,
            "c": None,
            "trials": 1,
            "base_seed": 0,
            "mode": "bootstrap",
            "out_dir": lambda: os.environ.get("PACKBENCH_OUT", "results"),
            "sweeps": 1,
            "swap_budget": 0,
            "max_resamples": 20,
            "x_override": None,
            "workers": 1,
            "no_figures": False,
        },
        config,
    )
    grid_given = any(eff[k] is not None for k in ("p_min", "p_max", "p_points"))
    p_grid = None
    if grid_given:
        if any(eff[k] is None for k in ("p_min", "p_max", "p_points")):
            raise ConfigError("p-min, p-max, p-points must be given together")
        p_grid = (eff["p_min"], eff["p_max"], eff["p_points"])
    cfg = ExperimentConfig(
        pattern=eff["pattern"],
        n_values=tuple(eff["n_values"]),
        p_values=tuple(eff["p_values"]) if eff["p_values"] is not None else None,
        p_grid=p_grid,
        gamma=eff["gamma"],
        C=eff["C"],
        epsilon=eff["epsilon"],
        c=eff["c"],
        trials_per_cell=eff["trials"],
        base_seed=eff["base_seed"],
        mode=eff["mode"],
        out_dir=eff["out_dir"],
        sweeps=eff["sweeps"],
        swap_budget=eff["swap_budget"],
        max_resamples=eff["max_resamples"],
        x_override=eff["x_override"],
        workers=eff["workers"],
    )
    records, summary = run_sweep(cfg)
    paths = emit_results(records, summary, cfg.out_dir)
    figures: list[str] = []
    if not eff["no_figures"]:
        from .figures import render_sweep_figures

        figures = render_sweep_figures(records, summary, cfg.out_dir)
    _emit(
        {
            "records": len(records),
            "cells": len(cfg.cells()),
            "failures": sum(1 for r in records if r.failure),
            "csv": paths["csv"],
            "summary": paths["summary"],
            "figures": figures,
        }
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="packbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", help="JSON config file; flags override its keys")
        sp.add_argument("--pattern", help="preset (K3..K10, C3..C10) or edge-list path")

    sp = sub.add_parser("params", help="print exact pattern parameters as JSON")
    add_common(sp)

    sp = sub.add_parser("count-copies", help="count pattern copies in a host edge list")
    add_common(sp)
    sp.add_argument("--host", help="host graph edge-list path")
    sp.add_argument("--limit", type=int, help="stop after this many copies")

    sp = sub.add_parser("pack", help="greedy-pack a host edge list")
    add_common(sp)
    sp.add_argument("--host", help="host graph edge-list path")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--sweeps", type=int)
    sp.add_argument("--swap-budget", dest="swap_budget", type=int)
    sp.add_argument("--out", help="write the packing as lines of vertex ids")

    sp = sub.add_parser("bootstrap", help="partitioned packing run on G(n,p)")
    add_common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--C", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--max-resamples", dest="max_resamples", type=int)
    sp.add_argument("--sweeps", type=int)
    sp.add_argument("--swap-budget", dest="swap_budget", type=int)

    sp = sub.add_parser("adversary", help="edge-deletion isolation run on G(n,p)")
    add_common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--c", type=float)
    sp.add_argument("--x-size", dest="x_size", type=int, help="explicit planted-set size")
    sp.add_argument("--seed", type=int)

    sp = sub.add_parser("sweep", help="run a full experiment sweep")
    add_common(sp)
    sp.add_argument("--n-values", dest="n_values", type=_int_list)
    sp.add_argument("--p-values", dest="p_values", type=_float_list)
    sp.add_argument("--p-min", dest="p_min", type=float)
    sp.add_argument("--p-max", dest="p_max", type=float)
    sp.add_argument("--p-points", dest="p_points", type=int)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--C", type=float)
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--c", type=float)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--base-seed", dest="base_seed", type=int)
    sp.add_argument("--mode", choices=["bootstrap", "baseline", "adversary", "both-packers"])
    sp.add_argument("--out-dir", dest="out_dir")
    sp.add_argument("--sweeps", type=int)
    sp.add_argument("--swap-budget", dest="swap_budget", type=int)
    sp.add_argument("--max-resamples", dest="max_resamples", type=int)
    sp.add_argument("--x-override", dest="x_override", type=int)
    sp.add_argument("--workers", type=int)
    sp.add_argument(
        "--no-figures",
        dest="no_figures",
        action="store_const",
        const=True,
        help="skip figure rendering",
    )
    return parser


_HANDLERS = {
    "params": _cmd_params,
    "count-copies": _cmd_count_copies,
    "pack": _cmd_pack,
    "bootstrap": _cmd_bootstrap,
    "adversary": _cmd_adversary,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _load_config(getattr(args, "config", None))
        _HANDLERS[args.command](args, config)
        return 0
    except EmitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, PatternError, GraphFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
