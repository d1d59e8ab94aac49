"""Workbench for pattern packings in sparse random graphs.

The package covers random host generation, exact pattern parameters,
copy enumeration, greedy/local-search packing, a partitioned bootstrap
packer, an edge-deletion adversary with a feasibility calculator, and a
sweep harness with CSV/JSON persistence and figures.
"""

from .adversary import (
    AdversaryConfig,
    AdversaryOutcome,
    KimVuReport,
    adversary_construct,
    clique_lower_bound,
    cycle_lower_bound,
    default_c,
    isolated_set_size,
    kimvu_report,
    verify_isolation,
)
from .bootstrap import (
    BootstrapConfig,
    BootstrapResult,
    DegreeConditionError,
    PartitionPlan,
    RegimeReport,
    RegimeViolation,
    StageTrace,
    bootstrap_pack,
    plan_partition,
    regime_check,
    sample_partition,
    theorem_bound,
)
from .copies import (
    Copy,
    EnumResult,
    PatternIndex,
    copies_meeting,
    copies_meeting_set,
    copies_through,
    enumerate_copies,
    enumerate_in_pool,
)
from .experiments import (
    ConfigError,
    EmitError,
    ExperimentConfig,
    TrialRecord,
    emit_results,
    read_records_csv,
    resolve_pattern,
    run_sweep,
    run_trial,
    summarize,
    trial_seed_for,
)
from .graphs import (
    GnpConfig,
    Graph,
    GraphFormatError,
    complete_graph,
    cycle_graph,
    degree_into,
    delete_edges,
    gnp_generate,
    induced_subgraph,
    min_degree,
    read_edge_list,
    read_edge_list_file,
    write_edge_list,
    write_edge_list_file,
)
from .packing import (
    OracleConfig,
    Packing,
    Verdict,
    greedy_pack,
    leftover_count,
    local_search_improve,
    verify_packing,
)
from .patterns import (
    Pattern,
    PatternError,
    PatternParams,
    chromatic_number,
    clique_m2_closed_form,
    critical_chromatic,
    density_m2,
    pattern_from_edge_list,
    pattern_params,
    pattern_preset,
    sigma_min_class,
)
from .seeds import stable_seed

__version__ = "0.1.0"

__all__ = [
    "AdversaryConfig",
    "AdversaryOutcome",
    "BootstrapConfig",
    "BootstrapResult",
    "ConfigError",
    "Copy",
    "DegreeConditionError",
    "EmitError",
    "EnumResult",
    "ExperimentConfig",
    "GnpConfig",
    "Graph",
    "GraphFormatError",
    "KimVuReport",
    "OracleConfig",
    "Packing",
    "Pattern",
    "PatternError",
    "PatternIndex",
    "PatternParams",
    "PartitionPlan",
    "RegimeReport",
    "RegimeViolation",
    "StageTrace",
    "TrialRecord",
    "Verdict",
    "adversary_construct",
    "bootstrap_pack",
    "chromatic_number",
    "clique_lower_bound",
    "clique_m2_closed_form",
    "complete_graph",
    "copies_meeting",
    "copies_meeting_set",
    "copies_through",
    "critical_chromatic",
    "cycle_graph",
    "cycle_lower_bound",
    "default_c",
    "degree_into",
    "delete_edges",
    "density_m2",
    "emit_results",
    "enumerate_copies",
    "enumerate_in_pool",
    "gnp_generate",
    "greedy_pack",
    "induced_subgraph",
    "isolated_set_size",
    "kimvu_report",
    "leftover_count",
    "local_search_improve",
    "min_degree",
    "pattern_from_edge_list",
    "pattern_params",
    "pattern_preset",
    "plan_partition",
    "read_edge_list",
    "read_edge_list_file",
    "read_records_csv",
    "regime_check",
    "resolve_pattern",
    "run_sweep",
    "run_trial",
    "sample_partition",
    "sigma_min_class",
    "stable_seed",
    "summarize",
    "theorem_bound",
    "trial_seed_for",
    "verify_packing",
    "verify_isolation",
    "write_edge_list",
    "write_edge_list_file",
]
