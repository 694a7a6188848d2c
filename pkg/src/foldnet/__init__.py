"""Fold-depth skip wiring: schedules, DAG unrolling, coherence and path spectra."""

from .arch_graph import (
    ArchGraph,
    SummationSet,
    build_dag,
    complete_dag,
    graph_from_json,
    graph_to_json,
    load_graph,
    save_graph,
    summation_set,
    validate,
)
from .arch_spec import ArchSpec, build_arch_spec, from_json, to_json
from .errors import FormatError
from .fold_schedule import FoldSchedule, build_schedule, skip_offset
from .metrics import (
    Dominance,
    DominanceReport,
    PathSpectrum,
    TrophicReport,
    cdf,
    dominance_compare,
    incoherence,
    path_spectrum,
    receptive_diversity,
    trophic_levels,
)

__version__ = "0.1.0"

__all__ = [
    "ArchGraph",
    "ArchSpec",
    "Dominance",
    "DominanceReport",
    "FoldSchedule",
    "FormatError",
    "PathSpectrum",
    "SummationSet",
    "TrophicReport",
    "build_arch_spec",
    "build_dag",
    "build_schedule",
    "cdf",
    "complete_dag",
    "dominance_compare",
    "from_json",
    "graph_from_json",
    "graph_to_json",
    "incoherence",
    "load_graph",
    "path_spectrum",
    "receptive_diversity",
    "save_graph",
    "skip_offset",
    "summation_set",
    "to_json",
    "trophic_levels",
    "validate",
]
