"""Spectral and counting tools for quasirandom k-uniform hypergraphs."""

from ._config import DimensionCapExceeded, dimension_cap
from .counting import (
    CountResult,
    count_circuits_trace,
    count_extension_oracle,
    count_extension_tensor,
    count_homomorphisms,
    count_labeled_copies,
    count_partite_edges,
    count_via_extension,
)
from .hypergraph import (
    Hypergraph,
    HypergraphFormatError,
    complete_hypergraph,
    degree_profile,
    edge_density_q,
    gen_coregular_sum,
    gen_random,
    is_coregular,
    new_hypergraph,
    ordered_edge_count,
    read_hypergraph,
    write_hypergraph,
)
from .multilinear import (
    FlatMatrix,
    MultilinearMap,
    adjacency_map,
    all_ones_map,
    evaluate,
    flatten_matrix,
    group,
    hopm_estimate,
    power,
    star_product,
)
from .linalg import symmetric_eigs
from .partitions import OrderedPartition, as_partition, is_refinement, proper_partitions
from .quasicheck import (
    ExperimentConfig,
    QuasiReport,
    check_count,
    check_cycle,
    check_disc,
    check_eig,
    check_expand,
    default_count_templates,
    run_experiment,
)
from .spectra import SpectralReport, graph_crosscheck, lambda1, lambda2, spectral_report
from .templates import (
    Template,
    are_isomorphic,
    build_cycle,
    build_cycle4_direct,
    build_partial_step,
    build_path,
    build_step,
    is_pi_linear,
    single_edge,
)

__all__ = [
    "adjacency_map",
    "all_ones_map",
    "are_isomorphic",
    "as_partition",
    "build_cycle",
    "build_cycle4_direct",
    "build_partial_step",
    "build_path",
    "build_step",
    "check_count",
    "check_cycle",
    "check_disc",
    "check_eig",
    "check_expand",
    "complete_hypergraph",
    "count_circuits_trace",
    "count_extension_oracle",
    "count_extension_tensor",
    "count_homomorphisms",
    "count_labeled_copies",
    "count_partite_edges",
    "count_via_extension",
    "CountResult",
    "default_count_templates",
    "degree_profile",
    "dimension_cap",
    "DimensionCapExceeded",
    "edge_density_q",
    "evaluate",
    "ExperimentConfig",
    "FlatMatrix",
    "flatten_matrix",
    "gen_coregular_sum",
    "gen_random",
    "graph_crosscheck",
    "group",
    "hopm_estimate",
    "Hypergraph",
    "HypergraphFormatError",
    "is_coregular",
    "is_pi_linear",
    "is_refinement",
    "lambda1",
    "lambda2",
    "MultilinearMap",
    "new_hypergraph",
    "ordered_edge_count",
    "OrderedPartition",
    "power",
    "proper_partitions",
    "QuasiReport",
    "read_hypergraph",
    "run_experiment",
    "single_edge",
    "spectral_report",
    "SpectralReport",
    "star_product",
    "symmetric_eigs",
    "Template",
    "write_hypergraph",
]

__version__ = "0.1.0"
