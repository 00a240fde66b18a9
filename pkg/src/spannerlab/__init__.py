"""spannerlab: light spanners in weighted graphs with exact rational arithmetic.

Construction (greedy scan, iterative pruning, weight-range scaling wrapper),
verification (exact stretch), exact optima by branch and bound, benchmark
instance generators, and a SAT-to-spanner threshold reduction.
"""
from .graphs import (
    INF,
    DistanceOracle,
    EdgeMultiset,
    Walk,
    WeightedGraph,
    apsp,
    concat,
    edge_key,
    floor_pow2,
    format_graph,
    is_connected,
    normalize_edges,
    parse_graph,
    read_graph,
    scale_to_integers,
    stretch,
    write_graph,
)
from .greedy import greedy_spanner
from .hardness import (
    Clause,
    PreprocessResult,
    ReductionOutput,
    SatInstance,
    assignment_to_spanner,
    parse_sat,
    preprocess,
    reduce_sat,
    spanner_to_assignment,
)
from .instances import gen_greedy_hard, gen_ladder, gen_multiladder
from .oracle import OracleCapError, OracleResult, exact_opt_spanner, is_spanner, sat_brute_force
from .prune import (
    CellCapError,
    DpEntry,
    HangingWitness,
    IterationLog,
    PruneState,
    RoundLog,
    WalkTables,
    contract_and_round,
    endpoint_hanging_sets,
    fill_tables,
    hanging_kappa,
    is_hanging,
    iterate_prune,
    log_star_ceil,
    prune,
    prune_round,
    prune_with_scaling,
    reconstruct,
    select_best_triple,
)

__version__ = "0.1.0"
