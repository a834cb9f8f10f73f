"""Optimal coalition structures over graphs: every block of the returned
partition must induce a connected subgraph, and the partition maximizes
the sum of block values."""

from .games import (Game, Partition, Value, coalition_value, make_cfss_bound,
                    make_supersub_game, make_tsp_bound, partition_value,
                    random_table_game, upper_bound_cfss, upper_bound_tsp)
from .graph import DisconnectedGraphError, Graph, make_graph
from .harness import (VerifyReport, matrix_instance, run_bench,
                      solve_instance, verify_matrix)
from .instances import (InstanceFile, InstanceFormatError, gen_instance,
                        model_edges, parse_instance, parse_instance_text,
                        realize_instance, write_instance)
from .pseudotree import Pseudotree, breadth_first_position, build_pseudotree
from .solvers import (BudgetExceededError, DpTable, InternalInvariantError,
                      SearchStats, SolverResult, brute_force_best, cfss,
                      d_tsp, dype, dype_star, enumerate_feasible_structures,
                      reconstruct, structure_masks, tsp, tsp_star_step)

__version__ = "0.1.0"

__all__ = [
    "Game",
    "Partition",
    "Value",
    "Graph",
    "make_graph",
    "DisconnectedGraphError",
    "Pseudotree",
    "build_pseudotree",
    "breadth_first_position",
    "coalition_value",
    "partition_value",
    "make_supersub_game",
    "random_table_game",
    "upper_bound_tsp",
    "upper_bound_cfss",
    "make_tsp_bound",
    "make_cfss_bound",
    "DpTable",
    "SolverResult",
    "SearchStats",
    "BudgetExceededError",
    "InternalInvariantError",
    "brute_force_best",
    "enumerate_feasible_structures",
    "structure_masks",
    "dype",
    "dype_star",
    "tsp",
    "tsp_star_step",
    "d_tsp",
    "cfss",
    "reconstruct",
    "InstanceFile",
    "InstanceFormatError",
    "parse_instance",
    "parse_instance_text",
    "realize_instance",
    "write_instance",
    "gen_instance",
    "model_edges",
    "solve_instance",
    "verify_matrix",
    "VerifyReport",
    "matrix_instance",
    "run_bench",
    "__version__",
]
