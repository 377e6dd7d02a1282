"""Deterministic parallel greedy maximal independent set and maximal matching.

For a fixed random priority order, the root-set and prefix-based parallel
algorithms return exactly the set the sequential greedy loop returns, on any
number of threads.
"""

from .graph import Graph, GraphSpec, build, generate_gnm, generate_rmat, load, store
from .matching import parallel_rootset_mm, prefix_greedy_mm, sequential_greedy_mm, sort_incidence
from .mis import luby, parallel_rootset, prefix_greedy, sequential_greedy
from .priority import PrefixSchedule, Priority, dependence_length, longest_path, prefix_sparsity, random_priority
from .stats import RunStats
from .verify import check_mis, check_mm, lex_first_mm_oracle, lex_first_oracle

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphSpec", "build", "generate_gnm", "generate_rmat", "load", "store",
    "Priority", "PrefixSchedule", "random_priority", "dependence_length", "longest_path", "prefix_sparsity",
    "sequential_greedy", "parallel_rootset", "prefix_greedy", "luby",
    "sequential_greedy_mm", "parallel_rootset_mm", "prefix_greedy_mm", "sort_incidence",
    "check_mis", "check_mm", "lex_first_oracle", "lex_first_mm_oracle",
    "RunStats",
]
