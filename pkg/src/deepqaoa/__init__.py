"""Deep-circuit QAOA: exact statevector local search and landscape diagnostics."""

from .objective import (
    Graph,
    ObjectiveSpec,
    ObjectiveTable,
    TracelessObjective,
    gen_bimodal,
    gen_maxcut,
    gen_qubo,
    gen_random_graph,
    gen_uniform,
    normalize_sup,
    traceless,
)
from .search import SearchConfig, local_search, run

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "ObjectiveSpec",
    "ObjectiveTable",
    "SearchConfig",
    "TracelessObjective",
    "gen_bimodal",
    "gen_maxcut",
    "gen_qubo",
    "gen_random_graph",
    "gen_uniform",
    "local_search",
    "normalize_sup",
    "run",
    "traceless",
]
