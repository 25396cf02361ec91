"""Structure learning for sparse binary Ising models.

Thin Python layer over the C++ core: graph topologies, exact and Gibbs
samplers, the L0-L2 constrained and L1-based per-node estimators, and the
Monte-Carlo recovery experiment driver.
"""

from ._core import (
    conditional_prob,
    eval_ise,
    eval_logistic,
    exact_sample,
    fit_graph,
    gibbs_sample,
    graph_stats,
    lattice_topology,
    log_partition,
    project_l1_ball,
    prox_l0l2,
    random_regular_topology,
    run_experiment,
)

__all__ = [
    "conditional_prob",
    "eval_ise",
    "eval_logistic",
    "exact_sample",
    "fit_graph",
    "gibbs_sample",
    "graph_stats",
    "lattice_topology",
    "log_partition",
    "project_l1_ball",
    "prox_l0l2",
    "random_regular_topology",
    "run_experiment",
]
