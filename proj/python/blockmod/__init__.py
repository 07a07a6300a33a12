"""Stochastic block model community detection by Bayesian modularity.

Labels are 1-based lists; node ids are 0-based.
"""

from ._core import (
    BudgetExceeded,
    DimensionError,
    Graph,
    ParseError,
    block_counts,
    coupling_matrix,
    exhaustive_map,
    g_p,
    generate_sbm,
    grad_g_zero,
    h_p,
    karate_club,
    kl_bernoulli,
    kl_poisson,
    ll_tilde,
    load_edge_list,
    misclassification,
    q_bayes,
    q_likelihood,
    q_prior,
    strong_recovery,
    tabu_search,
    tau,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "DimensionError",
    "Graph",
    "ParseError",
    "block_counts",
    "coupling_matrix",
    "exhaustive_map",
    "g_p",
    "generate_sbm",
    "grad_g_zero",
    "h_p",
    "karate_club",
    "kl_bernoulli",
    "kl_poisson",
    "ll_tilde",
    "load_edge_list",
    "misclassification",
    "q_bayes",
    "q_likelihood",
    "q_prior",
    "strong_recovery",
    "tabu_search",
    "tau",
]
