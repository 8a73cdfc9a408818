"""Flow-driven spectral chaos: uncertainty propagation through stochastic ODEs."""

from ._core import (
    Distribution,
    FscError,
    NodeSet,
    cost_model,
    dump_config,
    gauss_grid,
    gauss_rule,
    mc_nodes,
    orthogonalize,
    problem_variants,
    run,
)

__all__ = [
    "Distribution",
    "FscError",
    "NodeSet",
    "cost_model",
    "dump_config",
    "gauss_grid",
    "gauss_rule",
    "mc_nodes",
    "orthogonalize",
    "problem_variants",
    "run",
]
