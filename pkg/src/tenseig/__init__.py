"""Extreme H- and Z-eigenvalues of even-order symmetric tensors by adaptive cubic regularization."""

from .acrcet import EigenReport, SolverConfig, Status, run, solve_extreme
from .hypergraph import (
    HypergraphTensor,
    Kind,
    UniformHypergraph,
    generate_flower,
    generate_loose_cycle,
    load_hypergraph,
)
from .objective import Metric, ObjectiveContext, evaluate
from .power import PowerConfig, power_extreme, sshopm
from .tensor import DenseSymmetricTensor, load_tensor, qi_example

__all__ = [
    "DenseSymmetricTensor",
    "EigenReport",
    "HypergraphTensor",
    "Kind",
    "Metric",
    "ObjectiveContext",
    "PowerConfig",
    "SolverConfig",
    "Status",
    "UniformHypergraph",
    "evaluate",
    "generate_flower",
    "generate_loose_cycle",
    "load_hypergraph",
    "load_tensor",
    "power_extreme",
    "qi_example",
    "run",
    "solve_extreme",
    "sshopm",
]
