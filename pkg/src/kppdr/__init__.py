"""Fastest mixing Markov chains on K-partite pseudo-distance-regular networks."""

from kppdr.topology import Family, LayerKind, TopologySpec, Graph, build_graph
from kppdr.chain import TransitionMatrix, assemble, slem, metropolis_hastings
from kppdr.optimal import optimal_probabilities, dual_certificate

__all__ = [
    "Family",
    "LayerKind",
    "TopologySpec",
    "Graph",
    "build_graph",
    "TransitionMatrix",
    "assemble",
    "slem",
    "metropolis_hastings",
    "optimal_probabilities",
    "dual_certificate",
]
