"""Symmetric transition matrices built from per-orbit edge probabilities."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from kppdr import linalg
from kppdr.topology import Graph, TopologySpec, build_graph

ROW_SUM_TOL = 1e-12
HOLDING_TOL = 1e-12


class InfeasibleError(ValueError):
    """Some node would have a negative holding probability (or an edge a negative weight)."""

    def __init__(self, message: str, node=None, holding: float | None = None):
        super().__init__(message)
        self.node = node
        self.holding = holding


@dataclass(frozen=True)
class TransitionMatrix:
    matrix: np.ndarray
    spec: TopologySpec
    probs: tuple[float, ...]

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def holdings(self) -> np.ndarray:
        return np.diagonal(self.matrix).copy()

    def to_csv(self) -> str:
        return "".join(",".join(repr(float(x)) for x in row) + "\n" for row in self.matrix)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "probs": list(self.probs),
            "matrix": self.matrix.tolist(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _check_probs(spec: TopologySpec, probs: Sequence[float]) -> tuple[float, ...]:
    probs = tuple(float(p) for p in np.atleast_1d(np.asarray(probs, dtype=float)))
    if len(probs) != spec.layers:
        raise ValueError(f"expected {spec.layers} orbit probabilities, got {len(probs)}")
    return probs


def holding_probabilities(spec: TopologySpec, probs: Sequence[float], graph: Graph | None = None) -> np.ndarray:
    """Diagonal of the chain: one minus the probability mass leaving each node."""
    probs = _check_probs(spec, probs)
    g = graph or build_graph(spec)
    out = np.zeros(spec.node_count)
    for e in g.edges:
        w = probs[e.layer - 1]
        out[e.u] += w
        out[e.v] += w
    return 1.0 - out


def is_feasible(spec: TopologySpec, probs: Sequence[float]) -> bool:
    probs = _check_probs(spec, probs)
    return min(probs) >= 0 and holding_probabilities(spec, probs).min() >= -HOLDING_TOL


def assemble(spec: TopologySpec, probs: Sequence[float], graph: Graph | None = None) -> TransitionMatrix:
    """Transition matrix with ``probs[j-1]`` on every edge of layer ``j``.

    Raises InfeasibleError naming the first node whose holding probability is
    negative.
    """
    probs = _check_probs(spec, probs)
    for layer, p in enumerate(probs, start=1):
        if p < 0:
            raise InfeasibleError(f"negative probability {p!r} on layer {layer}")
    g = graph or build_graph(spec)
    n_nodes = spec.node_count
    m = np.zeros((n_nodes, n_nodes))
    for e in g.edges:  # edges are stored in layer order
        w = probs[e.layer - 1]
        m[e.u, e.v] = w
        m[e.v, e.u] = w
    hold = 1.0 - m.sum(axis=1)
    worst = int(np.argmin(hold))
    if hold[worst] < -HOLDING_TOL:
        label = g.label(worst)
        raise InfeasibleError(
            f"node {label} has negative holding probability {float(hold[worst])!r}",
            node=label,
            holding=float(hold[worst]),
        )
    m[np.diag_indices(n_nodes)] = np.maximum(hold, 0.0)
    if np.abs(m.sum(axis=1) - 1.0).max() > ROW_SUM_TOL:
        raise InfeasibleError("row sums deviate from 1 beyond tolerance")
    m.setflags(write=False)
    return TransitionMatrix(m, spec, probs)


def slem(p: TransitionMatrix | np.ndarray) -> float:
    """Second largest eigenvalue modulus of a transition matrix."""
    m = p.matrix if isinstance(p, TransitionMatrix) else p
    return linalg.slem_of_spectrum(linalg.eigenvalues_symmetric(m))


def spectrum(p: TransitionMatrix | np.ndarray) -> np.ndarray:
    m = p.matrix if isinstance(p, TransitionMatrix) else p
    return linalg.eigenvalues_symmetric(m).eigenvalues


def metropolis_hastings(g: Graph) -> tuple[float, ...]:
    """Metropolis-Hastings weights for the uniform target, one per orbit.

    Each edge gets ``min(1/d_u, 1/d_v)``; these are constant on orbits.
    """
    deg = g.degrees()
    out = []
    for layer in sorted(g.orbits):
        values = {min(1.0 / deg[g.edges[i].u], 1.0 / deg[g.edges[i].v]) for i in g.orbits[layer]}
        if len(values) != 1:
            raise AssertionError(f"Metropolis weights not constant on orbit {layer}: {values}")
        out.append(values.pop())
    return tuple(out)


def orbit_laplacians(g: Graph) -> np.ndarray:
    """Stack of graph Laplacians, one per orbit, so that ``P = I - sum_j p_j L_j``."""
    n_nodes = g.node_count
    out = np.zeros((len(g.orbits), n_nodes, n_nodes))
    for e in g.edges:
        lap = out[e.layer - 1]
        lap[e.u, e.u] += 1
        lap[e.v, e.v] += 1
        lap[e.u, e.v] -= 1
        lap[e.v, e.u] -= 1
    return out
