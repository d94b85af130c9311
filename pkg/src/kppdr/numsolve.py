"""Derivative-free SLEM minimization over per-orbit probabilities.

This is the numerical oracle for the closed forms: it never looks at the
block structure, only at the spectrum of the assembled nK x nK chain.

The objective is the spectral norm of ``P - J/N`` (equal to the SLEM on
feasible chains and convex everywhere) plus an exact penalty on negative
probabilities and holdings.  Nelder-Mead copes badly with the kinks of a
max-eigenvalue function, so each start runs a continuation: the max is
replaced by a log-sum-exp at temperature ``t`` and ``t`` is driven to zero,
warm-starting every stage from the previous one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from kppdr import chain, linalg
from kppdr.topology import TopologySpec, build_graph

PENALTY = 10.0
TEMPERATURES = (1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6, 1e-7, 0.0)
MAX_ORBITS = 32


@dataclass(frozen=True)
class SolveConfig:
    tol: float = 1e-7
    max_evals: int = 20000  # per start
    restarts: int = 5
    seed: int = 0
    warm_start: bool = True  # include the closed form among the starts

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_evals < 1 or self.restarts < 1:
            raise ValueError("max_evals and restarts must be at least 1")


@dataclass
class RestartRecord:
    start: str
    slem: float
    evals: int
    converged: bool


@dataclass
class SolveResult:
    spec: TopologySpec
    probs: tuple[float, ...]
    slem: float
    evals: int
    converged: bool
    restarts: list[RestartRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "probs": list(self.probs),
            "slem": self.slem,
            "evals": self.evals,
            "converged": self.converged,
            "restarts": [r.__dict__ for r in self.restarts],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


class _Objective:
    def __init__(self, spec: TopologySpec):
        g = build_graph(spec)
        self.laplacians = chain.orbit_laplacians(g)
        n_nodes = spec.node_count
        self.base = np.eye(n_nodes) - 1.0 / n_nodes
        self.evals = 0

    def deviation(self, p: np.ndarray) -> np.ndarray:
        return self.base - np.tensordot(p, self.laplacians, axes=1)

    def __call__(self, p: np.ndarray, t: float) -> float:
        self.evals += 1
        m = self.deviation(p)
        ev = linalg.eigenvalues_symmetric(m).eigenvalues
        hold = np.diagonal(m) + 1.0 / m.shape[0]
        viol = np.concatenate([-p, -hold])
        if t == 0.0:
            return max(ev[0], -ev[-1]) + PENALTY * np.clip(viol, 0.0, None).sum()
        both = np.concatenate([ev, -ev]) / t
        top = both.max()
        smooth = t * (top + math.log(np.exp(both - top).sum()))
        return smooth + PENALTY * t * np.logaddexp(0.0, viol / t).sum()


def _repair(spec: TopologySpec, p: np.ndarray) -> np.ndarray:
    """Clip to p >= 0 and shrink until every holding probability is nonnegative."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    load = 1.0 - chain.holding_probabilities(spec, p)
    worst = load.max()
    if worst > 1.0:
        p = p / worst
        # guard against the last ulp
        while chain.holding_probabilities(spec, p).min() < 0:
            p = p * (1 - 1e-15)
    return p


def _random_start(spec: TopologySpec, rng: np.random.Generator) -> np.ndarray:
    p = rng.uniform(0.05, 1.0, spec.layers)
    load = (1.0 - chain.holding_probabilities(spec, p)).max()
    return p * rng.uniform(0.3, 0.95) / load


def _starts(spec: TopologySpec, cfg: SolveConfig) -> list[tuple[str, np.ndarray]]:
    from kppdr.optimal import optimal_probabilities

    out = []
    if cfg.warm_start:
        res = optimal_probabilities(spec)
        if res.feasible:
            out.append(("closed-form", np.array(res.probs)))
    out.append(("metropolis-hastings", np.array(chain.metropolis_hastings(build_graph(spec)))))
    rng = np.random.default_rng(cfg.seed)
    while len(out) < cfg.restarts:
        out.append((f"random-{len(out)}", _random_start(spec, rng)))
    return out[: cfg.restarts]


def _run_start(spec: TopologySpec, x0: np.ndarray, cfg: SolveConfig) -> tuple[np.ndarray, int, bool]:
    f = _Objective(spec)
    x = x0.copy()
    dim = len(x)
    scale = 1.0 / spec.n
    converged = False
    for t in TEMPERATURES:
        budget = cfg.max_evals - f.evals
        if budget <= dim + 1:
            return x, f.evals, False
        step = max(10.0 * t, 1e-4) * scale
        simplex = np.vstack([x] + [x + step * e for e in np.eye(dim)])
        res = minimize(
            f,
            x,
            args=(t,),
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": 1e-11,
                "fatol": 1e-14,
                "maxfev": min(budget, 3000 * dim),
                "adaptive": True,
            },
        )
        x = res.x
        if t == 0.0:
            values = res.final_simplex[1]
            diameter = np.abs(res.final_simplex[0] - res.final_simplex[0][0]).max()
            converged = bool(values.max() - values.min() < cfg.tol or diameter < 1e-9)
    return x, f.evals, converged


def minimize_slem(spec: TopologySpec, cfg: SolveConfig | None = None) -> SolveResult:
    """Multi-start search for the per-orbit probabilities with the smallest SLEM.

    The best start wins; ties go to the earliest start.  Returned
    probabilities are always feasible and ``slem`` is recomputed from the
    assembled chain.
    """
    cfg = cfg or SolveConfig()
    if spec.layers > MAX_ORBITS:
        raise ValueError(f"at most {MAX_ORBITS} orbits are supported (got {spec.layers})")
    graph = build_graph(spec)
    best = None
    records = []
    total = 0
    for label, x0 in _starts(spec, cfg):
        x, evals, ok = _run_start(spec, x0, cfg)
        p = _repair(spec, x)
        value = chain.slem(chain.assemble(spec, p, graph))
        # never hand back something worse than the start itself
        p0 = _repair(spec, x0)
        value0 = chain.slem(chain.assemble(spec, p0, graph))
        if value0 < value:
            p, value = p0, value0
        total += evals
        records.append(RestartRecord(label, value, evals, ok))
        if best is None or value < best[1]:
            best = (p, value, ok)
    p, value, ok = best
    return SolveResult(spec, tuple(float(v) for v in p), value, total, ok, records)


@dataclass(frozen=True)
class ProfilePoint:
    p: float
    slem: float
    feasible: bool


def profile_objective(
    spec: TopologySpec,
    along_orbit: int,
    grid: Sequence[float],
    base: Sequence[float] | None = None,
) -> list[ProfilePoint]:
    """SLEM along one orbit (1-based layer number), others held at ``base``.

    ``base`` defaults to the closed-form optimum.  Infeasible points are kept
    and flagged; their value is the norm of ``P - J/N``.
    """
    from kppdr.optimal import optimal_probabilities

    if not 1 <= along_orbit <= spec.layers:
        raise ValueError(f"orbit must be in 1..{spec.layers}")
    probs = np.array(base if base is not None else optimal_probabilities(spec).probs, dtype=float)
    f = _Objective(spec)
    out = []
    for value in grid:
        q = probs.copy()
        q[along_orbit - 1] = value
        feasible = chain.is_feasible(spec, q)
        if feasible:
            s = chain.slem(chain.assemble(spec, q))
        else:
            s = linalg.deviation_norm(np.eye(spec.node_count) - np.tensordot(q, f.laplacians, axes=1))
        out.append(ProfilePoint(float(value), float(s), feasible))
    return out


def profile_to_csv(points: Sequence[ProfilePoint]) -> str:
    rows = ["p,slem,feasible"]
    rows += [f"{pt.p!r},{pt.slem!r},{int(pt.feasible)}" for pt in points]
    return "\n".join(rows) + "\n"
