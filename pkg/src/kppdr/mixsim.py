"""Mixing-trace simulations: how fast node values approach their average."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from kppdr.chain import TransitionMatrix

FLOOR = 1e-280  # close to float underflow; traces are accurate well below 1e-16


class NumericalFloorError(ValueError):
    pass


@dataclass(frozen=True)
class TrialConfig:
    trials: int = 200
    iterations: int = 100
    seed: int = 0
    init: str = "uniform"  # or "point-mass"
    aggregate: str = "arithmetic"  # or "geometric"

    def __post_init__(self):
        if self.trials < 1 or self.iterations < 1:
            raise ValueError("trials and iterations must be at least 1")
        if self.init not in ("uniform", "point-mass"):
            raise ValueError(f"unknown init mode {self.init!r}")
        if self.aggregate not in ("arithmetic", "geometric"):
            raise ValueError(f"unknown aggregate {self.aggregate!r}")


@dataclass
class MixingTrace:
    distances: np.ndarray  # index t = 0..T
    meta: dict = field(default_factory=dict)
    redraws: int = 0

    @property
    def iterations(self) -> int:
        return len(self.distances) - 1

    def to_csv(self) -> str:
        rows = ["iteration,distance"]
        rows += [f"{t},{d!r}" for t, d in enumerate(self.distances.tolist())]
        return "\n".join(rows) + "\n"


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    # one substream per trial index, independent of the total trial count
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def initial_vectors(n_nodes: int, cfg: TrialConfig) -> tuple[np.ndarray, int]:
    """Columns are the initial node values for each trial; also returns the redraw count."""
    if n_nodes < 2:
        raise ValueError("need at least two nodes; a single value is already mixed")
    x0 = np.empty((n_nodes, cfg.trials))
    redraws = 0
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg.seed, trial)
        while True:
            if cfg.init == "uniform":
                x = rng.uniform(0.0, 1.0, n_nodes)
            else:
                x = np.zeros(n_nodes)
                x[rng.integers(n_nodes)] = 1.0
            if np.ptp(x) > 0:
                break
            redraws += 1
        x0[:, trial] = x
    return x0, redraws


def simulate(p: TransitionMatrix | np.ndarray, cfg: TrialConfig | None = None) -> MixingTrace:
    """Average normalized distance ``||x_t - mean(x_0)|| / ||x_0 - mean(x_0)||`` over trials."""
    cfg = cfg or TrialConfig()
    m = p.matrix if isinstance(p, TransitionMatrix) else np.asarray(p, dtype=float)
    x, redraws = initial_vectors(m.shape[0], cfg)
    mean = x.mean(axis=0)
    norm0 = np.linalg.norm(x - mean, axis=0)
    d = np.empty((cfg.iterations + 1, cfg.trials))
    d[0] = 1.0
    # P1 = 1, so x_t - mean = P^t (x_0 - mean); iterating the re-centred
    # deviation keeps round-off from pinning the distance near 1e-16
    y = x - mean
    for t in range(1, cfg.iterations + 1):
        y = m @ y
        y -= y.mean(axis=0)
        d[t] = np.linalg.norm(y, axis=0) / norm0
    if cfg.aggregate == "arithmetic":
        dist = d.mean(axis=1)
    else:
        with np.errstate(divide="ignore"):
            dist = np.exp(np.log(d).mean(axis=1))
    meta = {"config": cfg.__dict__.copy()}
    if isinstance(p, TransitionMatrix):
        meta["spec"] = p.spec.to_dict()
        meta["probs"] = list(p.probs)
    return MixingTrace(dist, meta, redraws)


def asymptotic_rate(trace: MixingTrace | Sequence[float], window: int = 50) -> float:
    """Per-step contraction estimated from the log-linear tail of the trace."""
    d = np.asarray(trace.distances if isinstance(trace, MixingTrace) else trace, dtype=float)
    if window < 2 or len(d) <= window:
        raise ValueError(f"need 2 <= window < len(trace) (window={window}, len={len(d)})")
    tail = d[-window:]
    if np.any(tail <= FLOOR):
        raise NumericalFloorError(
            "trace tail has reached the numerical floor; use a shorter horizon or smaller window"
        )
    t = np.arange(len(d) - window, len(d), dtype=float)
    slope = np.polyfit(t, np.log(tail), 1)[0]
    return float(math.exp(slope))


@dataclass
class ComparisonReport:
    labels: list[str]
    ordering: list[list[str]]  # per iteration, labels from fastest to slowest
    first_crossover: int | None
    rates: list[float | None]
    same_tail_rate: bool | None
    rate_tol: float

    def to_dict(self) -> dict:
        return {
            "labels": self.labels,
            "ordering": self.ordering,
            "first_crossover": self.first_crossover,
            "rates": self.rates,
            "same_tail_rate": self.same_tail_rate,
            "rate_tol": self.rate_tol,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def compare(
    traces: Sequence[MixingTrace],
    labels: Sequence[str] | None = None,
    window: int = 50,
    rate_tol: float = 0.02,
) -> ComparisonReport:
    """Rank traces per iteration and compare their tail rates.

    ``first_crossover`` is the first iteration after t=1 whose ranking
    differs from the ranking at t=1.
    """
    if not traces:
        raise ValueError("nothing to compare")
    lengths = {len(tr.distances) for tr in traces}
    if len(lengths) != 1:
        raise ValueError(f"traces have different lengths: {sorted(lengths)}")
    labels = list(labels) if labels is not None else [f"trace-{i}" for i in range(len(traces))]
    if len(labels) != len(traces):
        raise ValueError("one label per trace is required")
    d = np.vstack([tr.distances for tr in traces])
    ordering = [[labels[i] for i in np.argsort(d[:, t], kind="stable")] for t in range(d.shape[1])]
    crossover = None
    if d.shape[1] > 1:
        ref = ordering[1]
        crossover = next((t for t in range(2, d.shape[1]) if ordering[t] != ref), None)
    rates = []
    for tr in traces:
        try:
            rates.append(asymptotic_rate(tr, min(window, len(tr.distances) - 1)))
        except (NumericalFloorError, ValueError):
            rates.append(None)
    known = [r for r in rates if r is not None]
    same = None
    if len(known) == len(rates) and known:
        same = bool(max(known) - min(known) <= rate_tol * max(known))
    return ComparisonReport(labels, ordering, crossover, rates, same, rate_tol)


def long_format_csv(traces: Sequence[MixingTrace], labels: Sequence[str]) -> str:
    rows = ["label,iteration,distance"]
    for label, tr in zip(labels, traces):
        rows += [f"{label},{t},{d!r}" for t, d in enumerate(tr.distances.tolist())]
    return "\n".join(rows) + "\n"
