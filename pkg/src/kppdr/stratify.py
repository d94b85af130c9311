"""Block structure of the chain under a Fourier transform over positions.

For the all-Full families (Symmetric and Cycle) the change of basis
``phi_{i,q} = n^{-1/2} sum_m w^{mq} e_{i,m}`` splits P into a K x K
quotient block (q = 0) and n-1 diagonal residual blocks (q != 0) whose
entries are the per-set holding probabilities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from kppdr import chain, linalg
from kppdr.topology import Family, TopologySpec

PARTITION_TOL = 1e-9


class UnsupportedFamilyError(ValueError):
    pass


def _require_full(spec: TopologySpec):
    if spec.family not in (Family.SYMMETRIC, Family.CYCLE):
        raise UnsupportedFamilyError(
            f"block decomposition is only available for symmetric and cycle networks, "
            f"not {spec.family.value}"
        )


def set_holdings(spec: TopologySpec, probs: Sequence[float]) -> np.ndarray:
    """Holding probability of each set, ``1 - n p_{i-1} - n p_i``."""
    _require_full(spec)
    p = np.asarray(chain._check_probs(spec, probs))
    k, n = spec.k, spec.n
    out = np.ones(k)
    for layer in range(1, spec.layers + 1):
        a, b = spec.layer_sets(layer)
        out[a - 1] -= n * p[layer - 1]
        out[b - 1] -= n * p[layer - 1]
    return out


def quotient_block(spec: TopologySpec, probs: Sequence[float]) -> np.ndarray:
    """The K x K block acting on position-averaged vectors.

    Tridiagonal for Symmetric; for Cycle the corner entries carry ``n p_K``.
    """
    _require_full(spec)
    p = np.asarray(chain._check_probs(spec, probs))
    n = spec.n
    q = np.diag(set_holdings(spec, p))
    for layer in range(1, spec.layers + 1):
        a, b = spec.layer_sets(layer)
        q[a - 1, b - 1] += n * p[layer - 1]
        q[b - 1, a - 1] += n * p[layer - 1]
    return linalg.symmetric_matrix(q)


def residual_blocks(spec: TopologySpec, probs: Sequence[float]) -> list[np.ndarray]:
    """The n-1 identical diagonal blocks, each returned as its diagonal (length K)."""
    h = set_holdings(spec, probs)
    return [h.copy() for _ in range(spec.n - 1)]


@dataclass
class PartitionReport:
    spec: TopologySpec
    probs: tuple[float, ...]
    full_spectrum: np.ndarray
    quotient_spectrum: np.ndarray
    residual_entries: np.ndarray
    max_discrepancy: float
    slem: float
    quotient_slem: float
    residual_slem: float | None
    tol: float = field(default=PARTITION_TOL)

    @property
    def in_quotient(self) -> bool:
        return abs(self.quotient_slem - self.slem) <= self.tol

    @property
    def in_residual(self) -> bool:
        return self.residual_slem is not None and abs(self.residual_slem - self.slem) <= self.tol

    @property
    def slem_location(self) -> str:
        if self.in_quotient and self.in_residual:
            return "both"
        return "quotient" if self.in_quotient else "residual"

    @property
    def consistent(self) -> bool:
        return self.max_discrepancy < self.tol

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "probs": list(self.probs),
            "full_spectrum": self.full_spectrum.tolist(),
            "quotient_spectrum": self.quotient_spectrum.tolist(),
            "residual_entries": self.residual_entries.tolist(),
            "max_discrepancy": self.max_discrepancy,
            "slem": self.slem,
            "slem_location": self.slem_location,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def verify_spectrum_partition(spec: TopologySpec, probs: Sequence[float], tol: float = PARTITION_TOL) -> PartitionReport:
    """Compare block spectra against the spectrum of the assembled nK x nK chain."""
    probs = chain._check_probs(spec, probs)
    full = chain.spectrum(chain.assemble(spec, probs))
    quot = linalg.eigenvalues_symmetric(quotient_block(spec, probs)).eigenvalues
    resid = np.concatenate(residual_blocks(spec, probs)) if spec.n > 1 else np.zeros(0)
    merged = np.sort(np.concatenate([quot, resid]))[::-1]
    discrepancy = float(np.abs(merged - full).max())
    return PartitionReport(
        spec=spec,
        probs=probs,
        full_spectrum=full,
        quotient_spectrum=quot,
        residual_entries=resid,
        max_discrepancy=discrepancy,
        slem=linalg.slem_of_spectrum(linalg.Spectrum(full)),
        # the leading quotient eigenvalue is the stationary 1
        quotient_slem=float(np.abs(quot[1:]).max()) if len(quot) > 1 else 0.0,
        residual_slem=float(np.abs(resid).max()) if resid.size else None,
        tol=tol,
    )
