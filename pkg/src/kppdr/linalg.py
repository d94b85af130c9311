"""Dense symmetric eigenvalues via cyclic Jacobi rotations.

Matrices in this package are small (a few hundred rows at most), so a
robust O(N^3)-per-sweep Jacobi solver is preferred over anything clever.
Only eigenvalues are produced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 100


class EigenConvergenceError(RuntimeError):
    """Raised when the Jacobi sweeps fail to drive the off-diagonal down."""

    def __init__(self, residual: float, sweeps: int):
        self.residual = residual
        self.sweeps = sweeps
        super().__init__(
            f"Jacobi eigensolver did not converge after {sweeps} sweeps "
            f"(off-diagonal residual {residual:.3e})"
        )


class SymmetryError(ValueError):
    pass


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # descending

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if ev.ndim != 1:
            raise ValueError("eigenvalues must be one-dimensional")
        if np.any(np.diff(ev) > 0):
            raise ValueError("eigenvalues must be sorted in descending order")
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    def __len__(self):
        return len(self.eigenvalues)


def symmetric_matrix(entries, atol: float = 1e-12) -> np.ndarray:
    """Return a read-only, exactly symmetric float copy of ``entries``.

    Raises SymmetryError if ``entries`` is not square or differs from its
    transpose by more than ``atol`` times its largest entry.
    """
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise SymmetryError(f"expected a non-empty square matrix, got shape {a.shape}")
    scale = max(np.abs(a).max(), 1.0)
    asym = np.abs(a - a.T).max()
    if asym > atol * scale:
        raise SymmetryError(f"matrix is not symmetric (max |A - A^T| = {asym:.3e})")
    a = 0.5 * (a + a.T)
    a.setflags(write=False)
    return a


@njit(cache=True)
def _cyclic_jacobi(a, tol, max_sweeps):
    n = a.shape[0]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            if abs(a[i, j]) > scale:
                scale = abs(a[i, j])
    off = 0.0
    if scale == 0.0:
        return np.zeros(n), 0.0, 0, True
    # work on a / max|a| so the stopping test cannot underflow
    for i in range(n):
        for j in range(n):
            a[i, j] /= scale
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                if abs(a[i, j]) > off:
                    off = abs(a[i, j])
        if off <= tol:
            d = np.empty(n)
            for i in range(n):
                d[i] = a[i, i] * scale
            return d, off * scale, sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    d = np.empty(n)
    for i in range(n):
        d[i] = a[i, i] * scale
    return d, off * scale, max_sweeps, False


def eigenvalues_symmetric(m, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS) -> Spectrum:
    """All eigenvalues of the symmetric matrix ``m``, sorted descending.

    Iterates cyclic Jacobi sweeps until every off-diagonal entry is below
    ``tol * max|m|``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.array(symmetric_matrix(m), dtype=np.float64)
    d, residual, sweeps, ok = _cyclic_jacobi(a, float(tol), int(max_sweeps))
    if not ok:
        raise EigenConvergenceError(float(residual), int(sweeps))
    return Spectrum(np.sort(d)[::-1].copy())


def slem_of_spectrum(s: Spectrum, atol: float = 1e-9) -> float:
    """Second largest eigenvalue modulus, max(lambda_2, -lambda_N).

    The leading eigenvalue must be 1 (a stochastic spectrum).
    """
    ev = s.eigenvalues
    if len(ev) < 2:
        raise ValueError("SLEM is undefined for a spectrum of length 1")
    if abs(ev[0] - 1.0) > atol:
        raise ValueError(f"leading eigenvalue {ev[0]!r} is not 1; not a stochastic spectrum")
    return float(max(ev[1], -ev[-1]))


def deviation_norm(m) -> float:
    """Spectral norm of ``m - J/N`` for a symmetric ``m`` with unit row sums.

    Equals the SLEM whenever ``m`` is a valid symmetric stochastic matrix,
    and stays well defined (and convex in the entries) when the holding
    probabilities go negative.
    """
    a = np.asarray(m, dtype=float)
    n = a.shape[0]
    ev = eigenvalues_symmetric(a - 1.0 / n).eigenvalues
    return float(max(ev[0], -ev[-1]))
