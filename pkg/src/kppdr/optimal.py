"""Closed-form optimal probabilities and the dual optimality certificate.

The certificate covers the symmetric family with K >= 3.  The quotient block
is written as ``P1 = I - sum_i p_i a_i a_i^T`` with ``a_i = sqrt(n)(e_i -
e_{i+1})``, and the dual matrix is ``Z = z z^T`` with ``z = (z1, z2)``,
``z1 = sum_i a_i alpha_i``, ``z2 = sum_i a'_i alpha_i``.  At
``theta = pi/K`` the coordinates follow the sine recursion
``a_j = sin(j theta)/sin(theta) a_1`` and the slackness, dual feasibility
and zero-gap equations can be checked numerically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from kppdr import chain, linalg
from kppdr.topology import Family, LayerKind, TopologySpec

CERTIFICATE_TOL = 1e-8


@dataclass(frozen=True)
class OptimalResult:
    spec: TopologySpec
    probs: tuple[float, ...]
    slem: float
    theta: float | None
    feasible: bool
    assembled_slem: float | None  # None when the probabilities are infeasible
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "probs": list(self.probs),
            "slem": self.slem,
            "theta": self.theta,
            "feasible": self.feasible,
            "assembled_slem": self.assembled_slem,
            "notes": list(self.notes),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def cycle_cosines(k: int) -> tuple[float, float]:
    """cos(2 pi / K) and cos(2 floor(K/2) pi / K)."""
    return math.cos(2 * math.pi / k), math.cos(2 * (k // 2) * math.pi / k)


def cycle_closed_form(k: int, n: int) -> tuple[float, float]:
    """(p, slem) for the cycle network from the two extreme Laplacian modes."""
    c1, c2 = cycle_cosines(k)
    return 1.0 / (n * (2.0 - c1 - c2)), (c1 - c2) / (2.0 - c1 - c2)


def optimal_probabilities(spec: TopologySpec) -> OptimalResult:
    k, n = spec.k, spec.n
    fam = spec.family
    theta = None
    notes = []
    if fam is Family.SYMMETRIC:
        if k >= 3 or n == 1:
            # n == 1 is the path graph, whose optimum is 1/2 on every edge for any K
            p, s, theta = 1.0 / (2 * n), math.cos(math.pi / k), math.pi / k
            probs = (p,) * spec.layers
            if k == 2:
                notes.append("K=2, n=1 is the two-node path: p = 1/2 gives SLEM 0")
        else:
            probs, s = (2.0 / (3 * n),), 1.0 / 3.0
    elif fam is Family.SEMI_SYMMETRIC:
        full = 1.0 / (2 * n) if k >= 4 else 2.0 / (3 * n)
        s = math.cos(math.pi / k) if k >= 4 else (1 + math.sqrt(13)) / 6
        theta = math.pi / k if k >= 4 else None
        probs = tuple(full if kind is LayerKind.FULL else 0.5 for kind in spec.pattern)
    elif fam is Family.CYCLE:
        if k == 3 and n >= 2:
            # the residual blocks (1 - 2np) dominate; balance |1 - 3np| against |1 - 2np|
            probs, s = (2.0 / (5 * n),) * 3, 0.2
            notes.append("K=3, n>=2: the Laplacian closed form gives SLEM 0 but the residual "
                         "blocks hold 1/3; balanced optimum p = 2/(5n), SLEM 1/5")
        else:
            p, s = cycle_closed_form(k, n)
            probs = (p,) * k
    elif k == 4 and n >= 2:
        # strait pairs in the residual blocks give eigenvalue 1 - n p_full, which
        # forces n p_full = 1/2; the strait value 1/4 then balances the quotient
        probs = tuple(1.0 / (2 * n) if kind is LayerKind.FULL else 0.25 for kind in spec.pattern)
        s = 0.5
        notes.append("K=4, n>=2: residual blocks rule out the cycle SLEM 1/3; optimum SLEM 1/2")
    else:
        p, s = cycle_closed_form(k, n)
        # strait edges carry n times the full-edge probability so the
        # quotient chain is the uniform cycle
        probs = tuple(p if kind is LayerKind.FULL else n * p for kind in spec.pattern)
    feasible = bool(chain.is_feasible(spec, probs))
    assembled = chain.slem(chain.assemble(spec, probs)) if feasible else None
    if not feasible:
        notes.append("closed-form probabilities give a negative holding probability")
    return OptimalResult(spec, probs, s, theta, feasible, assembled, tuple(notes))


def alpha_vectors(k: int, n: int) -> np.ndarray:
    """Rows are alpha_i = sqrt(n) (e_i - e_{i+1}), i = 1..K-1."""
    out = np.zeros((k - 1, k))
    for i in range(k - 1):
        out[i, i] = math.sqrt(n)
        out[i, i + 1] = -math.sqrt(n)
    return out


def gram_matrix(k: int, n: int) -> np.ndarray:
    """Gram matrix of the alpha vectors: 2n on the diagonal, -n beside it."""
    if k < 2:
        raise ValueError("K must be at least 2")
    g = 2.0 * n * np.eye(k - 1)
    idx = np.arange(k - 2)
    g[idx, idx + 1] = -n
    g[idx + 1, idx] = -n
    return g


def printed_seed_coordinates(theta: float, n: int) -> tuple[float, float]:
    """An unnormalized (a_1, a'_1) pair, kept for comparison only.

    It satisfies the sine recursions but not the trace constraints, and no
    common rescaling repairs it (see ``dual_certificate``).
    """
    c, s2 = math.cos(theta), math.sin(theta) ** 2
    return (1 + c) / (1 - c) * s2 / n, (1 - c) / (1 + c) * s2 / n


def normalized_seed_coordinates(k: int, n: int, theta: float) -> tuple[float, float]:
    """(a_1, a'_1) solving z1'z1 + z2'z2 = 1 and z1'z1 - z2'z2 = cos(theta).

    With p = 1/(2n) the coordinate vectors are eigenvectors of the Gram
    matrix (eigenvalues 2n(1 -+ s)) and ``sum_j sin^2(j pi/K) = K/2``, so
    ``z1'z1 = nK(1-s) a_1^2 / sin^2 theta`` and likewise for z2.
    """
    s = math.cos(theta)
    sin2 = math.sin(theta) ** 2
    a1 = math.sqrt(sin2 * (1 + s) / (2 * n * k * (1 - s)))
    a1p = math.sqrt(sin2 * (1 - s) / (2 * n * k * (1 + s)))
    return a1, a1p


@dataclass
class DualCertificate:
    k: int
    n: int
    s: float
    theta: float
    probs: tuple[float, ...]
    a: np.ndarray
    a_prime: np.ndarray
    a1: float
    a1_prime: float
    residuals: dict[str, float]
    printed_a1: float
    printed_a1_prime: float
    printed_residuals: dict[str, float] = field(default_factory=dict)
    tol: float = CERTIFICATE_TOL

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def valid(self) -> bool:
        return self.max_residual < self.tol

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "s": self.s,
            "theta": self.theta,
            "probs": list(self.probs),
            "a": self.a.tolist(),
            "a_prime": self.a_prime.tolist(),
            "a1": self.a1,
            "a1_prime": self.a1_prime,
            "residuals": self.residuals,
            "max_residual": self.max_residual,
            "valid": self.valid,
            "printed_seed": {
                "a1": self.printed_a1,
                "a1_prime": self.printed_a1_prime,
                "scale_a1": self.a1 / self.printed_a1,
                "scale_a1_prime": self.a1_prime / self.printed_a1_prime,
                "residuals": self.printed_residuals,
            },
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def certificate_residuals(k: int, n: int, probs, s: float, a: np.ndarray, a_prime: np.ndarray) -> dict[str, float]:
    """Absolute violations of every slackness, dual and zero-gap condition."""
    p = np.asarray(probs, dtype=float)
    alpha = alpha_vectors(k, n)
    z1 = a @ alpha
    z2 = a_prime @ alpha
    ones = np.ones(k)
    p1 = np.eye(k) - (alpha.T * p) @ alpha
    dev = p1 - np.outer(ones, ones) / k
    r = {}
    r["12a"] = float(np.abs((s * np.eye(k) - dev) @ z1).max())
    r["12b"] = float(np.abs((s * np.eye(k) + dev) @ z2).max())
    r["13a"] = abs(float(ones @ z1))
    r["13b"] = abs(float(ones @ z2))
    r["14a"] = abs(float(z1 @ z1 + z2 @ z2) - 1.0)
    r["14b"] = float(np.abs((alpha @ z1) ** 2 - (alpha @ z2) ** 2).max())
    r["15"] = abs(float(z1 @ z1 - z2 @ z2) - s)

    def recursion(coef, c):
        # (coef - 2 n p_i) c_i + n p_i (c_{i-1} + c_{i+1}) with c_0 = c_K = 0
        padded = np.concatenate([[0.0], c, [0.0]])
        return (coef - 2 * n * p) * c + n * p * (padded[:-2] + padded[2:])

    lhs = recursion(1.0 - s, a)
    rhs = recursion(1.0 + s, a_prime)
    r["20a"] = abs(float(lhs[0]))
    r["20b"] = float(np.abs(lhs[1:-1]).max()) if k > 3 else 0.0
    r["20c"] = abs(float(lhs[-1]))
    r["21a"] = abs(float(rhs[0]))
    r["21b"] = float(np.abs(rhs[1:-1]).max()) if k > 3 else 0.0
    r["21c"] = abs(float(rhs[-1]))
    # primal feasibility: -sI <= P1 - J/K <= sI
    ev = linalg.eigenvalues_symmetric(dev).eigenvalues
    r["primal"] = max(0.0, float(ev[0]) - s, -s - float(ev[-1]))
    # zero duality gap: s - (-Tr F0 Z) with F0 built from I - J/K
    proj = np.eye(k) - np.outer(ones, ones) / k
    r["gap"] = abs(s - float(z1 @ proj @ z1 - z2 @ proj @ z2))
    return r


def dual_certificate(k: int, n: int) -> DualCertificate:
    """Dual certificate proving p = 1/(2n) optimal on the symmetric network."""
    if k < 3:
        raise ValueError("the dual certificate is derived for K >= 3 only")
    if n < 1:
        raise ValueError("n must be at least 1")
    theta = math.pi / k
    s = math.cos(theta)
    probs = (1.0 / (2 * n),) * (k - 1)
    j = np.arange(1, k)
    base = np.sin(j * theta) / math.sin(theta)
    base_prime = np.sin(j * (math.pi - theta)) / math.sin(math.pi - theta)

    a1, a1p = normalized_seed_coordinates(k, n, theta)
    pa1, ppa1p = printed_seed_coordinates(theta, n)
    a, a_prime = base * a1, base_prime * a1p
    return DualCertificate(
        k=k,
        n=n,
        s=s,
        theta=theta,
        probs=probs,
        a=a,
        a_prime=a_prime,
        a1=a1,
        a1_prime=a1p,
        residuals=certificate_residuals(k, n, probs, s, a, a_prime),
        printed_a1=pa1,
        printed_a1_prime=ppa1p,
        printed_residuals=certificate_residuals(k, n, probs, s, base * pa1, base_prime * ppa1p),
    )
