"""The four K-PPDR network families.

Nodes are labelled ``(i, mu)`` with set index ``i`` in ``1..K`` and position
``mu`` in ``1..n``; internally node ``(i, mu)`` has index ``(i-1)*n + (mu-1)``.
Layer ``j`` (1-based) joins set ``j`` to set ``j+1``; in the cycle-like
families layer ``K`` joins set ``K`` back to set ``1``.  Every layer is one
edge orbit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class TopologyError(ValueError):
    pass


class Family(str, enum.Enum):
    SYMMETRIC = "symmetric"
    SEMI_SYMMETRIC = "semi-symmetric"
    CYCLE = "cycle"
    SEMI_CYCLE = "semi-cycle"

    @property
    def is_cyclic(self) -> bool:
        return self in (Family.CYCLE, Family.SEMI_CYCLE)

    @property
    def is_semi(self) -> bool:
        return self in (Family.SEMI_SYMMETRIC, Family.SEMI_CYCLE)

    @classmethod
    def parse(cls, name: "str | Family") -> "Family":
        if isinstance(name, Family):
            return name
        key = name.strip().lower().replace("_", "-")
        aliases = {"semisymmetric": "semi-symmetric", "semicycle": "semi-cycle"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise TopologyError(
                f"unknown family {name!r}; expected one of {[f.value for f in cls]}"
            ) from None


class LayerKind(str, enum.Enum):
    FULL = "full"
    STRAIT = "strait"

    @classmethod
    def parse(cls, token: "str | LayerKind") -> "LayerKind":
        if isinstance(token, LayerKind):
            return token
        key = token.strip().lower()
        if key in ("f", "full"):
            return cls.FULL
        if key in ("s", "strait"):
            return cls.STRAIT
        raise TopologyError(f"unknown layer kind {token!r}; expected full/strait (F/S)")


def layer_count(family: Family, k: int) -> int:
    return k if Family.parse(family).is_cyclic else k - 1


def default_pattern(family, k: int) -> tuple[LayerKind, ...]:
    """Layer kinds used when a spec does not give a pattern.

    Semi families alternate Full/Strait starting with a Full first layer.
    """
    family = Family.parse(family)
    if k < 2:
        raise TopologyError("K must be at least 2")
    count = layer_count(family, k)
    if not family.is_semi:
        return (LayerKind.FULL,) * count
    if family is Family.SEMI_CYCLE and k % 2:
        raise TopologyError(f"semi-cycle needs an even K to alternate around the cycle (got K={k})")
    return tuple(LayerKind.FULL if j % 2 == 0 else LayerKind.STRAIT for j in range(count))


@dataclass(frozen=True)
class TopologySpec:
    family: Family
    k: int
    n: int
    pattern: tuple[LayerKind, ...] | None = None

    def __post_init__(self):
        family = Family.parse(self.family)
        object.__setattr__(self, "family", family)
        k, n = self.k, self.n
        if not isinstance(k, int) or not isinstance(n, int):
            raise TopologyError("K and n must be integers")
        if n < 1:
            raise TopologyError(f"n must be at least 1 (got {n})")
        min_k = 2 if family is Family.SYMMETRIC else 3
        if family is Family.SEMI_CYCLE:
            min_k = 4
        if k < min_k:
            raise TopologyError(f"{family.value} networks need K >= {min_k} (got {k})")
        if family is Family.SEMI_CYCLE and k % 2:
            raise TopologyError(f"semi-cycle needs an even K (got {k})")

        if self.pattern is None:
            pattern = default_pattern(family, k)
        else:
            pattern = tuple(LayerKind.parse(t) for t in self.pattern)
        count = layer_count(family, k)
        if len(pattern) != count:
            raise TopologyError(f"pattern must have {count} layers for {family.value} K={k}")
        if not family.is_semi:
            if any(kind is not LayerKind.FULL for kind in pattern):
                raise TopologyError(f"{family.value} networks have Full layers only")
        else:
            pairs = zip(pattern, pattern[1:] + ((pattern[0],) if family.is_cyclic else ()))
            if any(a is LayerKind.STRAIT and b is LayerKind.STRAIT for a, b in pairs):
                raise TopologyError("two Strait layers may not be adjacent")
            if LayerKind.STRAIT not in pattern:
                raise TopologyError("semi networks need at least one Strait layer")
            if family is Family.SEMI_CYCLE and any(a is b for a, b in zip(pattern, pattern[1:] + pattern[:1])):
                raise TopologyError("semi-cycle layers must alternate Full/Strait")
        object.__setattr__(self, "pattern", pattern)

    @property
    def node_count(self) -> int:
        return self.k * self.n

    @property
    def layers(self) -> int:
        return len(self.pattern)

    def layer_sets(self, layer: int) -> tuple[int, int]:
        """The (1-based) sets joined by 1-based ``layer``."""
        return layer, layer % self.k + 1

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "k": self.k,
            "n": self.n,
            "pattern": [kind.value for kind in self.pattern],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TopologySpec":
        return cls(Family.parse(d["family"]), int(d["k"]), int(d["n"]), d.get("pattern"))


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    layer: int  # 1-based
    kind: LayerKind


@dataclass(frozen=True)
class Graph:
    spec: TopologySpec
    edges: tuple[Edge, ...]
    orbits: dict[int, tuple[int, ...]] = field(repr=False)

    @property
    def node_count(self) -> int:
        return self.spec.node_count

    def label(self, index: int) -> tuple[int, int]:
        n = self.spec.n
        return index // n + 1, index % n + 1

    def index(self, node) -> int:
        if isinstance(node, tuple):
            i, mu = node
            if not (1 <= i <= self.spec.k and 1 <= mu <= self.spec.n):
                raise IndexError(f"node {node} out of range for K={self.spec.k}, n={self.spec.n}")
            return (i - 1) * self.spec.n + (mu - 1)
        node = int(node)
        if not 0 <= node < self.node_count:
            raise IndexError(f"node index {node} out of range [0, {self.node_count})")
        return node

    def degrees(self) -> list[int]:
        deg = [0] * self.node_count
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg


def build_graph(spec: TopologySpec) -> Graph:
    n = spec.n
    edges = []
    orbits = {}
    for layer, kind in enumerate(spec.pattern, start=1):
        a, b = spec.layer_sets(layer)
        start = len(edges)
        for mu in range(n):
            partners = range(n) if kind is LayerKind.FULL else (mu,)
            for rho in partners:
                edges.append(Edge((a - 1) * n + mu, (b - 1) * n + rho, layer, kind))
        orbits[layer] = tuple(range(start, len(edges)))
    return Graph(spec, tuple(edges), orbits)


def degree(g: Graph, node) -> int:
    """Number of edges incident to ``node`` (a ``(set, position)`` label or an index)."""
    idx = g.index(node)
    return sum(1 for e in g.edges if e.u == idx or e.v == idx)


def format_edge_list(g: Graph) -> str:
    lines = []
    for e in g.edges:
        (i, mu), (j, rho) = g.label(e.u), g.label(e.v)
        lines.append(f"{i},{mu}  {j},{rho}  {e.layer}  {e.kind.value}")
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> list[tuple[tuple[int, int], tuple[int, int], int, LayerKind]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise TopologyError(f"line {lineno}: expected 4 fields, got {len(parts)}")
        a, b = (tuple(int(x) for x in p.split(",")) for p in parts[:2])
        out.append((a, b, int(parts[2]), LayerKind.parse(parts[3])))
    return out


def parse_pattern(tokens: str | Iterable[str] | None) -> tuple[LayerKind, ...] | None:
    if tokens is None:
        return None
    if isinstance(tokens, str):
        tokens = [t for t in tokens.replace(" ", ",").split(",") if t]
    return tuple(LayerKind.parse(t) for t in tokens)


def make_spec(family, k: int, n: int, pattern: Sequence | str | None = None) -> TopologySpec:
    return TopologySpec(Family.parse(family), int(k), int(n), parse_pattern(pattern))
