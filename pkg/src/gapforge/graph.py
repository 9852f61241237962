"""Finite oriented multigraphs with edge lengths and their operator matrices.

All operators are returned in orthonormalized coordinates: vertex space
``l2(V, deg)`` is conjugated by ``diag(sqrt(deg))`` and edge space
``l2(E, 1/l)`` by ``diag(1/sqrt(l))``.  In these coordinates the coboundary
``d`` has entries ``+-(deg v)^(-1/2) * l_e^(-1/2)`` and ``d^T d`` is the
symmetric form of the vertex Laplacian, so one symmetric eigensolver serves
every operator.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Invalid graph data or an operation not defined on this graph."""


@dataclass(frozen=True)
class WeightedMatrix:
    entries: np.ndarray
    weight_meaning: str

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    @property
    def shape(self) -> tuple[int, ...]:
        return self.entries.shape


@dataclass(frozen=True)
class Graph:
    """Connected oriented multigraph; edge ``(tail, head)`` is ``(d_- e, d_+ e)``.

    Loops and parallel edges are allowed.  Pass ``require_connected=False``
    only for intermediate objects such as trivial 2-lifts.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    lengths: tuple[float, ...] = ()
    require_connected: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        n = int(self.vertex_count)
        if n < 1:
            raise GraphError("vertex_count must be positive")
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge ({a}, {b}) references a vertex outside 0..{n - 1}")
        lengths = tuple(float(x) for x in self.lengths) if self.lengths else (1.0,) * len(edges)
        if len(lengths) != len(edges):
            raise GraphError(f"{len(lengths)} lengths given for {len(edges)} edges")
        if any(not (x > 0) or not np.isfinite(x) for x in lengths):
            raise GraphError("edge lengths must be finite and strictly positive")
        object.__setattr__(self, "vertex_count", n)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "lengths", lengths)
        if self.require_connected and not self.is_connected():
            raise GraphError("graph is not connected")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]],
                   lengths: Sequence[float] | None = None) -> "Graph":
        return cls(n, tuple(tuple(e) for e in edges), tuple(lengths or ()))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def is_connected(self) -> bool:
        adj = self.neighbours()
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.vertex_count

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for a, b in self.edges:
            adj[a].append(b)
            if a != b:
                adj[b].append(a)
        return adj

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.vertex_count, dtype=np.int64)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def has_loops(self) -> bool:
        return any(a == b for a, b in self.edges)

    def has_multi_edges(self) -> bool:
        seen = set()
        for a, b in self.edges:
            key = (min(a, b), max(a, b))
            if key in seen:
                return True
            seen.add(key)
        return False

    def is_simple(self) -> bool:
        return not self.has_loops() and not self.has_multi_edges()

    def regular_degree(self) -> int | None:
        deg = self.degrees()
        return int(deg[0]) if np.all(deg == deg[0]) else None

    def first_betti_number(self) -> int:
        return self.edge_count - self.vertex_count + 1

    def with_lengths(self, lengths: Sequence[float] | float) -> "Graph":
        if np.isscalar(lengths):
            lengths = (float(lengths),) * self.edge_count
        return Graph(self.vertex_count, self.edges, tuple(lengths),
                     require_connected=self.require_connected)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        perm = list(perm)
        if sorted(perm) != list(range(self.vertex_count)):
            raise GraphError("relabeling must be a permutation of the vertices")
        edges = tuple((perm[a], perm[b]) for a, b in self.edges)
        return Graph(self.vertex_count, edges, self.lengths,
                     require_connected=self.require_connected)

    def to_dict(self) -> dict:
        out = {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}
        if any(x != 1.0 for x in self.lengths):
            out["lengths"] = list(self.lengths)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        try:
            n = data["vertices"]
            edges = data["edges"]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"graph record needs 'vertices' and 'edges': missing {exc}") from None
        if not isinstance(n, int) or isinstance(n, bool):
            raise GraphError("'vertices' must be an integer")
        for i, e in enumerate(edges):
            if not (isinstance(e, (list, tuple)) and len(e) == 2):
                raise GraphError(f"edge #{i} must be a [tail, head] pair, got {e!r}")
        return cls(n, tuple(tuple(e) for e in edges), tuple(data.get("lengths") or ()))


def degree(g: Graph, v: int) -> int:
    """Number of edge ends at ``v``; a loop counts twice."""
    if not 0 <= v < g.vertex_count:
        raise GraphError(f"vertex {v} out of range 0..{g.vertex_count - 1}")
    return int(sum((a == v) + (b == v) for a, b in g.edges))


def _check_no_isolated(deg: np.ndarray) -> None:
    if np.any(deg == 0):
        raise GraphError("vertex of degree 0 has no Laplacian weight")


def coboundary_matrix(g: Graph) -> WeightedMatrix:
    """|E| x |V| matrix of ``(dF)_e = F(d_+ e) - F(d_- e)`` in orthonormal coordinates."""
    deg = g.degrees()
    _check_no_isolated(deg)
    d = np.zeros((g.edge_count, g.vertex_count))
    inv_sqrt_deg = 1.0 / np.sqrt(deg)
    for i, ((tail, head), length) in enumerate(zip(g.edges, g.lengths)):
        if tail == head:
            continue
        w = 1.0 / np.sqrt(length)
        d[i, head] = w * inv_sqrt_deg[head]
        d[i, tail] = -w * inv_sqrt_deg[tail]
    return WeightedMatrix(d, "coboundary l2(V,deg) -> l2(E,1/l)")


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def laplacian0(g: Graph) -> WeightedMatrix:
    """Vertex Laplacian ``d* d``, conjugated by ``diag(sqrt(deg))``."""
    d = coboundary_matrix(g).entries
    return WeightedMatrix(_symmetrize(d.T @ d), "vertex-weight deg")


def laplacian1(g: Graph) -> WeightedMatrix:
    """Edge Laplacian ``d d*`` on 1-forms, conjugated by ``diag(1/sqrt(l))``."""
    d = coboundary_matrix(g).entries
    return WeightedMatrix(_symmetrize(d @ d.T), "edge-weight 1/l")


def adjacency_matrix(g: Graph) -> WeightedMatrix:
    if not g.is_simple():
        raise GraphError("adjacency matrix requires a simple graph (no loops or multi-edges)")
    a = np.zeros((g.vertex_count, g.vertex_count))
    for u, w in g.edges:
        a[u, w] = a[w, u] = 1.0
    return WeightedMatrix(a, "unweighted")


def signed_adjacency_matrix(g: Graph, signs: Sequence[int]) -> np.ndarray:
    if not g.is_simple():
        raise GraphError("signed adjacency requires a simple graph")
    if len(signs) != g.edge_count:
        raise GraphError("one sign per edge required")
    a = np.zeros((g.vertex_count, g.vertex_count))
    for (u, w), s in zip(g.edges, signs):
        a[u, w] = a[w, u] = float(s)
    return a
