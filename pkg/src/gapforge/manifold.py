"""Symbolic graph-like manifolds assembled from building-block data.

A model is a graph with edge lengths, a shrinking radius ``epsilon`` and,
per vertex and per edge, the spectral and topological data of the unscaled
blocks.  Nothing here solves a PDE: block eigenvalues are inputs, and every
missing one is an error rather than a default.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .graph import Graph


class BlockDataError(ValueError):
    """Required building-block data is missing or invalid."""


@dataclass(frozen=True)
class VertexBlock:
    # first positive exact p-form eigenvalue of X_v, keyed by p
    exact_eigenvalues: Mapping[int, float] = field(default_factory=dict)
    betti: Sequence[int] | None = None
    volume: float | None = None


@dataclass(frozen=True)
class EdgeBlock:
    # transversal manifold Y_e of dimension n - 1
    exact_eigenvalues: Mapping[int, float] = field(default_factory=dict)
    betti: Sequence[int] | None = None
    volume: float = 1.0
    # first exact eigenvalue on the unscaled overlap X_{v,e} ~ (0,1) x Y_e, keyed by degree
    overlap_eigenvalues: Mapping[int, float] = field(default_factory=dict)


@dataclass(frozen=True)
class BuildingBlocks:
    dimension: int
    vertices: Sequence[VertexBlock]
    edges: Sequence[EdgeBlock]
    c_rho: float = 1.0
    c_np: float = 1.0
    # "scaled": eps^2 |d rho|^2 = c_rho (1 + (eps/l_e)^2); "constant": = c_rho
    rho_model: str = "scaled"

    def __post_init__(self):
        n = self.dimension
        if n < 2:
            raise BlockDataError("dimension must be at least 2")
        if self.rho_model not in ("scaled", "constant"):
            raise BlockDataError(f"unknown rho_model {self.rho_model!r}")
        if self.c_rho <= 0 or self.c_np <= 0:
            raise BlockDataError("c_rho and c_np must be positive")
        for kind, blocks in (("vertex", self.vertices), ("edge", self.edges)):
            for i, b in enumerate(blocks):
                for p, lam in b.exact_eigenvalues.items():
                    if not lam > 0:
                        raise BlockDataError(f"{kind} {i}: eigenvalue for p={p} must be positive")
                if b.betti is not None:
                    if any(x < 0 for x in b.betti):
                        raise BlockDataError(f"{kind} {i}: negative Betti number")
                    if b.betti and b.betti[0] != 1:
                        raise BlockDataError(f"{kind} {i}: b_0 must be 1 for a connected block")
                if b.volume is not None and not b.volume > 0:
                    raise BlockDataError(f"{kind} {i}: volume must be positive")
        for i, e in enumerate(self.edges):
            for p, lam in e.overlap_eigenvalues.items():
                if not lam > 0:
                    raise BlockDataError(f"edge {i}: overlap eigenvalue for p={p} must be positive")

    def transversally_trivial(self) -> bool:
        """True iff every ``Y_e`` has ``b_p = 0`` for ``1 <= p <= n - 2``."""
        for i, e in enumerate(self.edges):
            if e.betti is None:
                raise BlockDataError(f"edge {i}: Betti numbers of Y_e not given")
            if any(e.betti[p] for p in range(1, self.dimension - 1) if p < len(e.betti)):
                return False
        return True


@dataclass(frozen=True)
class ManifoldModel:
    graph: Graph
    blocks: BuildingBlocks
    epsilon: float
    # optional correction c_p(eps) for edge e and degree p; default is the eps -> 0 limit
    edge_constant_hook: Callable[[int, int, float], float] | None = field(
        default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.epsilon > 0:
            raise BlockDataError("epsilon must be positive")
        if len(self.blocks.vertices) != self.graph.vertex_count:
            raise BlockDataError(
                f"{len(self.blocks.vertices)} vertex blocks for {self.graph.vertex_count} vertices")
        if len(self.blocks.edges) != self.graph.edge_count:
            raise BlockDataError(
                f"{len(self.blocks.edges)} edge blocks for {self.graph.edge_count} edges")

    @property
    def dimension(self) -> int:
        return self.blocks.dimension

    def epsilon_over_length(self) -> float:
        return self.epsilon / min(self.graph.lengths)

    def with_epsilon(self, epsilon: float) -> "ManifoldModel":
        return ManifoldModel(self.graph, self.blocks, epsilon, self.edge_constant_hook)


def scale_eigenvalue(lam: float, eps: float) -> float:
    """Eigenvalue of ``eps * M`` from that of ``M``: ``eps**-2 * lam``."""
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    if lam < 0:
        raise ValueError("eigenvalue must be nonnegative")
    return lam / eps ** 2


def scale_norm(p: int, n: int, eps: float) -> float:
    """Factor ``eps**(n - 2p)`` on the squared L2 norm of a p-form under ``g -> eps^2 g``."""
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    if not 0 <= p <= n:
        raise ValueError("need 0 <= p <= n")
    return eps ** (n - 2 * p)


def _lookup(table: Mapping[int, float], p: int, what: str) -> float:
    try:
        return float(table[p])
    except KeyError:
        raise BlockDataError(f"missing {what} for p={p}") from None


def vertex_eigenvalue(m: ManifoldModel, v: int, p: int) -> float:
    lam = _lookup(m.blocks.vertices[v].exact_eigenvalues, p, f"exact eigenvalue of X_{v}")
    return scale_eigenvalue(lam, m.epsilon)


def edge_constant(m: ManifoldModel, e: int, p: int) -> float:
    """``c_p`` of edge ``e``; the edge-neighbourhood eigenvalue is ``eps**-2 * c_p``."""
    n = m.dimension
    if not 2 <= p <= n - 1:
        raise BlockDataError(f"edge constant needs 2 <= p <= {n - 1}, got p={p}")
    if m.edge_constant_hook is not None:
        return float(m.edge_constant_hook(e, p, m.epsilon))
    return _lookup(m.blocks.edges[e].exact_eigenvalues, p, f"exact eigenvalue of Y_{e}")


def edge_eigenvalue(m: ManifoldModel, e: int, p: int) -> float:
    return edge_constant(m, e, p) / m.epsilon ** 2


def _dec(x: float) -> Fraction:
    """Exact rational value of the shortest decimal that prints as ``x``."""
    return Fraction(repr(float(x)))


def rho_gradient_term(m: ManifoldModel, e: int) -> float:
    """Model value of ``eps^2 ||d rho_eps||_inf^2`` near edge ``e``."""
    b = m.blocks
    if b.rho_model == "constant":
        return b.c_rho
    return b.c_rho * (1.0 + (m.epsilon / m.graph.lengths[e]) ** 2)


@dataclass(frozen=True)
class McGowanBound:
    lower_bound: float
    C_p: float
    index: int
    variant: str
    p: int
    epsilon: float
    c_np: float
    c_rho: float
    rho_model: str
    epsilon_over_length: float
    perturbed_interval: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        if self.perturbed_interval is not None:
            d["perturbed_interval"] = list(self.perturbed_interval)
        return d


def transversal_index(m: ManifoldModel, p: int) -> int:
    """``N = 1 + 2 * sum_e b_{p-1}(Y_e)``: index of the first eigenvalue the bound controls."""
    total = 0
    for i, e in enumerate(m.blocks.edges):
        if e.betti is None:
            raise BlockDataError(f"edge {i}: Betti numbers of Y_e not given")
        total += e.betti[p - 1] if p - 1 < len(e.betti) else 0
    return 1 + 2 * total


def mcgowan_bound(m: ManifoldModel, p: int, variant: str | None = None,
                  metric_comparison: tuple[float, float] | None = None) -> McGowanBound:
    """Lower bound on an exact p-form eigenvalue of the graph-like manifold.

    ``variant="gentile-pagliara"`` bounds the first eigenvalue with numerator
    1/8 and the combinatorial constant ``c_np``; it needs ``b_{p-1}(Y_e) = 0``.
    ``variant="mcgowan"`` bounds the N-th eigenvalue with numerator 1 and
    ``||d rho||**p`` in place of ``c_np ||d rho||**2``.  By default the first
    is used when N = 1 and the second otherwise.

    The bound is ``numerator / (eps^2 C_p(eps))`` where, summing over vertices,
    ``C_p = sum_v [1/lam_p(X_v) + sum_{e at v} 1/c_p(e)
    + 2 sum_{e at v} (K_e / lam_{p-1}(X_{v,e}) + 1)(1/lam_p(X_v) + 1/c_p(e))]``.

    ``metric_comparison=(c_minus, c_plus)`` also returns the interval the
    bound moves to under a metric with ``c_-^2 g <= g' <= c_+^2 g``.
    """
    n = m.dimension
    if n < 3:
        raise BlockDataError("form bounds need dimension n >= 3")
    if not 2 <= p <= n - 1:
        raise BlockDataError(f"need 2 <= p <= {n - 1}, got p={p}")
    index = transversal_index(m, p)
    if variant is None:
        variant = "gentile-pagliara" if index == 1 else "mcgowan"
    if variant not in ("gentile-pagliara", "mcgowan"):
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "gentile-pagliara" and index != 1:
        raise BlockDataError("first-eigenvalue bound requires H^{p-1}(Y_e) = 0 for every edge")

    # exact rational evaluation, rounded once; inputs are read as decimals
    eps = _dec(m.epsilon)
    b = m.blocks
    g = m.graph
    incident: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for i, (tail, head) in enumerate(g.edges):
        incident[tail].append(i)
        incident[head].append(i)

    def rho_term(e: int) -> Fraction:
        if b.rho_model == "constant":
            return _dec(b.c_rho)
        return _dec(b.c_rho) * (1 + (eps / _dec(g.lengths[e])) ** 2)

    total = Fraction(0)
    for v in range(g.vertex_count):
        inv_v = 1 / _dec(_lookup(b.vertices[v].exact_eigenvalues, p, f"exact eigenvalue of X_{v}"))
        term = inv_v
        for e in incident[v]:
            inv_e = 1 / _dec(edge_constant(m, e, p))
            overlap = _dec(_lookup(b.edges[e].overlap_eigenvalues, p - 1,
                                   f"overlap eigenvalue of X_(v,{e})"))
            if variant == "gentile-pagliara":
                k = _dec(b.c_np) * rho_term(e)
            elif p % 2 == 0:
                # eps^2 ||d rho||^p = (eps^2 ||d rho||^2)^(p/2) * eps^(2-p)
                k = rho_term(e) ** (p // 2) * eps ** (2 - p)
            else:
                k = Fraction(float(rho_term(e)) ** (p / 2) * float(eps) ** (2 - p))
            term += inv_e + 2 * (k / overlap + 1) * (inv_v + inv_e)
        total += term

    numerator = Fraction(1, 8) if variant == "gentile-pagliara" else Fraction(1)
    bound = float(numerator / (eps ** 2 * total))
    total = float(total)
    interval = None
    if metric_comparison is not None:
        interval = metric_comparison_interval(bound, *metric_comparison, n=n, p=p)
    return McGowanBound(bound, total, index, variant, p, m.epsilon, b.c_np, b.c_rho,
                        b.rho_model, m.epsilon_over_length(), interval)


def metric_comparison_interval(lam: float, c_minus: float, c_plus: float,
                               n: int, p: int) -> tuple[float, float]:
    """Range of an exact p-form eigenvalue after passing to a metric with
    ``c_-^2 g <= g' <= c_+^2 g``."""
    if not 0 < c_minus <= c_plus:
        raise ValueError("need 0 < c_minus <= c_plus")
    e = n + 2 * p
    lo = c_minus ** -2 * (c_minus / c_plus) ** e * lam
    hi = c_plus ** -2 * (c_plus / c_minus) ** e * lam
    return lo, hi


def volume(m: ManifoldModel) -> float:
    """``eps^n sum_v vol(X_v) + eps^(n-1) sum_e l_e vol(Y_e)``."""
    n, eps = m.dimension, m.epsilon
    vol_v = 0.0
    for i, v in enumerate(m.blocks.vertices):
        if v.volume is None:
            raise BlockDataError(f"vertex {i}: volume not given")
        vol_v += v.volume
    vol_e = sum(length * e.volume for length, e in zip(m.graph.lengths, m.blocks.edges))
    return eps ** n * vol_v + eps ** (n - 1) * vol_e


def kappa(lam: float, vol: float, order: int = 2, n: int = 2) -> float:
    """Scale-invariant ``lam * vol**(order/n)``."""
    if not vol > 0:
        raise ValueError("volume must be positive")
    if lam < 0:
        raise ValueError("eigenvalue must be nonnegative")
    return lam * vol ** (order / n)


def yang_yau_bound(genus: int) -> float:
    return 8.0 * math.pi * (genus + 1)


def surface_genus(g: Graph) -> int:
    """Genus of the surface built from spheres-with-discs along ``g``: ``1 - |V| + |E|``."""
    return 1 - g.vertex_count + g.edge_count


def cohomology_dims(m: ManifoldModel) -> list[int]:
    """Betti numbers ``b_0..b_n`` of a transversally trivial graph-like manifold."""
    n = m.dimension
    if not m.blocks.transversally_trivial():
        raise BlockDataError("no general cohomology formula unless transversally trivial")
    verts = m.blocks.vertices
    for i, v in enumerate(verts):
        if v.betti is None:
            raise BlockDataError(f"vertex {i}: Betti numbers of X_v not given")

    def vsum(k: int) -> int:
        return sum(v.betti[k] if k < len(v.betti) else 0 for v in verts)

    dims = [0] * (n + 1)
    dims[0] = dims[n] = 1
    dims[1] = dims[n - 1] = vsum(1) + m.graph.first_betti_number()
    for k in range(2, n - 1):
        dims[k] = vsum(k)
    return dims
