"""Spectral quantities of discrete graphs: gap length, Ramanujan test,
bipartiteness and the d*d / dd* supersymmetry check."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .eig import DEFAULT_TOL, Spectrum, eigvals, group_spectrum, spectrum_of
from .graph import Graph, GraphError, adjacency_matrix, laplacian0, laplacian1

# tolerance for deciding that an eigenvalue equals 0 or 2
TRIVIAL_ATOL = 1e-9


def ramanujan_threshold(k: int) -> float:
    return 2.0 * math.sqrt(k - 1) / k


def unit_laplacian_spectrum(g: Graph, tol: float = DEFAULT_TOL) -> Spectrum:
    """Spectrum of the normalized Laplacian with all lengths set to 1."""
    return spectrum_of(laplacian0(g.with_lengths(1.0)), tol)


def _require_regular_simple(g: Graph, min_k: int) -> int:
    if not g.is_simple():
        raise GraphError("graph must be simple")
    k = g.regular_degree()
    if k is None:
        raise GraphError("graph is not regular")
    if k < min_k:
        raise GraphError(f"degree {k} < {min_k}")
    return k


def _nontrivial(spec: Spectrum) -> np.ndarray:
    mu = spec.expanded()
    keep = (np.abs(mu) > TRIVIAL_ATOL) & (np.abs(mu - 2.0) > TRIVIAL_ATOL)
    return mu[keep]


def spectral_gap_length(g: Graph, tol: float = DEFAULT_TOL) -> float:
    """min(mu, 2 - mu) over the Laplacian spectrum with 0 and 2 removed."""
    _require_regular_simple(g, 2)
    mu = _nontrivial(unit_laplacian_spectrum(g, tol))
    if mu.size == 0:
        raise GraphError("nontrivial Laplacian spectrum is empty")
    return float(np.min(np.minimum(mu, 2.0 - mu)))


def spectral_gap_length_adjacency(g: Graph) -> float:
    """Same quantity from the adjacency spectrum: ``1 - max|a|/k`` over ``|a| < k``."""
    k = _require_regular_simple(g, 2)
    alpha = eigvals(adjacency_matrix(g))
    inner = np.abs(alpha)[np.abs(alpha) < k - TRIVIAL_ATOL * k]
    if inner.size == 0:
        raise GraphError("nontrivial adjacency spectrum is empty")
    return float(1.0 - np.max(inner) / k)


@dataclass(frozen=True)
class RamanujanReport:
    degree: int
    threshold: float
    worst_deviation: float
    is_ramanujan: bool
    gap_length: float
    bipartite: bool
    literal_deviation: float
    literal_is_ramanujan: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def ramanujan_check(g: Graph, tol: float = DEFAULT_TOL) -> RamanujanReport:
    """Test ``max |1 - mu| <= 2 sqrt(k-1)/k`` over the nontrivial spectrum.

    The ``literal_*`` fields take the maximum over the whole spectrum,
    including mu = 0, which no graph can pass.
    """
    k = _require_regular_simple(g, 3)
    spec = unit_laplacian_spectrum(g, tol)
    mu = _nontrivial(spec)
    if mu.size == 0:
        raise GraphError("nontrivial Laplacian spectrum is empty")
    threshold = ramanujan_threshold(k)
    deviation = float(np.max(np.abs(1.0 - mu)))
    gap = float(np.min(np.minimum(mu, 2.0 - mu)))
    verdict = deviation <= threshold + 1e-9
    # same verdict phrased through the gap length
    assert verdict == (gap >= 1.0 - threshold - 1e-9)
    literal = float(np.max(np.abs(1.0 - spec.expanded())))
    return RamanujanReport(
        degree=k,
        threshold=threshold,
        worst_deviation=deviation,
        is_ramanujan=verdict,
        gap_length=gap,
        bipartite=_two_colourable(g),
        literal_deviation=literal,
        literal_is_ramanujan=literal <= threshold + 1e-9,
    )


def _two_colourable(g: Graph) -> bool:
    colour = [-1] * g.vertex_count
    adj = g.neighbours()
    for a, b in g.edges:
        if a == b:
            return False
    for start in range(g.vertex_count):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if colour[w] < 0:
                    colour[w] = 1 - colour[v]
                    queue.append(w)
                elif colour[w] == colour[v]:
                    return False
    return True


def is_bipartite(g: Graph, tol: float = DEFAULT_TOL) -> bool:
    """2 in the Laplacian spectrum, cross-checked against BFS 2-colouring."""
    spectral = unit_laplacian_spectrum(g, tol).multiplicity_of(2.0, TRIVIAL_ATOL) > 0
    combinatorial = _two_colourable(g)
    if spectral != combinatorial:
        raise RuntimeError(
            f"bipartiteness disagreement: spectral={spectral}, colouring={combinatorial}")
    return combinatorial


@dataclass(frozen=True)
class SupersymmetryResult:
    ok: bool
    max_mismatch: float
    kernel_dim: int
    expected_kernel_dim: int


def supersymmetry_check(g: Graph, tol: float = 1e-8,
                        zero_atol: float = TRIVIAL_ATOL) -> SupersymmetryResult:
    """Compare the nonzero spectra of d*d and dd* group by group."""
    s0 = group_spectrum(eigvals(laplacian0(g)))
    s1 = group_spectrum(eigvals(laplacian1(g)))
    kernel1 = s1.multiplicity_of(0.0, zero_atol)
    n0, n1 = s0.without([0.0], zero_atol), s1.without([0.0], zero_atol)
    expected = g.first_betti_number()
    ok = len(n0.values) == len(n1.values) and n0.multiplicities == n1.multiplicities
    mismatch = float("inf")
    if len(n0.values) == len(n1.values):
        diffs = np.abs(np.subtract(n0.values, n1.values))
        mismatch = float(np.max(diffs)) if diffs.size else 0.0
    ok = ok and mismatch <= tol and kernel1 == expected
    return SupersymmetryResult(ok, mismatch, kernel1, expected)
