import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapforge.constructions import complete_graph, cycle_graph, path_graph, petersen_graph
from gapforge.graph import (Graph, GraphError, adjacency_matrix, coboundary_matrix, degree,
                            laplacian0, laplacian1, signed_adjacency_matrix)

from conftest import random_multigraph


def laplacian_from_formula(g: Graph) -> np.ndarray:
    """(Delta F)(v) = -(1/deg v) sum_e (1/l_e)(F(v_e) - F(v)), conjugated by sqrt(deg)."""
    n = g.vertex_count
    deg = np.zeros(n)
    for a, b in g.edges:
        deg[a] += 1
        deg[b] += 1
    op = np.zeros((n, n))
    for (a, b), length in zip(g.edges, g.lengths):
        if a == b:
            continue
        for v, w in ((a, b), (b, a)):
            op[v, v] += 1.0 / (length * deg[v])
            op[v, w] -= 1.0 / (length * deg[v])
    s = np.sqrt(deg)
    return (s[:, None] * op) / s[None, :]


def test_degree_examples():
    assert degree(complete_graph(4), 2) == 3
    assert degree(Graph(1, ((0, 0),)), 0) == 2
    assert degree(path_graph(3), 1) == 2
    with pytest.raises(GraphError):
        degree(path_graph(3), 3)


def test_constructor_invariants():
    with pytest.raises(GraphError, match="outside"):
        Graph(2, ((0, 2),))
    with pytest.raises(GraphError, match="positive"):
        Graph(2, ((0, 1),), (0.0,))
    with pytest.raises(GraphError, match="not connected"):
        Graph(3, ((0, 1),))
    with pytest.raises(GraphError, match="lengths"):
        Graph(2, ((0, 1),), (1.0, 2.0))
    g = Graph(3, ((0, 1), (1, 2)), require_connected=False)
    assert g.is_connected()


def test_coboundary_small_cases():
    d = coboundary_matrix(Graph(2, ((0, 1),))).entries
    np.testing.assert_array_equal(d, [[-1.0, 1.0]])
    assert coboundary_matrix(Graph(1, ((0, 0),))).entries.tolist() == [[0.0]]
    k4 = complete_graph(4)
    d = coboundary_matrix(k4).entries
    np.testing.assert_allclose(d.T @ d, laplacian0(k4).entries, atol=1e-12)


def test_laplacian_small_spectra():
    np.testing.assert_allclose(np.linalg.eigvalsh(laplacian0(complete_graph(4)).entries),
                               [0, 4 / 3, 4 / 3, 4 / 3], atol=1e-12)
    np.testing.assert_allclose(np.linalg.eigvalsh(laplacian0(path_graph(2)).entries),
                               [0, 2], atol=1e-12)
    c5 = np.sort(1 - np.cos(2 * np.pi * np.arange(5) / 5))
    np.testing.assert_allclose(np.linalg.eigvalsh(laplacian0(cycle_graph(5)).entries), c5,
                               atol=1e-12)
    assert laplacian1(path_graph(2)).entries.tolist() == [[2.0]]
    assert laplacian1(Graph(1, ((0, 0),))).entries.tolist() == [[0.0]]


def test_adjacency_and_regular_relation():
    np.testing.assert_allclose(np.linalg.eigvalsh(adjacency_matrix(complete_graph(4)).entries),
                               [-1, -1, -1, 3], atol=1e-12)
    pet = petersen_graph()
    np.testing.assert_allclose(np.linalg.eigvalsh(adjacency_matrix(pet).entries),
                               [-2] * 4 + [1] * 5 + [3], atol=1e-12)
    for g, k in ((pet, 3), (complete_graph(5), 4), (cycle_graph(7), 2)):
        a = adjacency_matrix(g).entries
        lap = laplacian0(g).entries
        assert np.max(np.abs(a - k * (np.eye(g.vertex_count) - lap))) <= 1e-12
    with pytest.raises(GraphError):
        adjacency_matrix(Graph(2, ((0, 1), (0, 1))))
    with pytest.raises(GraphError):
        adjacency_matrix(Graph(1, ((0, 0),)))


def test_signed_adjacency():
    c4 = cycle_graph(4)
    a = signed_adjacency_matrix(c4, [1, 1, 1, -1])
    assert a[3, 0] == -1 and a[0, 1] == 1
    with pytest.raises(GraphError):
        signed_adjacency_matrix(c4, [1, 1])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_operator_properties(seed):
    g = random_multigraph(np.random.default_rng(seed))
    l0 = laplacian0(g).entries
    l1 = laplacian1(g).entries
    np.testing.assert_allclose(l0, laplacian_from_formula(g), atol=1e-12)
    assert np.max(np.abs(l0 - l0.T)) <= 1e-12 * max(1.0, np.max(np.abs(l0)))
    ev0 = np.linalg.eigvalsh(l0)
    ev1 = np.linalg.eigvalsh(l1)
    assert ev0.min() >= -1e-10 and ev1.min() >= -1e-10
    if all(x == 1.0 for x in g.lengths):
        assert ev0.max() <= 2 + 1e-10
    assert np.sum(np.abs(ev0) < 1e-9) == 1
    assert np.sum(np.abs(ev1) < 1e-9) == g.first_betti_number()


def test_json_round_trip_and_relabel():
    g = Graph(3, ((0, 1), (1, 2), (2, 2)), (1.0, 2.5, 1.0))
    back = Graph.from_dict(json.loads(json.dumps(g.to_dict())))
    assert back == g
    assert "lengths" not in complete_graph(3).to_dict()
    r = g.relabel([2, 0, 1])
    assert r.edges == ((2, 0), (0, 1), (1, 1))
    with pytest.raises(GraphError):
        g.relabel([0, 0, 1])
    with pytest.raises(GraphError, match="pair"):
        Graph.from_dict({"vertices": 2, "edges": [[0, 1, 2]]})
    with pytest.raises(GraphError, match="vertices"):
        Graph.from_dict({"edges": []})


def test_relabel_preserves_spectrum():
    g = petersen_graph()
    perm = np.random.default_rng(3).permutation(10)
    a = np.linalg.eigvalsh(laplacian0(g).entries)
    b = np.linalg.eigvalsh(laplacian0(g.relabel(perm)).entries)
    np.testing.assert_allclose(a, b, atol=1e-12)
