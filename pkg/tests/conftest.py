import numpy as np
import pytest

from gapforge.eig import _jacobi_c
from gapforge.graph import Graph

BACKENDS = ["python"] + (["compiled"] if _jacobi_c is not None else [])

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def random_multigraph(rng: np.random.Generator, max_vertices: int = 12,
                      loops: bool = True) -> Graph:
    """Connected multigraph: random spanning tree plus random extra edges (loops allowed)."""
    n = int(rng.integers(1, max_vertices + 1))
    edges = [(int(rng.integers(0, v)), v) for v in range(1, n)]
    extra = int(rng.integers(0 if n > 1 else 1, 2 * n + 1))
    for _ in range(extra):
        a, b = (int(x) for x in rng.integers(0, n, size=2))
        if a == b and not loops:
            continue
        edges.append((a, b))
    if not edges:
        edges.append((0, 0))
    # random orientation and lengths
    edges = [(b, a) if rng.random() < 0.5 else (a, b) for a, b in edges]
    lengths = rng.uniform(0.2, 3.0, size=len(edges))
    return Graph(n, tuple(edges), tuple(lengths))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
