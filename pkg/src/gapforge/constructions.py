"""Graph families and transforms: standard and random generators,
decoration, and 2-lifts with signing search.

Randomness comes from numpy's PCG64 bit generator, so a seed reproduces the
same graph on every platform numpy supports.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .graph import Graph, GraphError

REJECTION_BUDGET = 10_000

KINDS = ("complete", "cycle", "path", "complete_bipartite", "tree_random",
         "regular_random", "petersen")
# accepted spellings on the command line
ALIASES = {"regular": "regular_random", "tree": "tree_random", "bipartite": "complete_bipartite"}


def rng_from_seed(seed: int | None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _need(params: dict, *names: str) -> list[int]:
    out = []
    for name in names:
        if name not in params:
            raise GraphError(f"missing parameter {name!r}")
        value = params[name]
        if isinstance(value, bool) or int(value) != value:
            raise GraphError(f"parameter {name!r} must be an integer, got {value!r}")
        out.append(int(value))
    return out


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise GraphError("complete graph needs n >= 2")
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("complete bipartite graph needs both sides nonempty")
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    """Uniform labelled tree via a random Pruefer sequence."""
    if n < 1:
        raise GraphError("tree needs n >= 1")
    if n <= 2:
        return path_graph(n)
    seq = rng.integers(0, n, size=n - 2).tolist()
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = next(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, w = (i for i in range(n) if degree[i] == 1)
    edges.append((u, w))
    return Graph(n, tuple(edges))


def random_regular(n: int, k: int, rng: np.random.Generator,
                   budget: int = REJECTION_BUDGET) -> Graph:
    """Simple connected k-regular graph from the pairing model, by rejection."""
    if k < 1 or n < 2:
        raise GraphError("need n >= 2 and k >= 1")
    if k >= n:
        raise GraphError(f"k-regular simple graph needs k < n, got k={k}, n={n}")
    if (n * k) % 2:
        raise GraphError(f"n*k must be even, got n={n}, k={k}")
    stubs = np.repeat(np.arange(n), k)
    for _ in range(budget):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        keys = lo * n + hi
        if np.unique(keys).size != keys.size:
            continue
        order = np.argsort(keys)
        g = Graph(n, tuple(zip(lo[order].tolist(), hi[order].tolist())), require_connected=False)
        if g.is_connected():
            return Graph(n, g.edges)
    raise GraphError(f"no simple connected {k}-regular graph on {n} vertices "
                     f"within {budget} attempts")


def generate(kind: str, params: dict | None = None, seed: int | None = None) -> Graph:
    """Build a graph of the named family.

    ``params`` keys: ``n`` (and ``k`` for regular_random, ``a``/``b`` for
    complete_bipartite).  Random kinds are deterministic in ``seed``.
    """
    params = dict(params or {})
    kind = ALIASES.get(kind, kind)
    if kind == "complete":
        return complete_graph(*_need(params, "n"))
    if kind == "cycle":
        return cycle_graph(*_need(params, "n"))
    if kind == "path":
        return path_graph(*_need(params, "n"))
    if kind == "complete_bipartite":
        return complete_bipartite_graph(*_need(params, "a", "b"))
    if kind == "petersen":
        return petersen_graph()
    if kind == "tree_random":
        return random_tree(*_need(params, "n"), rng_from_seed(seed))
    if kind == "regular_random":
        n, k = _need(params, "n", "k")
        return random_regular(n, k, rng_from_seed(seed))
    raise GraphError(f"unknown graph kind {kind!r}; expected one of {', '.join(KINDS)}")


@dataclass(frozen=True)
class DecorationSpec:
    base: Graph
    decoration: Graph
    attach_vertex: int = 0

    def __post_init__(self):
        if not 0 <= self.attach_vertex < self.decoration.vertex_count:
            raise GraphError(f"attach vertex {self.attach_vertex} not in decoration "
                             f"(0..{self.decoration.vertex_count - 1})")
        if not (self.base.is_connected() and self.decoration.is_connected()):
            raise GraphError("base and decoration must be connected")


def decorate(spec: DecorationSpec) -> Graph:
    """Weld a copy of the decoration at every base vertex, through ``attach_vertex``.

    Base vertices keep their labels; copy ``v`` takes the labels after them,
    in decoration order with the attach vertex skipped.  Edge lengths carry over.
    """
    base, dec, a = spec.base, spec.decoration, spec.attach_vertex
    nb, nd = base.vertex_count, dec.vertex_count
    edges = list(base.edges)
    lengths = list(base.lengths)
    for v in range(nb):
        offset = nb + v * (nd - 1)
        label = {}
        for i in range(nd):
            if i == a:
                label[i] = v
            else:
                label[i] = offset + (i if i < a else i - 1)
        edges.extend((label[x], label[y]) for x, y in dec.edges)
        lengths.extend(dec.lengths)
    return Graph(nb + nb * (nd - 1), tuple(edges), tuple(lengths))


@dataclass(frozen=True)
class Signing:
    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (1, -1) for s in signs):
            raise GraphError("signs must be +1 or -1")
        object.__setattr__(self, "signs", signs)

    def check(self, g: Graph) -> None:
        if len(self.signs) != g.edge_count:
            raise GraphError(f"signing has {len(self.signs)} entries for {g.edge_count} edges")


@dataclass(frozen=True)
class Lift:
    graph: Graph
    connected: bool


def two_lift(g: Graph, s: Signing | Sequence[int]) -> Lift:
    """Double cover of ``g``: vertex ``v`` becomes ``v`` and ``v + |V|``.

    A ``+1`` edge stays within each sheet, a ``-1`` edge crosses between them.
    Disconnected lifts are returned with ``connected=False``.
    """
    if not isinstance(s, Signing):
        s = Signing(tuple(s))
    if not g.is_simple():
        raise GraphError("2-lifts are built from simple graphs")
    s.check(g)
    n = g.vertex_count
    edges, lengths = [], []
    for (u, w), sign, length in zip(g.edges, s.signs, g.lengths):
        if sign == 1:
            edges += [(u, w), (u + n, w + n)]
        else:
            edges += [(u, w + n), (u + n, w)]
        lengths += [length, length]
    lifted = Graph(2 * n, tuple(edges), tuple(lengths), require_connected=False)
    return Lift(lifted, lifted.is_connected())


def all_signings(g: Graph) -> Iterator[Signing]:
    for bits in itertools.product((1, -1), repeat=g.edge_count):
        yield Signing(bits)


@dataclass(frozen=True)
class SigningSearchResult:
    examined: int
    connected: int
    ramanujan: int
    first_ramanujan: Signing | None
    best_deviation: float
    best_signing: Signing | None


def search_signings(g: Graph, limit: int | None = None) -> SigningSearchResult:
    """Exhaustive search for a signing whose connected 2-lift is Ramanujan."""
    from .spectra import ramanujan_check

    examined = connected = hits = 0
    first = best = None
    best_dev = float("inf")
    for s in all_signings(g):
        if limit is not None and examined >= limit:
            break
        examined += 1
        lift = two_lift(g, s)
        if not lift.connected:
            continue
        connected += 1
        rep = ramanujan_check(Graph(lift.graph.vertex_count, lift.graph.edges))
        if rep.worst_deviation < best_dev:
            best_dev, best = rep.worst_deviation, s
        if rep.is_ramanujan:
            hits += 1
            if first is None:
                first = s
    return SigningSearchResult(examined, connected, hits, first, best_dev, best)
