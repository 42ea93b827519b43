"""Random instance generators shared by the test modules."""

from __future__ import annotations

import random

from forestpack.core import Digraph, Dypergraph, Graph, Hypergraph, PackingSpec
from forestpack.partitions import Partition


def random_graph(rng: random.Random, max_n: int = 5, max_m: int = 8, min_n: int = 1) -> Graph:
    n = rng.randint(min_n, max_n)
    if n < 2:
        return Graph(n, ())
    return Graph(n, tuple(tuple(rng.sample(range(n), 2)) for _ in range(rng.randint(0, max_m))))


def random_hypergraph(
    rng: random.Random, max_n: int = 5, max_m: int = 5, max_size: int = 4, n: int | None = None
) -> Hypergraph:
    n = n if n is not None else rng.randint(1, max_n)
    if n < 2:
        return Hypergraph(n, ())
    edges = [frozenset(rng.sample(range(n), rng.randint(2, min(max_size, n)))) for _ in range(rng.randint(0, max_m))]
    return Hypergraph(n, tuple(edges))


def random_dypergraph(rng: random.Random, max_n: int = 4, max_m: int = 5, single_tail: bool = False) -> Dypergraph:
    n = rng.randint(1, max_n)
    arcs = []
    if n > 1:
        for _ in range(rng.randint(0, max_m)):
            head = rng.randrange(n)
            others = [v for v in range(n) if v != head]
            size = 1 if single_tail else rng.randint(1, len(others))
            arcs.append((frozenset(rng.sample(others, size)), head))
    return Dypergraph(n, tuple(arcs))


def as_digraph(d: Dypergraph) -> Digraph:
    return Digraph(d.n, tuple((next(iter(t)), h) for t, h in d.hyperarcs))


def random_fixed_ell(rng: random.Random, n: int, k: int) -> tuple[int, ...]:
    return tuple(rng.randint(1, n) for _ in range(k))


def random_bounded_spec(rng: random.Random, n: int, max_k: int = 4, h: int | None = None, k: int | None = None) -> PackingSpec:
    """A spec satisfying every hypothesis on the bound functions."""
    k = k if k is not None else rng.randint(1, max_k)
    h = h if h is not None else rng.randint(1, k)
    upper = [rng.randint(1, n) for _ in range(k)]
    lower = [rng.randint(1, u) for u in upper]
    l0 = rng.randint(sum(lower), sum(upper))
    u0 = rng.randint(l0, sum(upper))
    return PackingSpec(h, k, (l0, *lower), (u0, *upper))


def random_partition(rng: random.Random, n: int) -> Partition:
    labels = []
    top = 0
    for _ in range(n):
        lab = rng.randint(0, top)
        labels.append(lab)
        if lab == top:
            top += 1
    return Partition.from_labels(labels)
