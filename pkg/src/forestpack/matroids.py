"""Rank-oracle matroids and Edmonds' matroid partition algorithm.

Matroids are given by rank oracles over the ground set ``0..size-1``.  The
partition algorithm grows disjoint independent sets ``I_1..I_k`` by shortest
augmenting paths in the exchange graph and, when it stops, reads a set ``X``
off the exchange graph with ``|Z - X| + sum_i r_i(X) = |I|``, which certifies
maximality through the Edmonds-Fulkerson min formula.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .core import CapExceeded, ForestpackError, Graph, UnionFind


class MatroidAxiomError(ForestpackError):
    """A rank oracle behaved in a way no matroid can."""


class RankOracle:
    """Base class: subclasses set ``size`` and implement :meth:`rank`."""

    size: int

    def rank(self, subset: frozenset[int]) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    def is_independent(self, subset: frozenset[int]) -> bool:
        return self.rank(subset) == len(subset)


class GraphicMatroid(RankOracle):
    """Cycle matroid of a multigraph; elements are edge indices."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self.size = graph.m

    def rank(self, subset):
        uf = UnionFind(self.graph.n)
        edges = self.graph.edges
        r = 0
        for e in subset:
            r += uf.union(*edges[e])
        return r

    def __repr__(self):
        return f"GraphicMatroid(n={self.graph.n}, m={self.graph.m})"


class TruncatedMatroid(RankOracle):
    def __init__(self, inner: RankOracle, cap: int):
        if cap < 0:
            raise ValueError("truncation cap must be non-negative")
        self.inner = inner
        self.cap = cap
        self.size = inner.size

    def rank(self, subset):
        if not subset or self.cap == 0:
            return 0
        return min(self.inner.rank(subset), self.cap)

    def __repr__(self):
        return f"TruncatedMatroid({self.inner!r}, cap={self.cap})"


class FunctionMatroid(RankOracle):
    """Wrap an arbitrary rank function (used for tests and ad-hoc oracles)."""

    def __init__(self, size: int, rank):
        self.size = size
        self._rank = rank

    def rank(self, subset):
        return self._rank(frozenset(subset))


class SumMatroid(RankOracle):
    """Sum (union) of matroids on a common ground set."""

    def __init__(self, parts: Sequence[RankOracle]):
        if not parts:
            raise ValueError("need at least one matroid")
        sizes = {m.size for m in parts}
        if len(sizes) != 1:
            raise ValueError("matroids must share a ground set")
        self.parts = tuple(parts)
        self.size = sizes.pop()

    def rank(self, subset):
        return len(matroid_partition(self.parts, subset).independent)


@dataclass(frozen=True)
class PartitionResult:
    independent: frozenset[int]
    classes: tuple[frozenset[int], ...]
    dual: frozenset[int]
    dual_value: int


class _Run:
    """Mutable state of one partition run, rank calls memoized per matroid."""

    def __init__(self, ms: Sequence[RankOracle]):
        self.ms = ms
        self.cache: list[dict[frozenset[int], int]] = [{} for _ in ms]

    def rank(self, i: int, subset: frozenset[int]) -> int:
        c = self.cache[i]
        r = c.get(subset)
        if r is None:
            r = self.ms[i].rank(subset)
            if r < 0 or r > len(subset):
                raise MatroidAxiomError(f"matroid {i}: rank {r} of a {len(subset)}-set")
            c[subset] = r
        return r

    def indep(self, i: int, subset: frozenset[int]) -> bool:
        return self.rank(i, subset) == len(subset)


def _search(run: _Run, classes: list[set[int]], sources: Sequence[int]):
    """BFS in the exchange graph from ``sources``.

    Returns ``(sink, parent, visited)``; ``sink`` is ``(x, i)`` when ``x`` can be
    added to class ``i`` directly, else ``None``.
    """
    k = len(classes)
    frozen = [frozenset(c) for c in classes]
    parent: dict[int, tuple[int, int] | None] = {s: None for s in sources}
    queue = deque(sources)
    while queue:
        x = queue.popleft()
        for i in range(k):
            if x in classes[i]:
                continue
            if run.indep(i, frozen[i] | {x}):
                return (x, i), parent, set(parent)
            for y in sorted(classes[i]):
                if y in parent:
                    continue
                if run.indep(i, (frozen[i] - {y}) | {x}):
                    parent[y] = (x, i)
                    queue.append(y)
    return None, parent, set(parent)


def _apply(run: _Run, classes: list[set[int]], sink: tuple[int, int], parent) -> None:
    x, j = sink
    touched = {j}
    classes[j].add(x)
    y = x
    while parent[y] is not None:
        px, i = parent[y]
        classes[i].remove(y)
        classes[i].add(px)
        touched.add(i)
        y = px
    for i in touched:
        if not run.indep(i, frozenset(classes[i])):
            raise MatroidAxiomError(
                f"exchange along a shortest augmenting path left class {i} dependent"
            )


def matroid_partition(ms: Sequence[RankOracle], target: Iterable[int]) -> PartitionResult:
    """Maximum subset of ``target`` independent in the sum of ``ms``.

    Returns the independent set, one class per matroid, and the dual set ``X``.
    The duality equality is checked on every call.
    """
    run = _Run(ms)
    z = sorted(set(target))
    k = len(ms)
    classes: list[set[int]] = [set() for _ in range(k)]
    if k == 0:
        return PartitionResult(frozenset(), (), frozenset(z), len(z))
    for s in z:
        sink, parent, _ = _search(run, classes, [s])
        if sink is not None:
            _apply(run, classes, sink, parent)
    while True:
        placed = set().union(*classes)
        free = [s for s in z if s not in placed]
        sink, parent, reach = _search(run, classes, free)
        if sink is None:
            break
        _apply(run, classes, sink, parent)
    placed = frozenset().union(*classes)
    dual = frozenset(reach)
    dual_value = (len(z) - len(dual)) + sum(run.rank(i, dual) for i in range(k))
    if dual_value != len(placed):
        raise MatroidAxiomError(
            f"duality gap: |I| = {len(placed)} but certificate value is {dual_value}"
        )
    return PartitionResult(placed, tuple(frozenset(c) for c in classes), dual, dual_value)


def sum_rank_bruteforce(ms: Sequence[RankOracle], target: Iterable[int], cap: int = 12) -> int:
    """``min over X of |Z - X| + sum_i r_i(X)``, scanning all subsets of ``Z``."""
    z = sorted(set(target))
    if len(z) > cap:
        raise CapExceeded(f"|Z| = {len(z)} exceeds brute-force cap {cap}")
    best = len(z)
    for size in range(len(z) + 1):
        for xs in combinations(z, size):
            x = frozenset(xs)
            val = len(z) - size + sum(m.rank(x) for m in ms)
            best = min(best, val)
    return best


def matroid_axiom_violations(m: RankOracle, cap: int = 10) -> list[str]:
    """Exhaustive rank-axiom check over all subsets of the ground set."""
    if m.size > cap:
        raise CapExceeded(f"ground set {m.size} exceeds axiom-check cap {cap}")
    out = []
    ranks = {}
    for mask in range(1 << m.size):
        s = frozenset(i for i in range(m.size) if mask >> i & 1)
        ranks[mask] = m.rank(s)
    if ranks[0] != 0:
        out.append("rank of empty set is not 0")
    for mask, r in ranks.items():
        if r > bin(mask).count("1") or r < 0:
            out.append(f"rank out of range on {mask:b}")
        for i in range(m.size):
            if not mask >> i & 1:
                r2 = ranks[mask | 1 << i]
                if r2 < r or r2 > r + 1:
                    out.append(f"unit increase violated at {mask:b} + {i}")
    for a in range(1 << m.size):
        for b in range(a + 1, 1 << m.size):
            if ranks[a] + ranks[b] < ranks[a & b] + ranks[a | b]:
                out.append(f"submodularity violated at {a:b}, {b:b}")
    return out
