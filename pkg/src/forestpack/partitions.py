"""Partitions and subpartitions of ``{0..n-1}``.

Blocks are frozensets; a partition is stored canonically with blocks sorted
by their minimum element, so equal partitions compare equal.  The lattice
operations follow the uncrossing construction: pool the blocks of both
partitions, repeatedly replace a properly intersecting pair ``X, Y`` by
``X & Y`` and ``X | Y``, then split the resulting laminar family into its
maximal blocks (join) and minimal blocks (meet).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import CapExceeded, Digraph, Dypergraph, Graph, Hypergraph, InvalidInstance

PARTITION_CAP = 12
SUBPARTITION_CAP = 10


def _canonical(blocks: Iterable[Iterable[int]]) -> tuple[frozenset[int], ...]:
    out = [frozenset(b) for b in blocks]
    if any(not b for b in out):
        raise InvalidInstance("empty block")
    seen: set[int] = set()
    for b in out:
        if seen & b:
            raise InvalidInstance("blocks overlap")
        seen |= b
    return tuple(sorted(out, key=min))


class Subpartition(tuple):
    """Disjoint nonempty blocks, canonical order (possibly no blocks)."""

    def __new__(cls, blocks: Iterable[Iterable[int]] = ()):
        return super().__new__(cls, _canonical(blocks))

    @property
    def ground(self) -> frozenset[int]:
        return frozenset().union(*self) if self else frozenset()

    def block_of(self, v: int) -> frozenset[int] | None:
        for b in self:
            if v in b:
                return b
        return None

    def __repr__(self):
        return f"{type(self).__name__}({[sorted(b) for b in self]})"


class Partition(Subpartition):
    """Subpartition whose blocks cover ``{0..n-1}``; construct with :meth:`of`."""

    @classmethod
    def of(cls, n: int, blocks: Iterable[Iterable[int]]) -> Partition:
        p = cls(blocks)
        if p.ground != frozenset(range(n)):
            raise InvalidInstance(f"blocks do not cover 0..{n - 1}")
        return p

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> Partition:
        groups: dict[int, list[int]] = {}
        for v, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(v)
        return cls(groups.values())

    @classmethod
    def singletons(cls, n: int) -> Partition:
        return cls([v] for v in range(n))

    @classmethod
    def trivial(cls, n: int) -> Partition:
        return cls([range(n)]) if n else cls()


def crosses(x: Iterable[int], p: Sequence[frozenset[int]]) -> bool:
    """True iff ``x`` meets at least two blocks of ``p``."""
    x = frozenset(x)
    hit = 0
    for b in p:
        if x & b:
            hit += 1
            if hit >= 2:
                return True
    return False


def _enters_undirected(x: frozenset[int], block: frozenset[int]) -> bool:
    return bool(x & block) and not x <= block


def _enters_directed(tails: frozenset[int], head: int, block: frozenset[int]) -> bool:
    return head in block and not tails <= block


def entering_count(structure, p: Sequence[frozenset[int]], subset: Iterable[int] | None = None) -> int:
    """Number of elements of ``structure`` (restricted to index set ``subset``) that
    enter at least one block of ``p``.

    An edge or hyperedge enters a block when it meets both the block and its
    complement; an arc or hyperarc enters it when its head is inside and some
    tail is outside.
    """
    if isinstance(structure, Graph):
        items = [frozenset(e) for e in structure.edges]
        directed = False
    elif isinstance(structure, Hypergraph):
        items = list(structure.hyperedges)
        directed = False
    elif isinstance(structure, Digraph):
        items = [(frozenset({t}), h) for t, h in structure.arcs]
        directed = True
    elif isinstance(structure, Dypergraph):
        items = list(structure.hyperarcs)
        directed = True
    else:
        raise TypeError(f"unsupported structure {type(structure).__name__}")
    idx = range(len(items)) if subset is None else subset
    count = 0
    for i in idx:
        it = items[i]
        if directed:
            hit = any(_enters_directed(it[0], it[1], b) for b in p)
        else:
            hit = any(_enters_undirected(it, b) for b in p)
        count += hit
    return count


def _properly_intersect(x: frozenset[int], y: frozenset[int]) -> bool:
    return bool(x & y) and bool(x - y) and bool(y - x)


def meet_join(p1: Partition, p2: Partition) -> tuple[Partition, Partition]:
    """Return ``(join, meet)`` of two partitions of the same ground set by uncrossing.

    Pairs are uncrossed in lexicographic order of the sorted pooled family, so
    the result does not depend on argument order.
    """
    if p1.ground != p2.ground:
        raise InvalidInstance("partitions of different ground sets")
    family = sorted(list(p1) + list(p2), key=lambda b: tuple(sorted(b)))
    while True:
        pair = None
        for i in range(len(family)):
            for j in range(i + 1, len(family)):
                if _properly_intersect(family[i], family[j]):
                    pair = (i, j)
                    break
            if pair:
                break
        if pair is None:
            break
        i, j = pair
        x, y = family[i], family[j]
        rest = [b for t, b in enumerate(family) if t not in pair]
        family = sorted(rest + [x & y, x | y], key=lambda b: tuple(sorted(b)))
    # laminar and every vertex lies in exactly two members: the larger one
    # belongs to the join, the smaller one to the meet
    big: dict[int, frozenset[int]] = {}
    small: dict[int, frozenset[int]] = {}
    for v in p1.ground:
        a, b = [s for s in family if v in s]
        if len(a) < len(b):
            a, b = b, a
        big[v], small[v] = a, b
    join = Partition(set(big.values()))
    meet = Partition(set(small.values()))
    return join, meet


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted growth strings of length ``n`` in lexicographic order."""
    if n == 0:
        yield ()
        return
    a = [0] * n
    b = [1] * n  # b[i] = 1 + max(a[:i])
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for j in range(i + 1, n):
            a[j] = 0
            b[j] = max(b[j - 1], a[j - 1] + 1)


def _check_cap(n: int, cap: int | None, default: int, what: str) -> None:
    limit = default if cap is None else cap
    if n > limit:
        raise CapExceeded(f"{what} enumeration over {n} vertices exceeds cap {limit}")


def enumerate_partitions(n: int, cap: int | None = None) -> Iterator[Partition]:
    """Every partition of ``{0..n-1}`` once, in restricted-growth order."""
    _check_cap(n, cap, PARTITION_CAP, "partition")
    for rgs in restricted_growth_strings(n):
        yield Partition.from_labels(rgs)


def enumerate_subpartitions(n: int, cap: int | None = None) -> Iterator[Subpartition]:
    """Every subpartition of ``{0..n-1}`` (including the empty one) once.

    Uses partitions of ``V + {star}``: the block holding ``star`` is dropped.
    """
    _check_cap(n, cap, SUBPARTITION_CAP, "subpartition")
    for rgs in restricted_growth_strings(n + 1):
        star = rgs[n]
        groups: dict[int, list[int]] = {}
        for v in range(n):
            if rgs[v] != star:
                groups.setdefault(rgs[v], []).append(v)
        yield Subpartition(groups.values())


@lru_cache(maxsize=None)
def partition_table(n: int) -> np.ndarray:
    """Label matrix of all partitions of ``n`` vertices, one row per partition."""
    rows = list(restricted_growth_strings(n))
    return np.array(rows, dtype=np.int8).reshape(len(rows), n)


@lru_cache(maxsize=None)
def subpartition_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(labels, sizes)`` for all subpartitions of ``n`` vertices.

    Labels are taken from partitions of ``n + 1`` vertices; a vertex whose label
    equals ``labels[:, n]`` is uncovered.  ``sizes`` counts the blocks.
    """
    full = partition_table(n + 1)
    blocks = full.max(axis=1).astype(np.int64) + 1
    return full, blocks - 1


def table_to_partition(row: np.ndarray) -> Partition:
    return Partition.from_labels(row.tolist())


def table_to_subpartition(row: np.ndarray, n: int) -> Subpartition:
    star = row[n]
    groups: dict[int, list[int]] = {}
    for v in range(n):
        if row[v] != star:
            groups.setdefault(int(row[v]), []).append(v)
    return Subpartition(groups.values())


def crossing_matrix(table: np.ndarray, sets: Sequence[Iterable[int]]) -> np.ndarray:
    """Boolean matrix ``[partition, set]``: does the set cross the partition row?"""
    out = np.zeros((table.shape[0], len(sets)), dtype=bool)
    for j, s in enumerate(sets):
        cols = sorted(s)
        sub = table[:, cols]
        out[:, j] = (sub != sub[:, :1]).any(axis=1)
    return out


def entering_matrix_directed(full: np.ndarray, n: int, arcs: Sequence[tuple[frozenset[int], int]]) -> np.ndarray:
    """Boolean matrix ``[subpartition, arc]`` for the star-encoded table of
    :func:`subpartition_table`: does the arc enter a block?"""
    out = np.zeros((full.shape[0], len(arcs)), dtype=bool)
    star = full[:, n]
    for j, (tails, head) in enumerate(arcs):
        hl = full[:, head]
        covered = hl != star
        outside = np.zeros(full.shape[0], dtype=bool)
        for t in tails:
            outside |= full[:, t] != hl
        out[:, j] = covered & outside
    return out
