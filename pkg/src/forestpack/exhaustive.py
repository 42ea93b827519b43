"""Exhaustive search for h-regular packings with root-count bounds.

This is the ground-truth oracle behind every brute-force check.  It shares no
code with the constructive algorithms: it enumerates, for every vertex, the
``h`` members whose core contains it, and then searches all assignments of
elements (edges, hyperedges, arcs or hyperarcs) to members together with the
trimmed pair or arc each element contributes.

A member with core ``C`` using ``m`` elements has ``|C| - m`` roots (one per
component of an undirected forest on ``C``; the non-heads of a branching on
``C``).  Dropping elements from a member keeps it valid and raises its root
count by one each, so for fixed cores a packing exists iff some reachable
element-count vector ``m`` can be trimmed down into the root bounds; the
search uses that to stop early and to prune.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .core import CapExceeded, PackingSpec

ELEMENT_CAP = 10
COVER_CAP = 14


@dataclass(frozen=True)
class FoundMember:
    core: frozenset[int]
    arcs: tuple[tuple[int, tuple[int, int]], ...]  # (element index, (u, v)) pairs / (tail, head) arcs


def _mask(vs) -> int:
    out = 0
    for v in vs:
        out |= 1 << v
    return out


def _bits(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def _rank_bound(n: int, core: int, elements, directed: bool) -> int:
    """Upper bound on elements usable by one member with the given core."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merges = 0
    heads = set()
    for el in elements:
        if directed:
            tails, head = el
            if not core >> head & 1:
                continue
            inside = [t for t in tails if core >> t & 1]
            if not inside:
                continue
            heads.add(head)
            vs = inside + [head]
        else:
            vs = [v for v in el if core >> v & 1]
            if len(vs) < 2:
                continue
        r0 = find(vs[0])
        for v in vs[1:]:
            r = find(v)
            if r != r0:
                parent[r] = r0
                merges += 1
    bound = merges
    if directed:
        bound = min(bound, len(heads))
    return bound


def search_packing(
    n: int,
    elements: Sequence,
    spec: PackingSpec,
    directed: bool,
    element_cap: int = ELEMENT_CAP,
    cover_cap: int = COVER_CAP,
) -> list[FoundMember] | None:
    """Find an h-regular packing of ``spec.k`` rooted members, or ``None``.

    ``elements`` are vertex sets (undirected) or ``(tails, head)`` pairs
    (directed).  Graph edges are two-element vertex sets; digraph arcs have a
    single tail.
    """
    if len(elements) > element_cap:
        raise CapExceeded(f"{len(elements)} elements exceed exhaustive cap {element_cap}")
    if spec.h * n > cover_cap:
        raise CapExceeded(f"h*|V| = {spec.h * n} exceeds exhaustive cap {cover_cap}")
    h, k = spec.h, spec.k
    lower, upper = spec.lower, spec.upper
    if k < h:
        return None
    target_total = h * n - upper[0]  # sum of kept elements must reach this
    budget_total = h * n - lower[0]  # and must not exceed this
    if budget_total < 0:
        return None
    elements = [
        (frozenset(el[0]), el[1]) if directed else tuple(sorted(el)) for el in elements
    ]

    # members with identical bounds are interchangeable: keep their cores sorted
    twin_of = {}
    for i in range(k):
        for j in range(i):
            if lower[j + 1] == lower[i + 1] and upper[j + 1] == upper[i + 1]:
                twin_of[i] = max(twin_of.get(i, -1), j)
    choices = [tuple(c) for c in combinations(range(k), h)]
    rank_cache: dict[int, int] = {}

    def rank_of(core: int) -> int:
        r = rank_cache.get(core)
        if r is None:
            r = rank_cache[core] = _rank_bound(n, core, elements, directed)
        return r

    for pick in product(choices, repeat=n):
        cores = [0] * k
        for v, members in enumerate(pick):
            for i in members:
                cores[i] |= 1 << v
        if any(cores[j] > cores[i] for i, j in twin_of.items()):
            continue
        sizes = [bin(c).count("1") for c in cores]
        hi = [sizes[i] - lower[i + 1] for i in range(k)]
        if min(hi) < 0:
            continue
        lo = [max(0, sizes[i] - upper[i + 1]) for i in range(k)]
        if sum(lo) > budget_total:
            continue
        ranks = [rank_of(c) for c in cores]
        if any(ranks[i] < lo[i] for i in range(k)):
            continue
        if sum(min(ranks[i], hi[i]) for i in range(k)) < target_total:
            continue
        found = _assign(n, elements, cores, lo, hi, target_total, directed)
        if found is not None:
            return _trim(found, cores, lo, hi, target_total)
    return None


def _assign(n, elements, cores, lo, hi, target_total, directed):
    k = len(cores)
    core_vs = [_bits(c) for c in cores]
    labels = [list(range(n)) for _ in range(k)]  # component label per vertex, per member
    heads_used = [0] * k
    counts = [0] * k
    chosen: list[list[tuple[int, tuple[int, int]]]] = [[] for _ in range(k)]
    total = len(elements)

    def done() -> bool:
        if any(counts[i] < lo[i] for i in range(k)):
            return False
        return sum(min(counts[i], hi[i]) for i in range(k)) >= target_total

    def hopeless(rest: int) -> bool:
        deficit = sum(max(0, lo[i] - counts[i]) for i in range(k))
        if deficit > rest:
            return True
        return target_total - sum(min(counts[i], hi[i]) for i in range(k)) > rest

    def merge(i, a, b):
        lab = labels[i]
        la, lb = lab[a], lab[b]
        saved = lab[:]
        for v in core_vs[i]:
            if lab[v] == lb:
                lab[v] = la
        return saved

    def moves(idx, i):
        el = elements[idx]
        core = cores[i]
        lab = labels[i]
        out = []
        if directed:
            tails, head = el
            if not core >> head & 1 or heads_used[i] >> head & 1:
                return out
            seen = set()
            for t in sorted(tails):
                if core >> t & 1 and lab[t] != lab[head] and lab[t] not in seen:
                    seen.add(lab[t])
                    out.append((t, head))
        else:
            inside = [v for v in el if core >> v & 1]
            reps: dict[int, int] = {}
            for v in inside:
                reps.setdefault(lab[v], v)
            rs = sorted(reps.values())
            for a, b in combinations(rs, 2):
                out.append((a, b))
        return out

    def dfs(idx: int) -> bool:
        if done():
            return True
        if idx == total or hopeless(total - idx):
            return False
        for i in range(k):
            if counts[i] >= hi[i]:
                continue
            for a, b in moves(idx, i):
                saved = merge(i, a, b)
                counts[i] += 1
                if directed:
                    heads_used[i] |= 1 << b
                chosen[i].append((idx, (a, b)))
                if dfs(idx + 1):
                    return True
                chosen[i].pop()
                if directed:
                    heads_used[i] &= ~(1 << b)
                counts[i] -= 1
                labels[i] = saved
        return dfs(idx + 1)

    if dfs(0):
        return [list(c) for c in chosen]
    return None


def _trim(found, cores, lo, hi, target_total):
    k = len(cores)
    keep = list(lo)
    need = target_total - sum(keep)
    for i in range(k):
        if need <= 0:
            break
        extra = min(min(len(found[i]), hi[i]) - keep[i], need)
        keep[i] += extra
        need -= extra
    return [
        FoundMember(frozenset(_bits(cores[i])), tuple(found[i][: keep[i]]))
        for i in range(k)
    ]
