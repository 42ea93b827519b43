"""Ground data types: graphs, hypergraphs, digraphs, dypergraphs, packing specs and packings.

Vertices are dense integer indices ``0..n-1``.  Every structure keeps its
(hyper)edges/(hyper)arcs in an ordered tuple, and packings refer to them by
position, so parallel copies are distinct elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class ForestpackError(Exception):
    """Base class for library errors."""


class InvalidInstance(ForestpackError, ValueError):
    """A structure or spec violates its construction invariants."""


class CapExceeded(ForestpackError):
    """An exhaustive routine was asked to run beyond its configured size cap."""


class Infeasible(ForestpackError):
    """No packing exists.

    ``condition`` names the violated condition and ``witness`` is a partition
    or subpartition (tuple of frozensets) certifying it, or ``None`` for
    conditions that do not involve one.
    """

    def __init__(self, condition: str, witness=None, detail: str = ""):
        self.condition = condition
        self.witness = witness
        self.detail = detail
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


class TheoremContradiction(ForestpackError, AssertionError):
    """Two routes that must agree by a proved theorem disagreed.

    Raised by the cross-assertions built into the pipelines; seeing one means a
    bug (or a misread definition), never bad input.
    """


def _check_vertex(v: int, n: int) -> None:
    if not isinstance(v, int) or v < 0 or v >= n:
        raise InvalidInstance(f"vertex {v!r} outside 0..{n - 1}")


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInstance("negative vertex count")
        edges = tuple(tuple(e) for e in self.edges)
        for u, v in edges:
            _check_vertex(u, self.n)
            _check_vertex(v, self.n)
            if u == v:
                raise InvalidInstance(f"self-loop at {u}")
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def as_hypergraph(self) -> Hypergraph:
        return Hypergraph(self.n, tuple(frozenset(e) for e in self.edges))


@dataclass(frozen=True)
class Hypergraph:
    n: int
    hyperedges: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInstance("negative vertex count")
        hyperedges = tuple(frozenset(x) for x in self.hyperedges)
        for x in hyperedges:
            if len(x) < 2:
                raise InvalidInstance(f"hyperedge {sorted(x)} has fewer than two vertices")
            for v in x:
                _check_vertex(v, self.n)
        object.__setattr__(self, "hyperedges", hyperedges)

    @property
    def m(self) -> int:
        return len(self.hyperedges)

    def is_graph(self) -> bool:
        return all(len(x) == 2 for x in self.hyperedges)

    def as_graph(self) -> Graph:
        if not self.is_graph():
            raise InvalidInstance("hypergraph has a hyperedge of size > 2")
        return Graph(self.n, tuple(tuple(sorted(x)) for x in self.hyperedges))


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInstance("negative vertex count")
        arcs = tuple(tuple(a) for a in self.arcs)
        for tail, head in arcs:
            _check_vertex(tail, self.n)
            _check_vertex(head, self.n)
            if tail == head:
                raise InvalidInstance(f"self-loop at {tail}")
        object.__setattr__(self, "arcs", arcs)

    @property
    def m(self) -> int:
        return len(self.arcs)

    def as_dypergraph(self) -> Dypergraph:
        return Dypergraph(self.n, tuple((frozenset({t}), h) for t, h in self.arcs))


@dataclass(frozen=True)
class Dypergraph:
    """Directed hypergraph; each hyperarc is ``(tails, head)``."""

    n: int
    hyperarcs: tuple[tuple[frozenset[int], int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInstance("negative vertex count")
        hyperarcs = tuple((frozenset(t), h) for t, h in self.hyperarcs)
        for tails, head in hyperarcs:
            if not tails:
                raise InvalidInstance("hyperarc without tails")
            _check_vertex(head, self.n)
            for v in tails:
                _check_vertex(v, self.n)
            if head in tails:
                raise InvalidInstance(f"head {head} is also a tail")
        object.__setattr__(self, "hyperarcs", hyperarcs)

    @property
    def m(self) -> int:
        return len(self.hyperarcs)

    def in_degree(self, block: Iterable[int], arcs: Iterable[int] | None = None) -> int:
        """Number of hyperarcs (optionally restricted to ``arcs``) entering ``block``."""
        block = frozenset(block)
        idx = range(self.m) if arcs is None else arcs
        count = 0
        for a in idx:
            tails, head = self.hyperarcs[a]
            if head in block and not tails <= block:
                count += 1
        return count


@dataclass(frozen=True)
class PackingSpec:
    """Root-budget problem statement.

    ``lower`` and ``upper`` have length ``k + 1``; index 0 carries the bounds on
    the total number of roots, index ``i`` the bounds for member ``i``.
    """

    h: int
    k: int
    lower: tuple[int, ...]
    upper: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(int(x) for x in self.lower))
        object.__setattr__(self, "upper", tuple(int(x) for x in self.upper))
        if self.h < 1 or self.k < 1:
            raise InvalidInstance("h and k must be positive")
        if len(self.lower) != self.k + 1 or len(self.upper) != self.k + 1:
            raise InvalidInstance("lower/upper must have length k + 1")
        if min(self.lower) < 1 or min(self.upper) < 1:
            raise InvalidInstance("root bounds must be positive")

    @classmethod
    def fixed(cls, h: int, ell: Sequence[int]) -> PackingSpec:
        """Spec with exactly ``ell[i]`` roots for member ``i`` (no slack)."""
        ell = tuple(ell)
        total = sum(ell)
        return cls(h, len(ell), (total, *ell), (total, *ell))

    @classmethod
    def spanning(cls, ell: Sequence[int]) -> PackingSpec:
        return cls.fixed(len(ell), ell)

    @property
    def ell(self) -> tuple[int, ...]:
        """Per-member lower bounds ``ell(1..k)``."""
        return self.lower[1:]

    @property
    def ell_upper(self) -> tuple[int, ...]:
        return self.upper[1:]

    @property
    def is_fixed(self) -> bool:
        return self.lower == self.upper and self.lower[0] == sum(self.ell)

    @property
    def is_spanning(self) -> bool:
        return self.h == self.k


def validate_spec(spec: PackingSpec, n: int) -> list[str]:
    """Return the violated hypotheses on the bound functions (empty list: valid)."""
    problems = []
    lo_total, up_total = sum(spec.ell), sum(spec.ell_upper)
    if not up_total >= spec.upper[0]:
        problems.append(f"upper total {spec.upper[0]} exceeds sum of upper bounds {up_total}")
    if not spec.upper[0] >= spec.lower[0]:
        problems.append(f"lower total {spec.lower[0]} exceeds upper total {spec.upper[0]}")
    if not spec.lower[0] >= lo_total:
        problems.append(f"sum of lower bounds {lo_total} exceeds lower total {spec.lower[0]}")
    for i in range(1, spec.k + 1):
        if spec.upper[i] < spec.lower[i]:
            problems.append(f"member {i}: lower bound {spec.lower[i]} exceeds upper bound {spec.upper[i]}")
        if spec.upper[i] > n:
            problems.append(f"member {i}: upper bound {spec.upper[i]} exceeds |V| = {n}")
    return problems


def ell_p(ell: Sequence[int], p: int) -> tuple[int, ...]:
    """Pointwise cap ``i -> min(ell(i), p)``."""
    if p < 0:
        raise ValueError("p must be non-negative")
    return tuple(min(x, p) for x in ell)


def capped_sum(ell: Sequence[int], p: int) -> int:
    """``sum_i min(ell(i), p)``."""
    return sum(min(x, p) for x in ell)


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.components = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        self.components -= 1
        return True


def components(n: int, pairs: Iterable[tuple[int, int]], vertices: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Connected components of ``(vertices, pairs)``, sorted by minimum element."""
    uf = UnionFind(n)
    for u, v in pairs:
        uf.union(u, v)
    groups: dict[int, set[int]] = {}
    for v in range(n) if vertices is None else vertices:
        groups.setdefault(uf.find(v), set()).add(v)
    return sorted((frozenset(g) for g in groups.values()), key=min)


@dataclass(frozen=True)
class RootedForest:
    """An ``S``-forest: edge indices of a host graph, explicit vertex support and roots.

    The support is the set of vertices the member covers; for spanning members
    it is all of ``V``.  Roots hold one vertex per component of ``(support, edges)``.
    """

    edges: frozenset[int]
    roots: frozenset[int]
    support: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))
        object.__setattr__(self, "roots", frozenset(self.roots))
        object.__setattr__(self, "support", frozenset(self.support))


@dataclass(frozen=True)
class RootedForestPacking:
    members: tuple[RootedForest, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))

    def __len__(self) -> int:
        return len(self.members)


def forest_diagnostics(g: Graph, member: RootedForest) -> list[str]:
    """Problems with a single rooted forest member (empty list: valid)."""
    out = []
    for e in member.edges:
        if not 0 <= e < g.m:
            out.append(f"edge index {e} out of range")
            return out
    for e in sorted(member.edges):
        u, v = g.edges[e]
        if u not in member.support or v not in member.support:
            out.append(f"edge {e} leaves the support")
    if not member.roots <= member.support:
        out.append("roots outside support")
    if out:
        return out
    uf = UnionFind(g.n)
    for e in sorted(member.edges):
        if not uf.union(*g.edges[e]):
            out.append(f"edge {e} closes a cycle")
            return out
    rooted: dict[int, int] = {}
    for r in member.roots:
        rooted[uf.find(r)] = rooted.get(uf.find(r), 0) + 1
    comps = {uf.find(v) for v in member.support}
    if any(c not in rooted for c in comps):
        out.append("a component has no root")
    if any(cnt > 1 for cnt in rooted.values()):
        out.append("a component has several roots")
    return out


def verify_regular_forest_packing(g: Graph, packing: RootedForestPacking, spec: PackingSpec) -> list[str]:
    """Full contract check of a rooted forest packing; returns diagnostics (empty: valid).

    Checks member count, edge-disjointness, that every member is an S_i-forest
    on its support, the per-member and total root bounds, and that every
    vertex lies in exactly ``h`` supports.
    """
    out = []
    if len(packing) != spec.k:
        return [f"expected {spec.k} members, got {len(packing)}"]
    seen: dict[int, int] = {}
    for i, member in enumerate(packing.members, 1):
        for e in member.edges:
            if e in seen:
                out.append(f"disjointness: edge {e} in members {seen[e]} and {i}")
            seen[e] = i
        out.extend(f"member {i}: {msg}" for msg in forest_diagnostics(g, member))
        r = len(member.roots)
        if not spec.lower[i] <= r <= spec.upper[i]:
            out.append(f"root bounds: member {i} has {r} roots, allowed [{spec.lower[i]}, {spec.upper[i]}]")
    total = sum(len(m.roots) for m in packing.members)
    if not spec.lower[0] <= total <= spec.upper[0]:
        out.append(f"root bounds: total {total} outside [{spec.lower[0]}, {spec.upper[0]}]")
    cover = [0] * g.n
    for member in packing.members:
        for v in member.support:
            if 0 <= v < g.n:
                cover[v] += 1
    for v, c in enumerate(cover):
        if c != spec.h:
            out.append(f"coverage: vertex {v} lies in {c} supports, expected {spec.h}")
    return out


@dataclass(frozen=True)
class HyperforestMember:
    """Rooted hyperforest member with its orientation witness.

    ``orientation`` maps each hyperedge index to the trimmed arc ``(tail, head)``;
    the core is the set of heads together with the roots.
    """

    hyperedges: frozenset[int]
    roots: frozenset[int]
    orientation: Mapping[int, tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "hyperedges", frozenset(self.hyperedges))
        object.__setattr__(self, "roots", frozenset(self.roots))
        object.__setattr__(self, "orientation", {int(k): (int(t), int(h)) for k, (t, h) in dict(self.orientation).items()})

    def __hash__(self):
        return hash((self.hyperedges, self.roots, tuple(sorted(self.orientation.items()))))

    @property
    def core(self) -> frozenset[int]:
        return self.roots | {h for _, h in self.orientation.values()}


@dataclass(frozen=True)
class RootedHyperforestPacking:
    members: tuple[HyperforestMember, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))

    def __len__(self) -> int:
        return len(self.members)


def branching_diagnostics(n: int, arcs: Sequence[tuple[int, int]], roots: frozenset[int], core: frozenset[int]) -> list[str]:
    """Is ``(core, arcs)`` an ``roots``-branching?  Returns problems (empty: yes)."""
    out = []
    if not roots <= core:
        out.append("roots outside core")
    indeg: dict[int, int] = {}
    for t, h in arcs:
        if t not in core or h not in core:
            out.append(f"arc {t}->{h} leaves the core")
        indeg[h] = indeg.get(h, 0) + 1
    for v, d in indeg.items():
        if d > 1:
            out.append(f"vertex {v} has in-degree {d}")
        if v in roots:
            out.append(f"root {v} has an entering arc")
    for v in core - roots:
        if indeg.get(v, 0) == 0:
            out.append(f"non-root core vertex {v} has no entering arc")
    if out:
        return out
    uf = UnionFind(n)
    for t, h in arcs:
        if not uf.union(t, h):
            out.append("cycle")
            break
    return out


def hyperbranching_member_diagnostics(
    heads_tails: Mapping[int, tuple[frozenset[int], int]],
    orientation: Mapping[int, tuple[int, int]],
    roots: frozenset[int],
    n: int,
) -> list[str]:
    """Check one oriented member: ``heads_tails`` maps element index to ``(tails, head)``
    as available in the host, ``orientation`` maps it to the chosen ``(tail, head)``."""
    out = []
    if set(orientation) != set(heads_tails):
        out.append("orientation does not cover exactly the member's elements")
        return out
    for idx, (tails, head) in heads_tails.items():
        t, h = orientation[idx]
        if h != head or t not in tails:
            out.append(f"element {idx}: trimmed arc {t}->{h} not available")
    if out:
        return out
    core = roots | {h for _, h in orientation.values()}
    return branching_diagnostics(n, list(orientation.values()), roots, core)
