"""Directed packings at desk scale.

* :func:`check_subpartition_conditions` decides the root-bounded regular
  hyperbranching packing problem through its subpartition conditions.
* :func:`pack_branchings_bounded_desk` builds a packing the way the existence
  proof does: choose root sets by realizing a degree-bounded bipartite graph,
  then pack hyperbranchings with those fixed root sets.  Both steps are
  exhaustive searches, and each is cross-checked against its own existence
  criterion on every run.
* :func:`reduce_partition_instance` maps number partitioning onto packing two
  branchings with a prescribed number of arcs each.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Mapping, Sequence

import numpy as np

from . import partitions as parts
from .core import (
    CapExceeded,
    Digraph,
    Dypergraph,
    Infeasible,
    InvalidInstance,
    PackingSpec,
    TheoremContradiction,
    branching_diagnostics,
    capped_sum,
    validate_spec,
)
from .exhaustive import search_packing
from .forest_packing import ConditionResult

DIRECTED_CAP = 9
BIPARTITE_CONDITION_CAP = 10
BIPARTITE_SEARCH_CAP = 20
ARC_CAP = 8
VERTEX_CAP = 6


def as_dypergraph(d: Digraph | Dypergraph) -> Dypergraph:
    return d.as_dypergraph() if isinstance(d, Digraph) else d


def subpartition_scan(n, arcs, needs, cap: int | None = None) -> ConditionResult:
    """Check ``e(P) >= need(|P|)`` over every subpartition ``P`` (arcs enter blocks)."""
    parts._check_cap(n, cap, DIRECTED_CAP, "subpartition")
    full, sizes = parts.subpartition_table(n)
    if arcs:
        e = parts.entering_matrix_directed(full, n, arcs).sum(axis=1)
    else:
        e = np.zeros(full.shape[0], dtype=np.int64)
    bad_rows = []
    for name, need in needs:
        lookup = np.array([need(p) for p in range(n + 1)], dtype=np.int64)
        bad = np.nonzero(e < lookup[sizes])[0]
        if bad.size:
            bad_rows.append((int(bad[0]), name))
    if not bad_rows:
        return ConditionResult(True, evaluated=full.shape[0])
    row, name = min(bad_rows)
    return ConditionResult(False, name, parts.table_to_subpartition(full[row], n), full.shape[0])


def check_subpartition_conditions(d: Digraph | Dypergraph, spec: PackingSpec, cap: int | None = None) -> ConditionResult:
    """``h|V| >= ell(0)`` and, for every subpartition P,
    ``ell'(0) - ell(K) + ell_|P|(K) + e(P) >= h|P|`` and ``ell'_|P|(K) + e(P) >= h|P|``."""
    d = as_dypergraph(d)
    problems = validate_spec(spec, d.n)
    if problems:
        raise InvalidInstance("; ".join(problems))
    h, lo, up = spec.h, spec.ell, spec.ell_upper
    if h * d.n < spec.lower[0]:
        return ConditionResult(False, "total-capacity")
    slack = spec.upper[0] - sum(lo)
    return subpartition_scan(
        d.n,
        d.hyperarcs,
        [
            ("partition-slack", lambda p: h * p - slack - capped_sum(lo, p)),
            ("partition-upper", lambda p: h * p - capped_sum(up, p)),
        ],
        cap,
    )


# --- degree-bounded bipartite realization -----------------------------------


@dataclass(frozen=True)
class BipartiteRealizationInstance:
    """Bipartite graph wanted between ``S = {s_1..s_k}`` and ``T = V``.

    Degree bounds ``f_s/g_s`` on S, ``f_t/g_t`` on T, edge-count bounds
    ``alpha <= |E| <= beta`` and demand ``|Gamma(Y)| >= p(Y)`` for every
    ``Y`` in ``T`` with ``p(Y) = h - (hyperarcs entering Y)`` and ``p({}) = 0``.
    """

    dypergraph: Dypergraph
    h: int
    f_s: tuple[int, ...]
    g_s: tuple[int, ...]
    f_t: tuple[int, ...]
    g_t: tuple[int, ...]
    alpha: int
    beta: int

    def __post_init__(self):
        if len(self.f_s) != len(self.g_s) or len(self.f_t) != len(self.g_t) or len(self.f_t) != self.dypergraph.n:
            raise InvalidInstance("degree bound vectors have inconsistent lengths")
        if any(a > b for a, b in zip(self.f_s + self.f_t, self.g_s + self.g_t)) or self.alpha > self.beta:
            raise InvalidInstance("lower bounds must not exceed upper bounds")

    @classmethod
    def from_packing_instance(cls, d: Digraph | Dypergraph, spec: PackingSpec) -> BipartiteRealizationInstance:
        d = as_dypergraph(d)
        return cls(d, spec.h, spec.ell, spec.ell_upper, (0,) * d.n, (spec.h,) * d.n, spec.lower[0], spec.upper[0])

    @property
    def k(self) -> int:
        return len(self.f_s)

    @property
    def n(self) -> int:
        return self.dypergraph.n

    def p(self, y) -> int:
        y = frozenset(y)
        return 0 if not y else self.h - self.dypergraph.in_degree(y)

    def p_table(self) -> list[int]:
        """``p`` of every subset of T, indexed by bitmask."""
        return [self.p(v for v in range(self.n) if mask >> v & 1) for mask in range(1 << self.n)]


def intersecting_supermodularity_violations(inst: BipartiteRealizationInstance) -> list[tuple[int, int]]:
    """Pairs of intersecting masks ``(X, Y)`` with ``p(X) + p(Y) > p(X & Y) + p(X | Y)``."""
    p = inst.p_table()
    out = []
    for a in range(1, len(p)):
        for b in range(a + 1, len(p)):
            if a & b and p[a] + p[b] > p[a & b] + p[a | b]:
                out.append((a, b))
    return out


@dataclass(frozen=True)
class BipartiteViolation:
    inequality: str
    x: frozenset[int]  # member indices
    y: frozenset[int]  # vertices
    blocks: parts.Subpartition


@dataclass(frozen=True)
class BipartiteConditionResult:
    ok: bool
    violation: BipartiteViolation | None = None

    def __bool__(self):
        return self.ok


def _subpartitions_of(ground: Sequence[int]):
    for sp in parts.enumerate_subpartitions(len(ground), cap=len(ground)):
        yield parts.Subpartition([ground[i] for i in b] for b in sp)


def check_bfbg_conditions(inst: BipartiteRealizationInstance, cap: int = BIPARTITE_CONDITION_CAP) -> BipartiteConditionResult:
    """Evaluate the four realizability inequalities over all ``X in S``, ``Y in T``, subpartitions of ``T - Y``.

    With ``q = sum p(P) - |X||P| - |X||Y|`` they read
    ``f(Y) + q <= g(S - X)``, ``f(X) + q <= g(T - Y)``,
    ``alpha + q <= g(S - X) + g(T - Y)`` and ``f(X) + f(Y) + q <= beta``.
    """
    k, n = inst.k, inst.n
    if k + n > cap:
        raise CapExceeded(f"|S| + |T| = {k + n} exceeds cap {cap}")
    p = inst.p_table()
    for ysize in range(n + 1):
        for ys in combinations(range(n), ysize):
            y = frozenset(ys)
            rest = [v for v in range(n) if v not in y]
            f_y, g_rest = sum(inst.f_t[v] for v in y), sum(inst.g_t[v] for v in rest)
            best: dict[tuple[int, int], parts.Subpartition] = {}
            for sp in _subpartitions_of(rest):
                key = (sum(p[sum(1 << v for v in b)] for b in sp), len(sp))
                best.setdefault(key, sp)
            for xsize in range(k + 1):
                for xs in combinations(range(k), xsize):
                    x = frozenset(xs)
                    f_x = sum(inst.f_s[i] for i in x)
                    g_sx = sum(inst.g_s[i] for i in range(k) if i not in x)
                    for (psum, psize), sp in best.items():
                        q = psum - xsize * psize - xsize * ysize
                        checks = (
                            ("degree-S", f_y + q <= g_sx),
                            ("degree-T", f_x + q <= g_rest),
                            ("total-lower", inst.alpha + q <= g_sx + g_rest),
                            ("total-upper", f_x + f_y + q <= inst.beta),
                        )
                        for name, ok in checks:
                            if not ok:
                                return BipartiteConditionResult(False, BipartiteViolation(name, x, y, sp))
    return BipartiteConditionResult(True)


def realize_bipartite(inst: BipartiteRealizationInstance, cap: int = BIPARTITE_SEARCH_CAP) -> tuple[frozenset[int], ...] | None:
    """Exhaustive search for the neighbour sets ``N(s_1), ..., N(s_k)``.

    Returns ``None`` when no realization exists; the outcome is asserted to
    match :func:`check_bfbg_conditions`.
    """
    k, n = inst.k, inst.n
    if k * n > cap:
        raise CapExceeded(f"|S| * |T| = {k * n} exceeds cap {cap}")
    p = inst.p_table()
    demands = [(mask, p[mask]) for mask in range(1, 1 << n) if p[mask] > 0]
    options = []
    for i in range(k):
        opts = [m for m in range(1 << n) if inst.f_s[i] <= bin(m).count("1") <= inst.g_s[i]]
        options.append(opts)
    g_rest = [sum(inst.g_s[j] for j in range(i, k)) for i in range(k + 1)]
    chosen: list[int] = []
    tdeg = [0] * n

    def feasible_so_far(i: int, edges: int) -> bool:
        if edges > inst.beta or edges + g_rest[i] < inst.alpha:
            return False
        left = k - i
        for mask, need in demands:
            hit = sum(1 for m in chosen if m & mask)
            if hit + left < need:
                return False
        return True

    def dfs(i: int, edges: int) -> bool:
        if not feasible_so_far(i, edges):
            return False
        if i == k:
            return all(tdeg[v] >= inst.f_t[v] for v in range(n))
        for m in options[i]:
            vs = [v for v in range(n) if m >> v & 1]
            if any(tdeg[v] >= inst.g_t[v] for v in vs):
                continue
            for v in vs:
                tdeg[v] += 1
            chosen.append(m)
            if dfs(i + 1, edges + len(vs)):
                return True
            chosen.pop()
            for v in vs:
                tdeg[v] -= 1
        return False

    found = dfs(0, 0)
    expected = bool(check_bfbg_conditions(inst))
    if found != expected:
        raise TheoremContradiction(
            f"bipartite realization {'found' if found else 'missing'} but the conditions say {expected}"
        )
    if not found:
        return None
    return tuple(frozenset(v for v in range(n) if m >> v & 1) for m in chosen)


# --- hyperbranching packings ------------------------------------------------


@dataclass(frozen=True)
class HyperbranchingMember:
    """Hyperarc index set, roots and the trimmed arc ``(tail, head)`` chosen for each hyperarc."""

    hyperarcs: frozenset[int]
    roots: frozenset[int]
    orientation: Mapping[int, tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "hyperarcs", frozenset(self.hyperarcs))
        object.__setattr__(self, "roots", frozenset(self.roots))
        object.__setattr__(self, "orientation", {int(a): (int(t), int(h)) for a, (t, h) in dict(self.orientation).items()})

    def __hash__(self):
        return hash((self.hyperarcs, self.roots, tuple(sorted(self.orientation.items()))))

    @property
    def core(self) -> frozenset[int]:
        return self.roots | {h for _, h in self.orientation.values()}


@dataclass(frozen=True)
class HyperbranchingPacking:
    members: tuple[HyperbranchingMember, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))

    def __len__(self) -> int:
        return len(self.members)


def root_family_violations(d: Dypergraph, roots: Sequence[frozenset[int]], h: int) -> list[str]:
    """Conditions for fixed root sets: ``|{i: S_i meets X}| + d_in(X) >= h`` for nonempty X, ``|{i: v in S_i}| <= h``."""
    out = []
    for v in range(d.n):
        c = sum(v in s for s in roots)
        if c > h:
            out.append(f"vertex {v} is a root of {c} > h members")
    for mask in range(1, 1 << d.n):
        x = frozenset(v for v in range(d.n) if mask >> v & 1)
        if sum(bool(s & x) for s in roots) + d.in_degree(x) < h:
            out.append(f"set {sorted(x)} is reached by too few members")
    return out


def pack_hyperbranchings_exhaustive(
    d: Digraph | Dypergraph, roots: Sequence[Sequence[int]], h: int, arc_cap: int = ARC_CAP, vertex_cap: int = VERTEX_CAP
) -> HyperbranchingPacking | None:
    """h-regular packing of hyperbranchings with the given root sets, by exhaustive search.

    The outcome is asserted to match :func:`root_family_violations`.
    """
    d = as_dypergraph(d)
    n, k = d.n, len(roots)
    if d.m > arc_cap or n > vertex_cap:
        raise CapExceeded(f"{d.m} hyperarcs / {n} vertices exceed caps {arc_cap}/{vertex_cap}")
    roots = [frozenset(s) for s in roots]
    result = _search_fixed_roots(d, roots, h)
    expected = not root_family_violations(d, roots, h)
    if (result is not None) != expected:
        raise TheoremContradiction(
            f"fixed-root packing {'found' if result is not None else 'missing'} but the conditions say {expected}"
        )
    return result


def _search_fixed_roots(d: Dypergraph, roots: list[frozenset[int]], h: int) -> HyperbranchingPacking | None:
    n, k = d.n, len(roots)
    per_vertex = []
    for v in range(n):
        forced = tuple(i for i in range(k) if v in roots[i])
        if len(forced) > h:
            return None
        others = [i for i in range(k) if v not in roots[i]]
        per_vertex.append([forced + extra for extra in combinations(others, h - len(forced))])
    by_head: dict[int, list[int]] = {}
    for a, (_, head) in enumerate(d.hyperarcs):
        by_head.setdefault(head, []).append(a)
    for pick in product(*per_vertex):
        cores = [0] * k
        for v, members in enumerate(pick):
            for i in members:
                cores[i] |= 1 << v
        slots = [(i, v) for i in range(k) for v in range(n) if cores[i] >> v & 1 and v not in roots[i]]
        if len(slots) > d.m:
            continue
        found = _fill_slots(d, cores, slots, by_head)
        if found is not None:
            members = []
            for i in range(k):
                orient = {a: arc for (j, _), (a, arc) in zip(slots, found) if j == i}
                members.append(HyperbranchingMember(frozenset(orient), roots[i], orient))
            return HyperbranchingPacking(tuple(members))
    return None


def _fill_slots(d, cores, slots, by_head):
    """Give each (member, vertex) slot its own hyperarc and tail, keeping members acyclic."""
    n, k = d.n, len(cores)
    labels = [list(range(n)) for _ in range(k)]
    used = set()
    picks: list[tuple[int, tuple[int, int]]] = []

    def dfs(s: int) -> bool:
        if s == len(slots):
            return True
        i, v = slots[s]
        lab = labels[i]
        for a in by_head.get(v, ()):
            if a in used:
                continue
            tails, _ = d.hyperarcs[a]
            for t in sorted(tails):
                if not cores[i] >> t & 1 or lab[t] == lab[v]:
                    continue
                saved = lab[:]
                old = lab[v]
                for u in range(n):
                    if lab[u] == old:
                        lab[u] = lab[t]
                used.add(a)
                picks.append((a, (t, v)))
                if dfs(s + 1):
                    return True
                picks.pop()
                used.discard(a)
                labels[i] = saved
                lab = saved
        return False

    return list(picks) if dfs(0) else None


def verify_hyperbranching_packing(d: Digraph | Dypergraph, packing: HyperbranchingPacking, spec: PackingSpec) -> list[str]:
    """Replay witnesses; check disjointness, root bounds and exact h-coverage of cores."""
    d = as_dypergraph(d)
    out = []
    if len(packing) != spec.k:
        return [f"expected {spec.k} members, got {len(packing)}"]
    owner: dict[int, int] = {}
    cover = [0] * d.n
    for i, member in enumerate(packing.members, 1):
        for a in sorted(member.hyperarcs):
            if not 0 <= a < d.m:
                out.append(f"witness: member {i} uses unknown hyperarc {a}")
                continue
            if a in owner:
                out.append(f"disjointness: hyperarc {a} in members {owner[a]} and {i}")
            owner[a] = i
        if set(member.orientation) != set(member.hyperarcs):
            out.append(f"witness: member {i} orientation does not match its hyperarcs")
        else:
            for a, (t, hd) in member.orientation.items():
                if 0 <= a < d.m:
                    tails, head = d.hyperarcs[a]
                    if hd != head or t not in tails:
                        out.append(f"witness: member {i} trims hyperarc {a} to unavailable {t}->{hd}")
            diag = branching_diagnostics(d.n, list(member.orientation.values()), member.roots, member.core)
            out.extend(f"witness: member {i}: {x}" for x in diag)
        r = len(member.roots)
        if not spec.lower[i] <= r <= spec.upper[i]:
            out.append(f"root bounds: member {i} has {r} roots, allowed [{spec.lower[i]}, {spec.upper[i]}]")
        for v in member.core:
            if 0 <= v < d.n:
                cover[v] += 1
    total = sum(len(m.roots) for m in packing.members)
    if not spec.lower[0] <= total <= spec.upper[0]:
        out.append(f"root bounds: total {total} outside [{spec.lower[0]}, {spec.upper[0]}]")
    for v, c in enumerate(cover):
        if c != spec.h:
            out.append(f"coverage: vertex {v} lies in {c} cores, expected {spec.h}")
    return out


@dataclass
class DeskLog:
    """What the desk pipeline computed, for inspection."""

    conditions: ConditionResult | None = None
    bipartite: BipartiteConditionResult | None = None
    root_sets: tuple[frozenset[int], ...] | None = None


def pack_branchings_bounded_desk(
    d: Digraph | Dypergraph, spec: PackingSpec, cap: int | None = None, log: DeskLog | None = None
) -> HyperbranchingPacking:
    """h-regular packing of ``spec.k`` S_i-hyperbranchings with the root bounds of ``spec``.

    Root sets come from a bipartite realization, the packing from an
    exhaustive fixed-root search.  Raises :class:`Infeasible` with a
    subpartition witness when the conditions fail.
    """
    d = as_dypergraph(d)
    if d.n < 1:
        raise InvalidInstance("empty vertex set")
    log = log if log is not None else DeskLog()
    cond = check_subpartition_conditions(d, spec, cap)
    inst = BipartiteRealizationInstance.from_packing_instance(d, spec)
    if intersecting_supermodularity_violations(inst):
        raise TheoremContradiction("demand function is not intersecting supermodular")
    bip = check_bfbg_conditions(inst)
    log.conditions, log.bipartite = cond, bip
    if bool(bip) != bool(cond):
        raise TheoremContradiction(
            f"subpartition conditions say {bool(cond)} but the bipartite conditions say {bool(bip)}"
        )
    realized = realize_bipartite(inst)
    if not cond:
        raise Infeasible(cond.condition, cond.witness)
    assert realized is not None  # realize_bipartite already asserted agreement
    log.root_sets = realized
    packing = pack_hyperbranchings_exhaustive(d, realized, spec.h)
    if packing is None:
        raise TheoremContradiction("realized root sets admit no packing")
    diag = verify_hyperbranching_packing(d, packing, spec)
    if diag:
        raise TheoremContradiction("desk pipeline output fails verification: " + "; ".join(diag))
    return packing


def brute_force_branching_packing(
    d: Digraph | Dypergraph, spec: PackingSpec, element_cap: int = 10, cover_cap: int = 20
) -> HyperbranchingPacking | None:
    """Direct exhaustive search over cores and trimmed arcs, sharing nothing with the pipeline."""
    d = as_dypergraph(d)
    found = search_packing(d.n, d.hyperarcs, spec, directed=True, element_cap=element_cap, cover_cap=cover_cap)
    if found is None:
        return None
    members = []
    for fm in found:
        orient = dict(fm.arcs)
        heads = {hd for _, hd in orient.values()}
        members.append(HyperbranchingMember(frozenset(orient), fm.core - heads, orient))
    return HyperbranchingPacking(tuple(members))


# --- number partitioning ----------------------------------------------------


@dataclass(frozen=True)
class PartitionReduction:
    digraph: Digraph
    h: int
    k: int
    ell: int
    odd_total: bool


def reduce_partition_instance(weights: Sequence[int]) -> PartitionReduction:
    """Disjoint directed paths with ``a_i`` arcs, ``h = 1``, ``k = 2``, ``ell = ceil(total / 2)``.

    For an odd total the instance asks for more arcs than exist and is
    therefore negative, matching the number-partitioning side.
    """
    weights = list(weights)
    if not weights or any(not isinstance(a, int) or a < 1 for a in weights):
        raise InvalidInstance("weights must be a nonempty list of positive integers")
    arcs = []
    start = 0
    for a in weights:
        arcs.extend((start + j, start + j + 1) for j in range(a))
        start += a + 1
    total = sum(weights)
    return PartitionReduction(Digraph(start, tuple(arcs)), 1, 2, -(-total // 2), total % 2 == 1)


def partition_has_solution(weights: Sequence[int]) -> bool:
    """Is there a subset with exactly half of the total weight?"""
    total = sum(weights)
    if total % 2:
        return False
    reachable = {0}
    for a in weights:
        reachable |= {s + a for s in reachable}
    return total // 2 in reachable


def brute_force_arc_count_packing(d: Digraph, h: int, k: int, ell: int) -> list[frozenset[int]] | None:
    """h-regular packing of k branchings with exactly ``ell`` arcs each, by exhaustive search.

    Members' cores must contain every endpoint of their arcs; untouched
    vertices are topped up as isolated roots, which is possible iff ``k >= h``
    and no vertex is forced into more than ``h`` cores.
    """
    n, m = d.n, d.m
    if k < h:
        return None
    assign = [-1] * m
    counts = [0] * k
    indeg = [[0] * n for _ in range(k)]
    labels = [list(range(n)) for _ in range(k)]
    touch = [[0] * n for _ in range(k)]

    def forced_ok(vs) -> bool:
        return all(sum(touch[i][v] > 0 for i in range(k)) <= h for v in vs)

    def dfs(a: int) -> bool:
        need = sum(ell - c for c in counts)
        if need > m - a:
            return False
        if a == m:
            return need == 0
        t, hd = d.arcs[a]
        for i in range(k):
            if counts[i] == ell or indeg[i][hd] or labels[i][t] == labels[i][hd]:
                continue
            saved = labels[i][:]
            old = labels[i][hd]
            labels[i] = [labels[i][t] if x == old else x for x in labels[i]]
            indeg[i][hd] += 1
            touch[i][t] += 1
            touch[i][hd] += 1
            counts[i] += 1
            assign[a] = i
            if forced_ok((t, hd)) and dfs(a + 1):
                return True
            assign[a] = -1
            counts[i] -= 1
            touch[i][t] -= 1
            touch[i][hd] -= 1
            indeg[i][hd] -= 1
            labels[i] = saved
        return dfs(a + 1)

    if not dfs(0):
        return None
    return [frozenset(a for a in range(m) if assign[a] == i) for i in range(k)]


__all__ = [
    "BipartiteConditionResult",
    "BipartiteRealizationInstance",
    "BipartiteViolation",
    "DeskLog",
    "HyperbranchingMember",
    "HyperbranchingPacking",
    "PartitionReduction",
    "brute_force_arc_count_packing",
    "brute_force_branching_packing",
    "check_bfbg_conditions",
    "check_subpartition_conditions",
    "intersecting_supermodularity_violations",
    "pack_branchings_bounded_desk",
    "pack_hyperbranchings_exhaustive",
    "partition_has_solution",
    "realize_bipartite",
    "reduce_partition_instance",
    "root_family_violations",
    "subpartition_scan",
    "verify_hyperbranching_packing",
]
