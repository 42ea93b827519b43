"""Packings of rooted forests in graphs.

Three constructive routines, each raising :class:`~forestpack.core.Infeasible`
with a certificate when no packing exists:

* :func:`pack_spanning_forests` - k edge-disjoint spanning forests with
  prescribed component counts, through matroid partition on truncated
  graphic matroids.
* :func:`pack_regular_forests` - h-regular packing of k forests with
  prescribed component counts: pack h spanning forests with an evened-out
  target, shift edges towards the forest with fewest components until no
  component of the others crosses it, then deal the components out.
* :func:`pack_regular_forests_bounded` - per-member and total root bounds:
  raise the root counts greedily to the largest admissible total and reduce
  to the previous routine.

The partition conditions are checked by enumeration (``check_*``); the
exhaustive oracle :func:`brute_force_regular_packing` is independent of all
of the above.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import partitions as parts
from .core import (
    CapExceeded,
    Graph,
    Infeasible,
    InvalidInstance,
    PackingSpec,
    RootedForest,
    RootedForestPacking,
    TheoremContradiction,
    UnionFind,
    capped_sum,
    components,
    validate_spec,
    verify_regular_forest_packing,
)
from .exhaustive import search_packing
from .matroids import GraphicMatroid, TruncatedMatroid, matroid_partition
from .partitions import Partition

STEP_CHECK_CAP = 8


@dataclass(frozen=True)
class ConditionResult:
    """Outcome of a condition check; truthy when every condition holds."""

    ok: bool
    condition: str | None = None
    witness: parts.Subpartition | None = None
    evaluated: int = 0

    def __bool__(self):
        return self.ok

    def raise_if_failed(self):
        if not self.ok:
            raise Infeasible(self.condition, self.witness)


PASS = ConditionResult(True)


def partition_scan(
    n: int,
    vertex_sets: Sequence[frozenset[int]],
    needs: Sequence[tuple[str, Callable[[int], int]]],
    cap: int | None = None,
) -> ConditionResult:
    """Check ``e(P) >= need(|P|)`` for every partition ``P`` and every named need.

    ``e(P)`` counts the sets crossing ``P``.  The first violation in
    restricted-growth order (then by need order) is returned as witness.
    """
    parts._check_cap(n, cap, parts.PARTITION_CAP, "partition")
    table = parts.partition_table(n)
    sizes = table.max(axis=1).astype(np.int64) + 1 if n else np.zeros(1, dtype=np.int64)
    if vertex_sets:
        e = parts.crossing_matrix(table, vertex_sets).sum(axis=1)
    else:
        e = np.zeros(table.shape[0], dtype=np.int64)
    bad_rows = []
    for name, need in needs:
        lookup = np.array([need(p) for p in range(n + 1)], dtype=np.int64)
        bad = np.nonzero(e < lookup[sizes])[0]
        if bad.size:
            bad_rows.append((int(bad[0]), name))
    if not bad_rows:
        return ConditionResult(True, evaluated=table.shape[0])
    row, name = min(bad_rows)
    return ConditionResult(False, name, parts.table_to_partition(table[row]), table.shape[0])


def _edge_sets(g: Graph) -> list[frozenset[int]]:
    return [frozenset(e) for e in g.edges]


def condition_value(g_sets: Sequence[frozenset[int]], p: Sequence[frozenset[int]]) -> int:
    return sum(parts.crosses(x, p) for x in g_sets)


# --- spanning forests with prescribed component counts ----------------------


def check_condition_25(g: Graph, k: int, ell: Sequence[int], cap: int | None = None) -> ConditionResult:
    """k spanning forests with ``ell(i)`` components: ``ell_|P|(K) + e(P) >= k|P|`` for all P."""
    ell = tuple(ell)
    _check_ell(k, ell)
    if any(x > g.n for x in ell):
        return ConditionResult(False, "member-size")
    return partition_scan(g.n, _edge_sets(g), [("partition", lambda p: k * p - capped_sum(ell, p))], cap)


def _check_ell(k: int, ell: Sequence[int]) -> None:
    if len(ell) != k or k < 1 or min(ell) < 1:
        raise InvalidInstance("ell must list k positive values")


def _truncated(g: Graph, ell: Sequence[int]) -> list[TruncatedMatroid]:
    base = GraphicMatroid(g)
    return [TruncatedMatroid(base, g.n - x) for x in ell]


def check_condition_25_matroid(g: Graph, k: int, ell: Sequence[int]) -> ConditionResult:
    """Same condition decided through the rank of the sum of truncated graphic matroids."""
    ell = tuple(ell)
    _check_ell(k, ell)
    if any(x > g.n for x in ell):
        return ConditionResult(False, "member-size")
    res = matroid_partition(_truncated(g, ell), range(g.m))
    if len(res.independent) >= k * g.n - sum(ell):
        return PASS
    witness = Partition(components(g.n, (g.edges[e] for e in res.dual)))
    return ConditionResult(False, "partition", witness)


def _roots_for(n: int, edges: Sequence[tuple[int, int]], support) -> frozenset[int]:
    return frozenset(min(c) for c in components(n, edges, support))


def pack_spanning_forests(g: Graph, k: int, ell: Sequence[int]) -> RootedForestPacking:
    """k edge-disjoint spanning forests, forest ``i`` with exactly ``ell[i]`` components.

    Roots are the minimum vertex of each component.  On failure the witness is
    the component partition of the matroid dual set, which violates the
    partition condition.
    """
    ell = tuple(ell)
    _check_ell(k, ell)
    if g.n < 1:
        raise InvalidInstance("empty vertex set")
    for i, x in enumerate(ell, 1):
        if x > g.n:
            raise Infeasible("member-size", detail=f"member {i} asks for {x} > |V| components")
    res = matroid_partition(_truncated(g, ell), range(g.m))
    need = k * g.n - sum(ell)
    if len(res.independent) < need:
        witness = Partition(components(g.n, (g.edges[e] for e in res.dual)))
        p = len(witness)
        if condition_value(_edge_sets(g), witness) >= k * p - capped_sum(ell, p):
            raise TheoremContradiction("matroid dual set does not yield a violated partition")
        raise Infeasible("partition", witness)
    members = []
    full = frozenset(range(g.n))
    for cls, x in zip(res.classes, ell):
        if len(cls) != g.n - x:
            raise TheoremContradiction(f"class of size {len(cls)} where {g.n - x} was forced")
        members.append(RootedForest(cls, _roots_for(g.n, [g.edges[e] for e in cls], full), full))
    return RootedForestPacking(tuple(members))


# --- h-regular packings with prescribed component counts ---------------------


def check_conditions_27(g: Graph, h: int, k: int, ell: Sequence[int], cap: int | None = None) -> ConditionResult:
    """``|V| >= ell(i)``, ``h|V| >= ell(K)`` and ``ell_|P|(K) + e(P) >= h|P|`` for all P."""
    ell = tuple(ell)
    _check_ell(k, ell)
    if any(x > g.n for x in ell):
        return ConditionResult(False, "member-size")
    if h * g.n < sum(ell):
        return ConditionResult(False, "total-capacity")
    return partition_scan(g.n, _edge_sets(g), [("partition", lambda p: h * p - capped_sum(ell, p))], cap)


def even_split(ell: Sequence[int], h: int, n: int) -> tuple[int, list[int]]:
    """Target component counts for the ``h`` spanning forests.

    ``ell`` is sorted non-increasing with ``len(ell) > h``.  Returns ``(i0, target)``:
    the first ``i0`` targets are copied from ``ell``, the remaining mass
    ``sum(ell[i0:])`` is spread evenly (values ``q`` and ``q - 1``) over the other
    ``h - i0`` forests, where ``i0`` is the largest index with
    ``(h - i0) * ell(i0) >= sum(ell[i0:])`` and ``ell(0)`` counts as ``n``.
    """
    k = len(ell)
    ext = [n, *ell]  # ext[j] = ell(j), 1-based, ell(0) = |V|
    i0 = 0
    for i in range(h):
        if (h - i) * ext[i] >= sum(ell[i:]):
            i0 = i
    rest = sum(ell[i0:])
    slots = h - i0
    q = -(-rest // slots)
    high = rest - slots * (q - 1)
    target = list(ell[:i0]) + [q] * high + [q - 1] * (slots - high)
    if not (ext[i0] >= q > ext[i0 + 1]) or len(target) != h or k <= h:
        raise TheoremContradiction("even split violates its defining inequalities")
    return i0, target


@dataclass
class ExchangeLog:
    """Trace of :func:`pack_regular_forests` for inspection in tests."""

    i0: int = 0
    target: list[int] = field(default_factory=list)
    events: list[tuple] = field(default_factory=list)


def _ncomp(n: int, g: Graph, forest) -> int:
    uf = UnionFind(n)
    for e in forest:
        if not uf.union(*g.edges[e]):
            raise TheoremContradiction("exchange produced a cycle")
    return uf.components


def pack_regular_forests(
    g: Graph, h: int, k: int, ell: Sequence[int], log: ExchangeLog | None = None
) -> RootedForestPacking:
    """h-regular packing of k forests, member ``i`` with exactly ``ell[i]`` components.

    Each member carries an explicit vertex support; every vertex lies in exactly
    ``h`` supports.  Raises :class:`Infeasible` naming ``member-size``,
    ``total-capacity`` or ``partition`` (with a witness partition).
    """
    ell = tuple(ell)
    _check_ell(k, ell)
    n = g.n
    if n < 1:
        raise InvalidInstance("empty vertex set")
    if any(x > n for x in ell):
        raise Infeasible("member-size")
    if h * n < sum(ell):
        raise Infeasible("total-capacity")
    if k < h:
        raise Infeasible("partition", Partition.trivial(n))
    if k == h:
        return pack_spanning_forests(g, k, ell)

    order = sorted(range(k), key=lambda i: (-ell[i], i))
    srt = [ell[i] for i in order]
    i0, target = even_split(srt, h, n)
    if log is not None:
        log.i0, log.target = i0, list(target)
    try:
        spanning = pack_spanning_forests(g, h, target)
    except Infeasible as exc:
        w = exc.witness
        if w is None or condition_value(_edge_sets(g), w) >= h * len(w) - capped_sum(ell, len(w)):
            raise TheoremContradiction("spanning-forest failure does not certify a violated partition") from exc
        raise Infeasible("partition", w) from None

    forests = [set(m.edges) for m in spanning.members]
    fixed = forests[:i0]
    active = forests[i0:]
    i = i0
    expected_rest = sum(srt[i:])
    while True:
        counts = [_ncomp(n, g, f) for f in active]
        if sum(counts) != expected_rest:
            raise TheoremContradiction("component total of active forests drifted")
        cmin = min(counts)
        pos = counts.index(cmin)
        if cmin < srt[i]:
            raise TheoremContradiction("minimum component count fell below the next target")
        if cmin == srt[i]:
            fixed.append(active.pop(pos))
            expected_rest -= cmin
            i += 1
            if log is not None:
                log.events.append(("promote", i, cmin))
            if not active:
                raise TheoremContradiction("ran out of active forests")
            continue
        fmin = active[pos]
        label = _labels(n, g, fmin)
        moved = None
        for q, f in enumerate(active):
            if q == pos:
                continue
            for e in sorted(f):
                u, v = g.edges[e]
                if label[u] != label[v]:
                    moved = (q, e)
                    break
            if moved:
                break
        if moved is None:
            break
        q, e = moved
        active[q].remove(e)
        fmin.add(e)
        if log is not None:
            log.events.append(("exchange", e, q, pos, cmin - 1))

    dealt = _deal_components(n, g, active, active[pos], srt[i:])
    full = frozenset(range(n))
    sorted_members = [
        RootedForest(frozenset(f), _roots_for(n, [g.edges[e] for e in f], full), full) for f in fixed
    ] + dealt
    members: list[RootedForest | None] = [None] * k
    for j, orig in enumerate(order):
        members[orig] = sorted_members[j]
    return RootedForestPacking(tuple(members))


def _labels(n: int, g: Graph, forest) -> list[int]:
    uf = UnionFind(n)
    for e in forest:
        uf.union(*g.edges[e])
    return [uf.find(v) for v in range(n)]


def _deal_components(n, g, active, fmin, wants) -> list[RootedForest]:
    """Split the components of the active forests into members of the given sizes.

    Components are ordered by (owning forest, component of ``fmin`` containing
    them); each member takes the next ``want`` components in that order.
    """
    fmin_label = _labels(n, g, fmin)
    block_index = {lab: t for t, lab in enumerate(sorted(set(fmin_label), key=fmin_label.index))}
    p = len(block_index)
    pieces = []
    for q, f in enumerate(active):
        comp_edges: dict[int, list[int]] = {}
        lab = _labels(n, g, f)
        for e in f:
            comp_edges.setdefault(lab[g.edges[e][0]], []).append(e)
        groups: dict[int, list[int]] = {}
        for v in range(n):
            groups.setdefault(lab[v], []).append(v)
        for root, vs in groups.items():
            betas = {block_index[fmin_label[v]] for v in vs}
            if len(betas) != 1:
                raise TheoremContradiction("a component still crosses the minimum forest")
            pieces.append(((q, betas.pop(), min(vs)), frozenset(vs), frozenset(comp_edges.get(root, ()))))
    pieces.sort(key=lambda t: t[0])
    if len(pieces) != sum(wants):
        raise TheoremContradiction("component count differs from the remaining targets")
    if wants and max(wants) >= p:
        raise TheoremContradiction("a member wants as many components as the minimum forest has")
    out = []
    pos = 0
    for want in wants:
        chunk = pieces[pos : pos + want]
        pos += want
        support: set[int] = set()
        edges: set[int] = set()
        roots = set()
        for _, vs, es in chunk:
            if support & vs:
                raise TheoremContradiction("dealt components overlap")
            support |= vs
            edges |= es
            roots.add(min(vs))
        out.append(RootedForest(frozenset(edges), frozenset(roots), frozenset(support)))
    return out


# --- h-regular packings of S_i-forests with root bounds ----------------------


def check_bounded_conditions(
    n: int, vertex_sets: Sequence[frozenset[int]], spec: PackingSpec, cap: int | None = None
) -> ConditionResult:
    """Root-bounded h-regular conditions over partitions, for any set system.

    ``h|V| >= ell(0)`` and, for every partition P,
    ``ell'(0) - ell(K) + ell_|P|(K) + e(P) >= h|P|`` (``partition-slack``) and
    ``ell'_|P|(K) + e(P) >= h|P|`` (``partition-upper``).
    """
    problems = validate_spec(spec, n)
    if problems:
        raise InvalidInstance("; ".join(problems))
    h, lo, up = spec.h, spec.ell, spec.ell_upper
    if h * n < spec.lower[0]:
        return ConditionResult(False, "total-capacity")
    slack = spec.upper[0] - sum(lo)
    return partition_scan(
        n,
        vertex_sets,
        [
            ("partition-slack", lambda p: h * p - slack - capped_sum(lo, p)),
            ("partition-upper", lambda p: h * p - capped_sum(up, p)),
        ],
        cap,
    )


def check_conditions_28(g: Graph, spec: PackingSpec, cap: int | None = None) -> ConditionResult:
    return check_bounded_conditions(g.n, _edge_sets(g), spec, cap)


@dataclass
class BoundedLog:
    """Trace of :func:`pack_regular_forests_bounded`."""

    ell_star: list[int] = field(default_factory=list)
    steps: list[tuple[int, int]] = field(default_factory=list)  # (p*, raised index)
    saturated: bool = False
    inner: ExchangeLog = field(default_factory=ExchangeLog)


def water_fill(lower: Sequence[int], upper: Sequence[int], total: int) -> list[int]:
    """Raise ``lower`` towards ``upper`` index by index until the sum is ``total``."""
    out = list(lower)
    need = total - sum(out)
    for i in range(len(out)):
        step = min(upper[i] - out[i], need)
        out[i] += step
        need -= step
    if need:
        raise TheoremContradiction("upper bounds cannot absorb the required total")
    return out


def raise_root_counts(spec: PackingSpec, n: int, steps: list | None = None) -> list[int]:
    """Raise ``ell`` one unit at a time until it sums to ``ell'(0)``.

    At each step ``p*`` is the largest value such that
    ``ell'(0) - ell*(K) + ell*_p(K) > ell'_p(K)`` for all ``p <= p*``, and the
    lowest index ``j`` with ``ell*(j) <= p* < ell'(j)`` is raised.
    """
    star = list(spec.ell)
    up = spec.ell_upper
    top = spec.upper[0]
    while sum(star) < top:
        total = sum(star)
        p_star = -1
        for p in range(n + 1):
            if top - total + capped_sum(star, p) > capped_sum(up, p):
                p_star = p
            else:
                break
        if p_star < 0:
            raise TheoremContradiction("no admissible p* although the total is below ell'(0)")
        j = next((j for j in range(spec.k) if star[j] <= p_star < up[j]), None)
        if j is None:
            raise TheoremContradiction(f"no index can be raised at p* = {p_star}")
        star[j] += 1
        if steps is not None:
            steps.append((p_star, j))
    return star


def _check_star(n, sets, spec, star) -> None:
    """Assert the invariants kept by every raising step (exhaustive; small n only)."""
    if sum(star) > spec.upper[0]:
        raise TheoremContradiction("raised total exceeds ell'(0)")
    for j in range(spec.k):
        if not spec.ell[j] <= star[j] <= spec.ell_upper[j]:
            raise TheoremContradiction(f"raised value for member {j + 1} left its bounds")
    slack = spec.upper[0] - sum(star)
    res = partition_scan(n, sets, [("raised", lambda p: spec.h * p - slack - capped_sum(star, p))])
    if not res:
        raise TheoremContradiction("raising step broke the slack partition condition")


def pack_regular_forests_bounded(
    g: Graph, spec: PackingSpec, cap: int | None = None, log: BoundedLog | None = None
) -> RootedForestPacking:
    """h-regular packing of k S_i-forests with ``ell(i) <= |S_i| <= ell'(i)`` and
    ``ell(0) <= sum |S_i| <= ell'(0)``.

    When ``|V|`` is within the partition cap the conditions are checked up
    front; otherwise the construction runs and its failure point is translated
    into a witness.
    """
    n = g.n
    if n < 1:
        raise InvalidInstance("empty vertex set")
    problems = validate_spec(spec, n)
    if problems:
        raise InvalidInstance("; ".join(problems))
    h, k = spec.h, spec.k
    sets = _edge_sets(g)
    if h * n < spec.lower[0]:
        raise Infeasible("total-capacity")
    limit = parts.PARTITION_CAP if cap is None else cap
    if n <= limit:
        check_bounded_conditions(n, sets, spec, cap).raise_if_failed()
    log = log if log is not None else BoundedLog()

    if spec.upper[0] >= h * n:
        star = water_fill(spec.ell, spec.ell_upper, h * n)
        log.ell_star, log.saturated = list(star), True
        packing = _isolated_packing(n, h, star)
    else:
        star = raise_root_counts(spec, n, log.steps)
        log.ell_star = list(star)
        if n <= STEP_CHECK_CAP:
            replay = list(spec.ell)
            for _, j in log.steps:
                replay[j] += 1
                _check_star(n, sets, spec, replay)
        try:
            packing = pack_regular_forests(g, h, k, star, log.inner)
        except Infeasible as exc:
            raise _translate_failure(g, spec, star, log.steps, exc) from None
    diag = verify_regular_forest_packing(g, packing, spec)
    if diag:
        raise TheoremContradiction("constructed packing fails verification: " + "; ".join(diag))
    return packing


def _translate_failure(g, spec, star, steps, exc: Infeasible) -> Infeasible:
    """Map a failure of the inner call on the raised counts back to the original conditions."""
    w = exc.witness
    if exc.condition in ("member-size", "total-capacity") or w is None:
        return TheoremContradiction(f"inner call failed on {exc.condition} for admissible raised counts")
    p = len(w)
    e = condition_value(_edge_sets(g), w)
    h = spec.h
    if any(p <= p_star for p_star, _ in steps):
        if capped_sum(spec.ell_upper, p) + e < h * p:
            return Infeasible("partition-upper", w)
    slack = spec.upper[0] - sum(spec.ell)
    if slack + capped_sum(spec.ell, p) + e < h * p:
        return Infeasible("partition-slack", w)
    if capped_sum(spec.ell_upper, p) + e < h * p:
        return Infeasible("partition-upper", w)
    return TheoremContradiction("inner witness violates neither original partition condition")


def _isolated_packing(n: int, h: int, counts: Sequence[int]) -> RootedForestPacking:
    """Deal ``h`` copies of every vertex, in (copy, vertex) order, as isolated roots."""
    pieces = [v for _ in range(h) for v in range(n)]
    out = []
    pos = 0
    for c in counts:
        chunk = pieces[pos : pos + c]
        pos += c
        if len(set(chunk)) != len(chunk):
            raise TheoremContradiction("isolated-vertex member repeats a vertex")
        out.append(RootedForest(frozenset(), frozenset(chunk), frozenset(chunk)))
    return RootedForestPacking(tuple(out))


# --- exhaustive oracle -------------------------------------------------------


def brute_force_regular_packing(g: Graph, spec: PackingSpec, element_cap: int = 10, cover_cap: int = 20):
    """Exhaustive search; returns a :class:`RootedForestPacking` or ``None``."""
    found = search_packing(g.n, _edge_sets(g), spec, directed=False, element_cap=element_cap, cover_cap=cover_cap)
    if found is None:
        return None
    members = []
    for fm in found:
        edges = frozenset(idx for idx, _ in fm.arcs)
        members.append(RootedForest(edges, _roots_for(g.n, [g.edges[e] for e in edges], fm.core), fm.core))
    return RootedForestPacking(tuple(members))


__all__ = [
    "CapExceeded",
    "ConditionResult",
    "BoundedLog",
    "ExchangeLog",
    "brute_force_regular_packing",
    "check_bounded_conditions",
    "check_condition_25",
    "check_condition_25_matroid",
    "check_conditions_27",
    "check_conditions_28",
    "even_split",
    "pack_regular_forests",
    "pack_regular_forests_bounded",
    "pack_spanning_forests",
    "partition_scan",
    "raise_root_counts",
    "water_fill",
]
