"""Regular packings of rooted hyperforests.

Pipeline: trim every hyperedge to an edge while keeping the partition
conditions true (one vertex removal at a time), pack rooted forests in the
resulting graph, then give each forest edge back to the hyperedge it came
from and orient it away from its root.  The orientation is stored with the
member so a verifier can replay it without searching.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from . import partitions as parts
from .core import (
    CapExceeded,
    Graph,
    HyperforestMember,
    Hypergraph,
    Infeasible,
    InvalidInstance,
    PackingSpec,
    RootedHyperforestPacking,
    TheoremContradiction,
    branching_diagnostics,
    capped_sum,
    components,
    validate_spec,
)
from .exhaustive import search_packing
from .forest_packing import (
    STEP_CHECK_CAP,
    ConditionResult,
    check_bounded_conditions,
    pack_regular_forests_bounded,
)

WITNESS_CORE_CAP = 12
WITNESS_EDGE_CAP = 8


def check_conditions_33(hg: Hypergraph, spec: PackingSpec, cap: int | None = None) -> ConditionResult:
    """``h|V| >= ell(0)`` plus both root-bounded partition conditions on the hyperedges."""
    return check_bounded_conditions(hg.n, hg.hyperedges, spec, cap)


@dataclass(frozen=True)
class TrimWitness:
    """Result of trimming: the final pair for every hyperedge and the removals applied."""

    pairs: tuple[tuple[int, int], ...]
    removals: tuple[tuple[int, int], ...]  # (hyperedge index, removed vertex), in order

    def replay(self, hg: Hypergraph) -> Graph:
        sets = [set(x) for x in hg.hyperedges]
        for idx, v in self.removals:
            if v not in sets[idx] or len(sets[idx]) <= 2:
                raise InvalidInstance(f"removal of {v} from hyperedge {idx} cannot be replayed")
            sets[idx].discard(v)
        edges = tuple(tuple(sorted(s)) for s in sets)
        if edges != self.pairs:
            raise InvalidInstance("replayed removals do not give the recorded pairs")
        return Graph(hg.n, edges)


def _needs(spec: PackingSpec, n: int) -> np.ndarray:
    """Smallest admissible crossing count for each partition size ``0..n``."""
    slack = spec.upper[0] - sum(spec.ell)
    return np.array(
        [
            max(spec.h * p - slack - capped_sum(spec.ell, p), spec.h * p - capped_sum(spec.ell_upper, p))
            for p in range(n + 1)
        ],
        dtype=np.int64,
    )


def _crossing_column(table: np.ndarray, vs) -> np.ndarray:
    sub = table[:, sorted(vs)]
    return (sub != sub[:, :1]).any(axis=1)


def trim_to_graph(hg: Hypergraph, spec: PackingSpec, cap: int | None = None) -> tuple[Graph, TrimWitness]:
    """Trim every hyperedge to an edge without breaking the partition conditions.

    Candidates are tried hyperedge by hyperedge, vertex by vertex; the first
    removal that keeps every partition admissible is applied.  Raises
    :class:`Infeasible` if the conditions fail up front and
    :class:`TheoremContradiction` if they hold but no removal is admissible.
    """
    n = hg.n
    check_conditions_33(hg, spec, cap).raise_if_failed()
    table = parts.partition_table(n)
    sizes = table.max(axis=1).astype(np.int64) + 1
    need = _needs(spec, n)[sizes]
    sets = [set(x) for x in hg.hyperedges]
    cols = [_crossing_column(table, s) for s in sets]
    e = np.sum(cols, axis=0, dtype=np.int64) if cols else np.zeros(table.shape[0], dtype=np.int64)
    removals = []
    while True:
        big = [i for i, s in enumerate(sets) if len(s) >= 3]
        if not big:
            break
        accepted = None
        for i in big:
            for v in sorted(sets[i]):
                col = _crossing_column(table, sets[i] - {v})
                trial = e - cols[i] + col
                if (trial >= need).all():
                    accepted = (i, v, col, trial)
                    break
            if accepted:
                break
        if accepted is None:
            raise TheoremContradiction("conditions hold but no vertex of any large hyperedge can be removed")
        i, v, col, e = accepted
        sets[i].discard(v)
        cols[i] = col
        removals.append((i, v))
        if n <= STEP_CHECK_CAP and not check_bounded_conditions(n, [frozenset(s) for s in sets], spec):
            raise TheoremContradiction("accepted removal broke the partition conditions")
    pairs = tuple(tuple(sorted(s)) for s in sets)
    return Graph(n, pairs), TrimWitness(pairs, tuple(removals))


def orient_forest(n: int, pairs: Mapping[int, tuple[int, int]], roots, support) -> dict[int, tuple[int, int]]:
    """Orient the edges ``idx -> (u, v)`` of a forest away from ``roots`` (breadth-first).

    Returns ``idx -> (tail, head)``.  Every component of ``(support, pairs)``
    must contain exactly one root.
    """
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in support}
    for idx in sorted(pairs):
        u, v = pairs[idx]
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    out: dict[int, tuple[int, int]] = {}
    seen = set()
    for r in sorted(roots):
        if r in seen:
            raise TheoremContradiction("two roots in one component")
        seen.add(r)
        queue = deque([r])
        while queue:
            x = queue.popleft()
            for y, idx in adj[x]:
                if idx in out:
                    continue
                if y in seen:
                    raise TheoremContradiction("forest edge closes a cycle or joins two roots")
                out[idx] = (x, y)
                seen.add(y)
                queue.append(y)
    if seen != set(support) or len(out) != len(pairs):
        raise TheoremContradiction("a component of the forest has no root")
    return out


def pack_hyperforests(hg: Hypergraph, spec: PackingSpec, cap: int | None = None) -> RootedHyperforestPacking:
    """h-regular packing of ``spec.k`` rooted hyperforests with the root bounds of ``spec``.

    Raises :class:`Infeasible` with a witness partition when none exists.
    """
    n = hg.n
    if n < 1:
        raise InvalidInstance("empty vertex set")
    problems = validate_spec(spec, n)
    if problems:
        raise InvalidInstance("; ".join(problems))
    if spec.h * n < spec.lower[0]:
        raise Infeasible("total-capacity")
    graph, _ = trim_to_graph(hg, spec, cap)
    forests = pack_regular_forests_bounded(graph, spec, cap)
    members = []
    for f in forests.members:
        orientation = orient_forest(n, {e: graph.edges[e] for e in f.edges}, f.roots, f.support)
        members.append(HyperforestMember(f.edges, f.roots, orientation))
    packing = RootedHyperforestPacking(tuple(members))
    diag = verify_hyperforest_packing(hg, packing, spec)
    if diag:
        raise TheoremContradiction("lifted packing fails verification: " + "; ".join(diag))
    return packing


def verify_hyperforest_packing(hg: Hypergraph, packing: RootedHyperforestPacking, spec: PackingSpec) -> list[str]:
    """Replay every witness and check disjointness, root bounds and exact core coverage.

    Returns diagnostics; an empty list means the packing is valid.  Diagnostic
    prefixes: ``disjointness``, ``witness``, ``root bounds``, ``coverage``.
    """
    out = []
    if len(packing) != spec.k:
        return [f"expected {spec.k} members, got {len(packing)}"]
    owner: dict[int, int] = {}
    cover = [0] * hg.n
    for i, member in enumerate(packing.members, 1):
        for idx in sorted(member.hyperedges):
            if not 0 <= idx < hg.m:
                out.append(f"witness: member {i} uses unknown hyperedge {idx}")
                continue
            if idx in owner:
                out.append(f"disjointness: hyperedge {idx} in members {owner[idx]} and {i}")
            owner[idx] = i
        if set(member.orientation) != set(member.hyperedges):
            out.append(f"witness: member {i} orientation does not match its hyperedges")
        else:
            for idx, (t, h) in member.orientation.items():
                if 0 <= idx < hg.m and not (t != h and {t, h} <= hg.hyperedges[idx]):
                    out.append(f"witness: member {i} trims hyperedge {idx} to {t}->{h} outside it")
            diag = branching_diagnostics(hg.n, list(member.orientation.values()), member.roots, member.core)
            out.extend(f"witness: member {i}: {d}" for d in diag)
        r = len(member.roots)
        if not spec.lower[i] <= r <= spec.upper[i]:
            out.append(f"root bounds: member {i} has {r} roots, allowed [{spec.lower[i]}, {spec.upper[i]}]")
        for v in member.core:
            if 0 <= v < hg.n:
                cover[v] += 1
    total = sum(len(m.roots) for m in packing.members)
    if not spec.lower[0] <= total <= spec.upper[0]:
        out.append(f"root bounds: total {total} outside [{spec.lower[0]}, {spec.upper[0]}]")
    for v, c in enumerate(cover):
        if c != spec.h:
            out.append(f"coverage: vertex {v} lies in {c} cores, expected {spec.h}")
    return out


def find_hyperforest_witness(
    hyperedges: Sequence[frozenset[int]] | Sequence[Sequence[int]], roots, core
) -> dict[int, tuple[int, int]] | None:
    """Exhaustively look for an orientation turning the hyperedges into a ``roots``-branching on ``core``.

    Keys of the result are positions in ``hyperedges``.  Every hyperedge must
    be used; every non-root core vertex receives exactly one arc.
    """
    hyperedges = [frozenset(x) for x in hyperedges]
    roots, core = frozenset(roots), frozenset(core)
    if len(core) > WITNESS_CORE_CAP or len(hyperedges) > WITNESS_EDGE_CAP:
        raise CapExceeded("witness search beyond its caps")
    if not roots <= core or len(hyperedges) != len(core - roots):
        return None
    options = []
    for x in hyperedges:
        inside = sorted(x & core)
        opts = [(t, h) for h in inside if h not in roots for t in inside if t != h]
        if not opts:
            return None
        options.append(opts)
    for choice in product(*options):
        heads = [h for _, h in choice]
        if len(set(heads)) != len(heads):
            continue
        if not branching_diagnostics(max(core) + 1, list(choice), roots, core):
            return dict(enumerate(choice))
    return None


def brute_force_hyperforest_packing(
    hg: Hypergraph, spec: PackingSpec, element_cap: int = 10, cover_cap: int = 20
) -> RootedHyperforestPacking | None:
    """Exhaustive search over core assignments and trimmed pairs; ``None`` if no packing exists."""
    found = search_packing(hg.n, hg.hyperedges, spec, directed=False, element_cap=element_cap, cover_cap=cover_cap)
    if found is None:
        return None
    members = []
    for fm in found:
        pairs = dict(fm.arcs)
        roots = frozenset(min(c) for c in components(hg.n, pairs.values(), fm.core))
        members.append(HyperforestMember(frozenset(pairs), roots, orient_forest(hg.n, pairs, roots, fm.core)))
    return RootedHyperforestPacking(tuple(members))


__all__ = [
    "TrimWitness",
    "brute_force_hyperforest_packing",
    "check_conditions_33",
    "find_hyperforest_witness",
    "orient_forest",
    "pack_hyperforests",
    "trim_to_graph",
    "verify_hyperforest_packing",
]
