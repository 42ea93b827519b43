"""Registry of the packing theorems as condition forms.

Every theorem in the family is the general root-bounded regular statement
(for its structure) restricted in up to three ways:

* ``regime``: ``spanning`` (h = k) or ``regular`` (any h);
* ``roots``: ``one`` (one root each), ``uniform`` (the same count ell for
  every member), ``counts`` (exact counts ell(i)) or ``bounds`` (the general
  lower/upper bounds);
* ``structure``: graph, hypergraph, digraph or dypergraph.

Each form carries its own literal condition (:func:`dedicated_check`), so
comparing it with :func:`general_check` on a matching spec tests the claimed
specialization.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Digraph, Dypergraph, Graph, Hypergraph, InvalidInstance, PackingSpec, capped_sum, validate_spec
from .directed import check_subpartition_conditions, subpartition_scan
from .forest_packing import ConditionResult, check_bounded_conditions, partition_scan

STRUCTURES = ("graph", "hypergraph", "digraph", "dypergraph")
ROOT_KINDS = ("one", "uniform", "counts", "bounds")


@dataclass(frozen=True)
class TheoremForm:
    key: str | None
    name: str
    structure: str
    regime: str
    roots: str

    @property
    def directed(self) -> bool:
        return self.structure in ("digraph", "dypergraph")

    @property
    def ids(self) -> tuple[str, ...]:
        return (self.name,) if self.key is None else (self.key, self.name)


def _build() -> list[TheoremForm]:
    forms = []
    number = 8
    for structure in ("digraph", "dypergraph"):
        for regime in ("spanning", "regular"):
            for roots in ROOT_KINDS:
                forms.append(TheoremForm(f"T{number}", f"{structure}-{regime}-{roots}", structure, regime, roots))
                number += 1
    undirected_keys = {
        ("graph", "spanning", "counts"): "T25",
        ("graph", "regular", "counts"): "T27",
        ("graph", "regular", "bounds"): "T28",
        ("hypergraph", "spanning", "counts"): "T29",
        ("hypergraph", "spanning", "bounds"): "T30",
        ("hypergraph", "regular", "counts"): "T31",
        ("hypergraph", "regular", "bounds"): "T33",
    }
    for structure in ("graph", "hypergraph"):
        for regime in ("spanning", "regular"):
            for roots in ROOT_KINDS:
                key = undirected_keys.get((structure, regime, roots))
                forms.append(TheoremForm(key, f"{structure}-{regime}-{roots}", structure, regime, roots))
    return forms


FORMS: tuple[TheoremForm, ...] = tuple(_build())
_BY_ID = {i: f for f in FORMS for i in f.ids}


def lookup(theorem_id: str) -> TheoremForm:
    try:
        return _BY_ID[theorem_id]
    except KeyError:
        raise InvalidInstance(f"unknown theorem id {theorem_id!r}") from None


def structure_kind(s) -> str:
    if isinstance(s, Graph):
        return "graph"
    if isinstance(s, Hypergraph):
        return "hypergraph"
    if isinstance(s, Digraph):
        return "digraph"
    if isinstance(s, Dypergraph):
        return "dypergraph"
    raise TypeError(f"unsupported structure {type(s).__name__}")


def spec_mismatch(form: TheoremForm, spec: PackingSpec) -> str | None:
    """Why ``spec`` is not an instance of ``form`` (``None`` if it is)."""
    if form.regime == "spanning" and spec.h != spec.k:
        return "spanning forms need h = k"
    if form.roots == "bounds":
        return None
    if not spec.is_fixed:
        return "form needs exact root counts (lower = upper, totals = sum)"
    if form.roots == "uniform" and len(set(spec.ell)) != 1:
        return "form needs the same root count for every member"
    if form.roots == "one" and set(spec.ell) != {1}:
        return "form needs one root per member"
    return None


def structure_mismatch(form: TheoremForm, s) -> str | None:
    kind = structure_kind(s)
    if kind == form.structure:
        return None
    # graphs are hypergraphs and digraphs are dypergraphs
    if (form.structure, kind) in (("hypergraph", "graph"), ("dypergraph", "digraph")):
        return None
    if (form.structure, kind) == ("graph", "hypergraph") and s.is_graph():
        return None
    if (form.structure, kind) == ("digraph", "dypergraph") and all(len(t) == 1 for t, _ in s.hyperarcs):
        return None
    return f"form is stated for a {form.structure}, got a {kind}"


def _elements(s):
    kind = structure_kind(s)
    if kind == "graph":
        return [frozenset(e) for e in s.edges]
    if kind == "hypergraph":
        return list(s.hyperedges)
    if kind == "digraph":
        return [(frozenset({t}), h) for t, h in s.arcs]
    return list(s.hyperarcs)


def general_check(s, spec: PackingSpec, cap: int | None = None) -> ConditionResult:
    """The most general condition for the structure's family."""
    if structure_kind(s) in ("digraph", "dypergraph"):
        return check_subpartition_conditions(s, spec, cap)
    return check_bounded_conditions(s.n, _elements(s), spec, cap)


def dedicated_check(form: TheoremForm, s, spec: PackingSpec, cap: int | None = None) -> ConditionResult:
    """The condition exactly as the specialized statement phrases it."""
    reason = spec_mismatch(form, spec) or structure_mismatch(form, s)
    if reason:
        raise InvalidInstance(reason)
    n, h, k = s.n, spec.h, spec.k
    ell = spec.ell
    scan = subpartition_scan if form.directed else partition_scan
    elements = _elements(s)

    def run(needs):
        return scan(n, elements, needs, cap)

    if form.roots == "one":
        if form.regime == "spanning":
            return run([("partition", lambda p: k * (p - 1))])
        if h * n < k:
            return ConditionResult(False, "total-capacity")
        return run([("partition", lambda p: h * p - k)])
    if form.roots == "uniform":
        l = ell[0]
        if form.regime == "spanning":
            if n < l:
                return ConditionResult(False, "member-size")
            return run([("partition", lambda p: k * (p - l))])
        if k < h:
            return ConditionResult(False, "member-count")
        if h * n < k * l:
            return ConditionResult(False, "total-capacity")
        return run([("partition", lambda p: h * p - k * l)])
    if form.roots == "counts":
        if any(n < x for x in ell):
            return ConditionResult(False, "member-size")
        if form.regime == "regular" and h * n < sum(ell):
            return ConditionResult(False, "total-capacity")
        m = k if form.regime == "spanning" else h
        return run([("partition", lambda p: m * p - capped_sum(ell, p))])
    problems = validate_spec(spec, n)
    if problems:
        raise InvalidInstance("; ".join(problems))
    m = k if form.regime == "spanning" else h
    if form.regime == "regular" and h * n < spec.lower[0]:
        return ConditionResult(False, "total-capacity")
    slack = spec.upper[0] - sum(ell)
    return run(
        [
            ("partition-slack", lambda p: m * p - slack - capped_sum(ell, p)),
            ("partition-upper", lambda p: m * p - capped_sum(spec.ell_upper, p)),
        ]
    )


def applicable_forms(s, spec: PackingSpec) -> list[TheoremForm]:
    return [f for f in FORMS if spec_mismatch(f, spec) is None and structure_mismatch(f, s) is None]


__all__ = [
    "FORMS",
    "TheoremForm",
    "applicable_forms",
    "dedicated_check",
    "general_check",
    "lookup",
    "spec_mismatch",
    "structure_kind",
    "structure_mismatch",
]
