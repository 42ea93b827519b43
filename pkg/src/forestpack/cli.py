"""Command-line front end.

Exit codes: 0 feasible / valid / agreeing, 1 infeasible / invalid /
disagreeing, 2 usage or parse error, 3 enumeration cap exceeded, 4 internal
contradiction (two routes that must agree did not).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from . import partitions as parts
from .core import (
    CapExceeded,
    Digraph,
    Dypergraph,
    Graph,
    HyperforestMember,
    Hypergraph,
    Infeasible,
    InvalidInstance,
    PackingSpec,
    RootedForest,
    RootedForestPacking,
    RootedHyperforestPacking,
    TheoremContradiction,
    verify_regular_forest_packing,
)
from .directed import (
    HyperbranchingMember,
    HyperbranchingPacking,
    brute_force_arc_count_packing,
    brute_force_branching_packing,
    pack_branchings_bounded_desk,
    partition_has_solution,
    reduce_partition_instance,
    verify_hyperbranching_packing,
)
from .forest_packing import brute_force_regular_packing, pack_regular_forests_bounded
from .hyper_packing import brute_force_hyperforest_packing, pack_hyperforests, verify_hyperforest_packing
from .theorems import applicable_forms, dedicated_check, general_check, lookup, spec_mismatch, structure_mismatch

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3, 4
KINDS = ("graph", "hypergraph", "digraph", "dypergraph")

# Names of oracle rows whose verdict is flipped; only tests set this, to make
# sure a disagreement is actually reported.
ORACLE_FAULTS: set[str] = set()


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Instance:
    kind: str
    names: tuple
    structure: Any
    spec: PackingSpec | None

    @property
    def n(self) -> int:
        return len(self.names)


def _index(names: tuple) -> dict:
    return {name: i for i, name in enumerate(names)}


def instance_from_json(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise UsageError("instance must be a JSON object")
    kind = doc.get("type")
    if kind not in KINDS:
        raise UsageError(f"type must be one of {', '.join(KINDS)}")
    names = doc.get("vertices")
    if not isinstance(names, list) or any(not isinstance(v, (str, int)) or isinstance(v, bool) for v in names):
        raise UsageError("vertices must be a list of strings or integers")
    names = tuple(names)
    if len(set(names)) != len(names):
        raise UsageError("vertex names must be unique")
    idx = _index(names)

    def vid(name):
        try:
            return idx[name]
        except (KeyError, TypeError):
            raise UsageError(f"undeclared vertex {name!r}") from None

    try:
        if kind in ("graph", "hypergraph"):
            edges = doc.get("edges", [])
            if not isinstance(edges, list) or any(not isinstance(e, list) for e in edges):
                raise UsageError("edges must be a list of vertex-name lists")
            sets = [[vid(v) for v in e] for e in edges]
            if kind == "graph":
                if any(len(e) != 2 for e in sets):
                    raise UsageError("graph edges must have exactly two endpoints")
                structure = Graph(len(names), tuple(tuple(e) for e in sets))
            else:
                if any(len(set(e)) != len(e) for e in sets):
                    raise UsageError("hyperedge lists a vertex twice")
                structure = Hypergraph(len(names), tuple(frozenset(e) for e in sets))
        else:
            arcs = doc.get("arcs", [])
            if not isinstance(arcs, list) or any(not isinstance(a, dict) for a in arcs):
                raise UsageError("arcs must be a list of {tails, head} objects")
            parsed = []
            for a in arcs:
                tails = a.get("tails")
                if not isinstance(tails, list):
                    raise UsageError("arc tails must be a list")
                parsed.append(([vid(t) for t in tails], vid(a.get("head"))))
            if kind == "digraph":
                if any(len(t) != 1 for t, _ in parsed):
                    raise UsageError("digraph arcs must have exactly one tail")
                structure = Digraph(len(names), tuple((t[0], h) for t, h in parsed))
            else:
                structure = Dypergraph(len(names), tuple((frozenset(t), h) for t, h in parsed))
        spec = None
        if "spec" in doc:
            s = doc["spec"]
            if not isinstance(s, dict):
                raise UsageError("spec must be an object")
            spec = PackingSpec(int(s["h"]), int(s["k"]), tuple(s["lower"]), tuple(s["upper"]))
    except InvalidInstance as exc:
        raise UsageError(str(exc)) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed spec: {exc}") from None
    return Instance(kind, names, structure, spec)


def instance_to_json(inst: Instance) -> dict:
    doc: dict[str, Any] = {"type": inst.kind, "vertices": list(inst.names)}
    nm = inst.names
    s = inst.structure
    if inst.kind == "graph":
        doc["edges"] = [[nm[u], nm[v]] for u, v in s.edges]
    elif inst.kind == "hypergraph":
        doc["edges"] = [[nm[v] for v in sorted(x)] for x in s.hyperedges]
    elif inst.kind == "digraph":
        doc["arcs"] = [{"tails": [nm[t]], "head": nm[h]} for t, h in s.arcs]
    else:
        doc["arcs"] = [{"tails": [nm[v] for v in sorted(t)], "head": nm[h]} for t, h in s.hyperarcs]
    if inst.spec is not None:
        sp = inst.spec
        doc["spec"] = {"h": sp.h, "k": sp.k, "lower": list(sp.lower), "upper": list(sp.upper)}
    return doc


def load_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def load_instance(path: str) -> Instance:
    return instance_from_json(load_json(path))


# --- packings <-> JSON -------------------------------------------------------


def _names(inst: Instance, vs) -> list:
    return [inst.names[v] for v in sorted(vs)]


def packing_to_json(inst: Instance, packing) -> list[dict]:
    out = []
    for m in packing.members:
        if isinstance(m, RootedForest):
            out.append({"elements": sorted(m.edges), "roots": _names(inst, m.roots), "support": _names(inst, m.support)})
        else:
            elements = m.hyperedges if isinstance(m, HyperforestMember) else m.hyperarcs
            orient = [
                {"element": a, "tail": inst.names[t], "head": inst.names[h]} for a, (t, h) in sorted(m.orientation.items())
            ]
            out.append({"elements": sorted(elements), "roots": _names(inst, m.roots), "orientation": orient})
    return out


class PackingParseError(Exception):
    """The packing refers to things its host does not have."""


def packing_from_json(inst: Instance, doc: Any):
    if isinstance(doc, dict):
        doc = doc.get("packing")
    if not isinstance(doc, list) or any(not isinstance(m, dict) for m in doc):
        raise UsageError("packing must be a list of member objects (or a report containing one)")
    idx = _index(inst.names)

    def vid(name):
        try:
            return idx[name]
        except (KeyError, TypeError):
            raise PackingParseError(f"packing names vertex {name!r} unknown to the instance") from None

    def ints(xs):
        if not isinstance(xs, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in xs):
            raise UsageError("elements must be a list of integers")
        return frozenset(xs)

    members = []
    try:
        for m in doc:
            elements = ints(m.get("elements", []))
            roots = frozenset(vid(v) for v in m.get("roots", []))
            if inst.kind == "graph":
                support = frozenset(vid(v) for v in m.get("support", []))
                members.append(RootedForest(elements, roots, support))
            else:
                orient = {int(o["element"]): (vid(o["tail"]), vid(o["head"])) for o in m.get("orientation", [])}
                cls = HyperforestMember if inst.kind == "hypergraph" else HyperbranchingMember
                members.append(cls(elements, roots, orient))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise UsageError(f"malformed packing member: {exc}") from None
    if inst.kind == "graph":
        return RootedForestPacking(tuple(members))
    if inst.kind == "hypergraph":
        return RootedHyperforestPacking(tuple(members))
    return HyperbranchingPacking(tuple(members))


def verify_packing(inst: Instance, packing) -> list[str]:
    s, spec = inst.structure, inst.spec
    if inst.kind == "graph":
        return verify_regular_forest_packing(s, packing, spec)
    if inst.kind == "hypergraph":
        return verify_hyperforest_packing(s, packing, spec)
    return verify_hyperbranching_packing(s, packing, spec)


def construct(inst: Instance, cap: int | None):
    s, spec = inst.structure, inst.spec
    if inst.kind == "graph":
        return pack_regular_forests_bounded(s, spec, cap)
    if inst.kind == "hypergraph":
        return pack_hyperforests(s, spec, cap)
    return pack_branchings_bounded_desk(s, spec, cap)


def brute_force(inst: Instance):
    s, spec = inst.structure, inst.spec
    if inst.kind == "graph":
        return brute_force_regular_packing(s, spec)
    if inst.kind == "hypergraph":
        return brute_force_hyperforest_packing(s, spec)
    return brute_force_branching_packing(s, spec)


def witness_to_json(inst: Instance, witness) -> list | None:
    if witness is None:
        return None
    return [_names(inst, b) for b in witness]


# --- reports -----------------------------------------------------------------


def new_report(inst: Instance | None, args) -> dict:
    stats: dict[str, Any] = {"seed": args.seed}
    if inst is not None:
        stats.update(vertices=inst.n, elements=inst.structure.m)
    return {"feasible": None, "condition": None, "witness": None, "packing": None, "checks": [], "stats": stats}


def emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if args.json_out:
        Path(args.json_out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def _require_spec(inst: Instance) -> PackingSpec:
    if inst.spec is None:
        raise UsageError("instance has no spec")
    return inst.spec


def cmd_check(args) -> int:
    inst = load_instance(args.file)
    spec = _require_spec(inst)
    form = lookup(args.theorem)
    reason = spec_mismatch(form, spec) or structure_mismatch(form, inst.structure)
    if reason:
        raise UsageError(f"{form.name}: {reason}")
    report = new_report(inst, args)
    res = dedicated_check(form, inst.structure, spec, args.cap_bell)
    report["feasible"] = res.ok
    report["condition"] = res.condition
    report["witness"] = witness_to_json(inst, res.witness)
    report["stats"]["theorem"] = form.key or form.name
    report["stats"]["blocks_evaluated"] = res.evaluated
    emit(report, args)
    return EXIT_OK if res.ok else EXIT_NO


def cmd_pack(args) -> int:
    inst = load_instance(args.file)
    _require_spec(inst)
    report = new_report(inst, args)
    start = time.perf_counter()
    try:
        packing = construct(inst, args.cap_bell)
    except Infeasible as exc:
        report["feasible"] = False
        report["condition"] = exc.condition
        report["witness"] = witness_to_json(inst, exc.witness)
        code = EXIT_NO
    else:
        diag = verify_packing(inst, packing)
        report["checks"].append({"name": "verify", "passed": not diag, "diagnostics": diag})
        if diag:
            raise TheoremContradiction("constructed packing failed verification")
        report["feasible"] = True
        report["packing"] = packing_to_json(inst, packing)
        code = EXIT_OK
    if args.timings:
        report["stats"]["seconds"] = round(time.perf_counter() - start, 6)
    emit(report, args)
    return code


def cmd_verify(args) -> int:
    inst = load_instance(args.file)
    _require_spec(inst)
    report = new_report(inst, args)
    try:
        packing = packing_from_json(inst, load_json(args.packing))
        diag = verify_packing(inst, packing)
    except (PackingParseError, InvalidInstance) as exc:
        diag = [str(exc)]
    report["feasible"] = None
    report["checks"].append({"name": "verify", "passed": not diag, "diagnostics": diag})
    emit(report, args)
    return EXIT_OK if not diag else EXIT_NO


def cmd_oracle(args) -> int:
    inst = load_instance(args.file)
    spec = _require_spec(inst)
    report = new_report(inst, args)
    rows: list[tuple[str, bool]] = []
    general = general_check(inst.structure, spec, args.cap_bell)
    rows.append(("conditions", general.ok))
    found = brute_force(inst)
    rows.append(("brute-force", found is not None))
    try:
        construct(inst, args.cap_bell)
        rows.append(("construction", True))
    except Infeasible:
        rows.append(("construction", False))
    for form in applicable_forms(inst.structure, spec):
        rows.append((f"form:{form.key or form.name}", dedicated_check(form, inst.structure, spec, args.cap_bell).ok))
    rows = [(name, (not verdict) if name in ORACLE_FAULTS else verdict) for name, verdict in rows]
    reference = rows[1][1]
    for name, verdict in rows:
        report["checks"].append({"name": name, "feasible": verdict, "passed": verdict == reference})
    agree = all(verdict == reference for _, verdict in rows)
    report["feasible"] = reference
    report["condition"] = general.condition
    report["witness"] = witness_to_json(inst, general.witness)
    emit(report, args)
    return EXIT_OK if agree else EXIT_NO


def cmd_reduce_partition(args) -> int:
    try:
        weights = [int(w) for w in args.weights.split(",") if w.strip()]
        red = reduce_partition_instance(weights)
    except (ValueError, InvalidInstance) as exc:
        raise UsageError(f"bad weights: {exc}") from None
    d = red.digraph
    names = tuple(f"v{i}" for i in range(d.n))
    inst = Instance("digraph", names, d, None)
    positive = partition_has_solution(weights)
    packs = brute_force_arc_count_packing(d, red.h, red.k, red.ell) is not None
    report = new_report(inst, args)
    report["instance"] = instance_to_json(inst)
    report["reduction"] = {"h": red.h, "k": red.k, "ell": red.ell, "odd_total": red.odd_total}
    report["feasible"] = packs
    report["checks"].append({"name": "partition-vs-packing", "passed": positive == packs, "partition": positive})
    emit(report, args)
    if positive != packs:
        return EXIT_INTERNAL
    return EXIT_OK if packs else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-bell", type=int, default=None, metavar="N",
                        help=f"largest vertex count for partition enumeration (default {parts.PARTITION_CAP})")
    common.add_argument("--seed", type=int, default=0, help="seed recorded in the report (default 0)")
    common.add_argument("--json-out", default=None, metavar="PATH", help="also write the report here")
    common.add_argument("--timings", action="store_true", help="add wall-clock seconds to stats (breaks byte-identity)")

    ap = argparse.ArgumentParser(prog="forestpack", description="Packings of rooted forests, hyperforests and branchings.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="evaluate a theorem's condition on an instance")
    p.add_argument("file")
    p.add_argument("--theorem", required=True, help="theorem id such as T25 or a form name such as graph-regular-bounds")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("pack", parents=[common], help="construct a packing or report a witness")
    p.add_argument("file")
    p.set_defaults(func=cmd_pack)
    p = sub.add_parser("verify", parents=[common], help="verify a packing against an instance")
    p.add_argument("file")
    p.add_argument("--packing", required=True)
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("oracle", parents=[common], help="compare condition checkers, construction and brute force")
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle)
    p = sub.add_parser("reduce-partition", parents=[common], help="emit the number-partitioning reduction instance")
    p.add_argument("weights", help="comma-separated positive integers")
    p.set_defaults(func=cmd_reduce_partition)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidInstance as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except TheoremContradiction as exc:
        print(f"internal contradiction: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
