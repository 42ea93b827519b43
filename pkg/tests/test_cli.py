import json
import subprocess
import sys

import pytest

from forestpack import cli
from forestpack.cli import (
    PackingParseError,
    UsageError,
    instance_from_json,
    instance_to_json,
    main,
    packing_from_json,
    packing_to_json,
    verify_packing,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    out = json.loads(captured.out) if captured.out.strip() else None
    return code, out, captured.err


def test_check_feasible(capsys, fixtures_dir):
    code, report, _ = run(capsys, "check", str(fixtures_dir / "k4_spanning.json"), "--theorem", "T25")
    assert code == 0
    assert report["feasible"] is True
    assert report["stats"]["theorem"] == "T25"
    assert report["stats"]["blocks_evaluated"] == 15
    assert set(report) == {"feasible", "condition", "witness", "packing", "checks", "stats"}


def test_check_infeasible_has_witness(capsys, fixtures_dir):
    code, report, _ = run(capsys, "check", str(fixtures_dir / "two_isolated_arborescence.json"), "--theorem", "T8")
    assert code == 1
    assert report["feasible"] is False
    assert sorted(report["witness"]) == [["x"], ["y"]]


def test_check_by_form_name(capsys, fixtures_dir):
    code, report, _ = run(capsys, "check", str(fixtures_dir / "k4_bounded.json"), "--theorem", "graph-regular-bounds")
    assert code == 0 and report["stats"]["theorem"] == "T28"


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "malformed.json", "--theorem", "T25"],
        ["check", "k4_spanning.json", "--theorem", "T99"],
        ["check", "k4_bounded.json", "--theorem", "T25"],
        ["check", "k4_spanning.json", "--theorem", "T8"],
        ["pack", "missing.json"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors(capsys, fixtures_dir, argv):
    argv = [str(fixtures_dir / a) if a.endswith(".json") else a for a in argv]
    code = main(argv)
    capsys.readouterr()
    assert code == 2


def test_cap_exceeded(capsys, fixtures_dir):
    code = main(["check", str(fixtures_dir / "big_graph.json"), "--theorem", "T25"])
    assert code == 3
    assert "cap" in capsys.readouterr().err


def test_cap_can_be_raised_and_lowered(capsys, fixtures_dir):
    assert main(["check", str(fixtures_dir / "k4_spanning.json"), "--theorem", "T25", "--cap-bell", "3"]) == 3
    capsys.readouterr()


def test_pack_k4_two_spanning_trees(capsys, fixtures_dir):
    code, report, _ = run(capsys, "pack", str(fixtures_dir / "k4_spanning.json"))
    assert code == 0
    assert [len(m["elements"]) for m in report["packing"]] == [3, 3]
    assert report["checks"] == [{"name": "verify", "passed": True, "diagnostics": []}]
    assert "seconds" not in report["stats"]


def test_pack_infeasible(capsys, fixtures_dir):
    code, report, _ = run(capsys, "pack", str(fixtures_dir / "path_two_trees.json"))
    assert code == 1
    assert report["feasible"] is False and report["witness"] and report["packing"] is None


def test_pack_single_vertex(capsys, fixtures_dir):
    code, report, _ = run(capsys, "pack", str(fixtures_dir / "single_vertex.json"))
    assert code == 0
    assert report["packing"] == [{"elements": [], "roots": ["only"], "support": ["only"]}]


@pytest.mark.parametrize("name", ["hyper_small.json", "dyper_pair.json"])
def test_pack_other_structures_have_orientation(capsys, fixtures_dir, name):
    code, report, _ = run(capsys, "pack", str(fixtures_dir / name))
    assert code == 0
    assert all("orientation" in m for m in report["packing"])


def test_timings_are_opt_in(capsys, fixtures_dir):
    code, report, _ = run(capsys, "pack", str(fixtures_dir / "k4_spanning.json"), "--timings")
    assert code == 0 and "seconds" in report["stats"]


@pytest.mark.parametrize("name", ["k4_bounded.json", "hyper_small.json", "dyper_pair.json"])
def test_verify_accepts_pack_output(capsys, fixtures_dir, tmp_path, name):
    out = tmp_path / "report.json"
    assert main(["pack", str(fixtures_dir / name), "--json-out", str(out)]) == 0
    capsys.readouterr()
    code, report, _ = run(capsys, "verify", str(fixtures_dir / name), "--packing", str(out))
    assert code == 0 and report["checks"][0]["passed"]
    # a bare member list works too
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps(json.loads(out.read_text())["packing"]))
    assert main(["verify", str(fixtures_dir / name), "--packing", str(bare)]) == 0
    capsys.readouterr()


def test_verify_rejects_packing_for_other_host(capsys, fixtures_dir, tmp_path):
    out = tmp_path / "report.json"
    assert main(["pack", str(fixtures_dir / "k4_spanning.json"), "--json-out", str(out)]) == 0
    capsys.readouterr()
    code, report, _ = run(capsys, "verify", str(fixtures_dir / "single_vertex.json"), "--packing", str(out))
    assert code == 1 and not report["checks"][0]["passed"]


def test_verify_mutated_packing(capsys, fixtures_dir, tmp_path):
    out = tmp_path / "report.json"
    main(["pack", str(fixtures_dir / "k4_spanning.json"), "--json-out", str(out)])
    capsys.readouterr()
    doc = json.loads(out.read_text())
    doc["packing"][1]["elements"] = doc["packing"][0]["elements"]
    out.write_text(json.dumps(doc))
    code, report, _ = run(capsys, "verify", str(fixtures_dir / "k4_spanning.json"), "--packing", str(out))
    assert code == 1
    assert any(d.startswith("disjointness") for d in report["checks"][0]["diagnostics"])


@pytest.mark.parametrize(
    "name", ["k4_spanning.json", "k4_bounded.json", "path_two_trees.json", "hyper_small.json", "dyper_pair.json"]
)
def test_oracle_agrees(capsys, fixtures_dir, name):
    code, report, _ = run(capsys, "oracle", str(fixtures_dir / name))
    assert code == 0
    assert all(row["passed"] for row in report["checks"])
    assert report["checks"][1]["name"] == "brute-force"


def test_oracle_reports_a_corrupted_row(capsys, fixtures_dir, monkeypatch):
    monkeypatch.setattr(cli, "ORACLE_FAULTS", {"construction"})
    code, report, _ = run(capsys, "oracle", str(fixtures_dir / "k4_spanning.json"))
    assert code == 1
    failing = [row["name"] for row in report["checks"] if not row["passed"]]
    assert failing == ["construction"]


@pytest.mark.parametrize("weights, code, feasible", [("1,2,3", 0, True), ("1,1", 0, True), ("1,1,1", 1, False), ("1,3", 1, False)])
def test_reduce_partition(capsys, weights, code, feasible):
    got, report, _ = run(capsys, "reduce-partition", weights)
    assert got == code
    assert report["feasible"] is feasible
    assert report["checks"][0]["passed"]
    assert report["reduction"]["k"] == 2
    inst = instance_from_json(report["instance"])
    assert inst.kind == "digraph"


@pytest.mark.parametrize("weights", ["1,x", "0,1", ""])
def test_reduce_partition_bad_weights(capsys, weights):
    assert main(["reduce-partition", weights]) == 2
    capsys.readouterr()


@pytest.mark.parametrize(
    "name", ["k4_spanning.json", "k4_bounded.json", "hyper_small.json", "dyper_pair.json", "two_isolated_arborescence.json"]
)
def test_instance_json_round_trip(fixtures_dir, name):
    doc = json.loads((fixtures_dir / name).read_text())
    inst = instance_from_json(doc)
    again = instance_from_json(instance_to_json(inst))
    assert again == inst
    assert instance_to_json(again) == instance_to_json(inst)


def test_packing_json_round_trip(fixtures_dir):
    from forestpack.cli import construct

    for name in ["k4_bounded.json", "hyper_small.json", "dyper_pair.json"]:
        inst = instance_from_json(json.loads((fixtures_dir / name).read_text()))
        packing = construct(inst, None)
        doc = packing_to_json(inst, packing)
        parsed = packing_from_json(inst, doc)
        assert packing_to_json(inst, parsed) == doc
        assert verify_packing(inst, parsed) == []


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"type": "tree"},
        {"type": "graph", "vertices": ["a", "a"]},
        {"type": "graph", "vertices": ["a", "b"], "edges": [["a", "c"]]},
        {"type": "graph", "vertices": ["a", "b"], "edges": [["a", "b", "a"]]},
        {"type": "graph", "vertices": ["a", "b"], "edges": [["a", "a"]]},
        {"type": "digraph", "vertices": ["a", "b"], "arcs": [{"tails": ["a", "b"], "head": "b"}]},
        {"type": "graph", "vertices": ["a"], "spec": {"h": 1}},
        {"type": "graph", "vertices": ["a"], "spec": {"h": 1, "k": 1, "lower": [0, 1], "upper": [1, 1]}},
    ],
)
def test_malformed_instances(doc):
    with pytest.raises(UsageError):
        instance_from_json(doc)


def test_packing_with_unknown_vertex(fixtures_dir):
    inst = instance_from_json(json.loads((fixtures_dir / "k4_spanning.json").read_text()))
    with pytest.raises(PackingParseError):
        packing_from_json(inst, [{"elements": [], "roots": ["zz"], "support": []}])
    with pytest.raises(UsageError):
        packing_from_json(inst, {"packing": "nope"})


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "forestpack", "check", str(fixtures_dir / "k4_spanning.json"), "--theorem", "T25"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["feasible"] is True
