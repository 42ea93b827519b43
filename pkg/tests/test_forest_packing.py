import random

import pytest
from hypothesis import given, settings, strategies as st

from forestpack.core import Graph, Infeasible, InvalidInstance, PackingSpec, capped_sum, verify_regular_forest_packing
from forestpack.forest_packing import (
    BoundedLog,
    ExchangeLog,
    brute_force_regular_packing,
    check_bounded_conditions,
    check_condition_25,
    check_condition_25_matroid,
    check_conditions_27,
    check_conditions_28,
    condition_value,
    even_split,
    pack_regular_forests,
    pack_regular_forests_bounded,
    pack_spanning_forests,
    raise_root_counts,
    water_fill,
)
from forestpack.partitions import Partition

from helpers import random_bounded_spec, random_fixed_ell, random_graph

K4 = Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))
P3 = Graph(3, ((0, 1), (1, 2)))
EDGE = Graph(2, ((0, 1),))
TRIANGLE = Graph(3, ((0, 1), (1, 2), (0, 2)))


def _violates(g, witness, h, ell):
    sets = [frozenset(e) for e in g.edges]
    return capped_sum(ell, len(witness)) + condition_value(sets, witness) < h * len(witness)


# --- spanning forests ---------------------------------------------------------


def test_k4_two_spanning_trees():
    assert check_condition_25(K4, 2, (1, 1))
    assert check_condition_25_matroid(K4, 2, (1, 1))
    packing = pack_spanning_forests(K4, 2, (1, 1))
    assert [len(m.edges) for m in packing.members] == [3, 3]
    assert verify_regular_forest_packing(K4, packing, PackingSpec.spanning((1, 1))) == []


def test_k4_unequal_counts():
    assert check_condition_25_matroid(K4, 2, (2, 1))
    packing = pack_spanning_forests(K4, 2, (2, 1))
    assert [len(m.roots) for m in packing.members] == [2, 1]


def test_single_edge_cannot_hold_two_trees():
    res = check_condition_25(EDGE, 2, (1, 1))
    assert not res and res.condition == "partition"
    assert res.witness == Partition.singletons(2)
    assert _violates(EDGE, res.witness, 2, (1, 1))


def test_path_cannot_hold_two_trees():
    assert not check_condition_25_matroid(P3, 2, (1, 1))
    with pytest.raises(Infeasible) as exc:
        pack_spanning_forests(P3, 2, (1, 1))
    assert exc.value.condition == "partition"
    assert _violates(P3, exc.value.witness, 2, (1, 1))


def test_isolated_vertices_single_forest():
    g = Graph(2, ())
    packing = pack_spanning_forests(g, 1, (2,))
    assert packing.members[0].edges == frozenset()
    assert packing.members[0].roots == frozenset({0, 1})


@pytest.mark.parametrize("g", [K4, P3, EDGE, TRIANGLE, Graph(3, ())])
def test_one_forest_with_all_vertices_as_roots(g):
    assert check_condition_25(g, 1, (g.n,))
    assert check_condition_25_matroid(g, 1, (g.n,))


def test_member_size_violation():
    res = check_condition_25(EDGE, 1, (3,))
    assert not res and res.condition == "member-size"


def test_ell_length_checked():
    with pytest.raises(InvalidInstance):
        check_condition_25(K4, 2, (1,))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32))
def test_spanning_witness_always_violates(seed):
    rng = random.Random(seed)
    g = random_graph(rng, max_n=5, max_m=7)
    k = rng.randint(1, 3)
    ell = random_fixed_ell(rng, g.n, k)
    try:
        packing = pack_spanning_forests(g, k, ell)
    except Infeasible as exc:
        assert exc.condition == "partition"
        assert _violates(g, exc.witness, k, ell)
        assert not check_condition_25(g, k, ell)
    else:
        assert verify_regular_forest_packing(g, packing, PackingSpec.spanning(ell)) == []


# --- regular forests with exact counts -------------------------------------


def test_k4_two_half_forests():
    packing = pack_regular_forests(K4, 1, 2, (2, 2))
    spec = PackingSpec.fixed(1, (2, 2))
    assert verify_regular_forest_packing(K4, packing, spec) == []
    a, b = packing.members
    assert a.support.isdisjoint(b.support)


def test_spanning_case_delegates():
    assert pack_regular_forests(K4, 2, 2, (1, 1)) == pack_spanning_forests(K4, 2, (1, 1))


def test_triangle_three_single_vertex_trees():
    assert check_conditions_27(TRIANGLE, 1, 3, (1, 1, 1))
    packing = pack_regular_forests(TRIANGLE, 1, 3, (1, 1, 1))
    assert all(len(m.support) == 1 and not m.edges for m in packing.members)
    assert brute_force_regular_packing(TRIANGLE, PackingSpec.fixed(1, (1, 1, 1))) is not None


def test_total_capacity_violation():
    res = check_conditions_27(EDGE, 1, 3, (1, 1, 1))
    assert res.condition == "total-capacity"
    with pytest.raises(Infeasible, match="total-capacity"):
        pack_regular_forests(EDGE, 1, 3, (1, 1, 1))


@pytest.mark.parametrize(
    "ell, h, n",
    [((3, 3, 1), 2, 4), ((2, 2, 2, 1), 2, 5), ((4, 1, 1), 2, 4), ((1, 1, 1, 1), 3, 3), ((5, 3, 2), 2, 5)],
)
def test_even_split_properties(ell, h, n):
    i0, target = even_split(ell, h, n)
    assert target[:i0] == list(ell[:i0])
    rest = target[i0:]
    assert sum(rest) == sum(ell[i0:])
    assert max(rest) - min(rest) <= 1
    assert all(t <= n for t in target)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**32))
def test_exchange_loop_invariants(seed):
    rng = random.Random(seed)
    g = random_graph(rng, max_n=6, max_m=10, min_n=2)
    k = rng.randint(2, 5)
    h = rng.randint(1, k - 1)
    ell = random_fixed_ell(rng, g.n, k)
    log = ExchangeLog()
    try:
        packing = pack_regular_forests(g, h, k, ell, log)
    except Infeasible as exc:
        assert not check_conditions_27(g, h, k, ell)
        if exc.condition == "partition":
            assert _violates(g, exc.witness, h, ell)
        return
    assert verify_regular_forest_packing(g, packing, PackingSpec.fixed(h, ell)) == []
    promotions = [e for e in log.events if e[0] == "promote"]
    # each promotion fixes one more forest; the last active forest is never promoted
    assert len(promotions) < h - log.i0 + 1
    assert [p[1] for p in promotions] == list(range(log.i0 + 1, log.i0 + 1 + len(promotions)))
    for ev in log.events:
        if ev[0] == "exchange":
            assert ev[4] >= 1


# --- regular forests with root bounds -----------------------------------------


def test_degenerate_bounds_match_spanning():
    spec = PackingSpec(2, 2, (2, 1, 1), (2, 1, 1))
    packing = pack_regular_forests_bounded(K4, spec)
    assert verify_regular_forest_packing(K4, packing, spec) == []
    assert [len(m.roots) for m in packing.members] == [1, 1]


def test_three_isolated_vertices():
    g = Graph(3, ())
    spec = PackingSpec(1, 3, (3, 1, 1, 1), (3, 1, 1, 1))
    packing = pack_regular_forests_bounded(g, spec)
    assert sorted(min(m.support) for m in packing.members) == [0, 1, 2]


def test_k4_bounded_roots():
    spec = PackingSpec(2, 3, (3, 1, 1, 1), (4, 2, 2, 2))
    log = BoundedLog()
    packing = pack_regular_forests_bounded(K4, spec, log=log)
    assert verify_regular_forest_packing(K4, packing, spec) == []
    counts = [len(m.roots) for m in packing.members]
    assert all(1 <= c <= 2 for c in counts) and 3 <= sum(counts) <= 4
    assert sum(log.ell_star) == 4
    assert brute_force_regular_packing(K4, spec) is not None


def test_saturated_bounds_give_isolated_vertices():
    spec = PackingSpec(1, 2, (2, 1, 1), (4, 2, 2))
    log = BoundedLog()
    packing = pack_regular_forests_bounded(P3, spec, log=log)
    assert log.saturated
    assert all(not m.edges for m in packing.members)
    assert verify_regular_forest_packing(P3, packing, spec) == []


def test_invalid_spec_is_rejected():
    with pytest.raises(InvalidInstance):
        pack_regular_forests_bounded(P3, PackingSpec(1, 1, (4, 4), (4, 4)))
    with pytest.raises(InvalidInstance):
        check_conditions_28(P3, PackingSpec(1, 1, (2, 1), (1, 1)))


def test_water_fill():
    assert water_fill((1, 1, 1), (3, 2, 2), 5) == [3, 1, 1]
    assert water_fill((1, 1), (1, 3), 3) == [1, 2]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_raising_steps_keep_bounds(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    spec = random_bounded_spec(rng, n)
    steps = []
    star = raise_root_counts(spec, n, steps)
    assert sum(star) == spec.upper[0]
    assert len(steps) == spec.upper[0] - sum(spec.ell)
    current = list(spec.ell)
    for p_star, j in steps:
        assert current[j] <= p_star < spec.ell_upper[j]
        # the lowest admissible index is the one raised
        assert all(not (current[i] <= p_star < spec.ell_upper[i]) for i in range(j))
        current[j] += 1
    assert current == star


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**32))
def test_bounded_failure_witness_violates_original_condition(seed):
    rng = random.Random(seed)
    g = random_graph(rng, max_n=5, max_m=6)
    spec = random_bounded_spec(rng, g.n)
    res = check_conditions_28(g, spec)
    try:
        packing = pack_regular_forests_bounded(g, spec)
    except Infeasible as exc:
        assert not res
        assert exc.condition == res.condition
        if exc.witness is not None:
            p, e = len(exc.witness), condition_value([frozenset(x) for x in g.edges], exc.witness)
            slack = spec.upper[0] - sum(spec.ell)
            a = slack + capped_sum(spec.ell, p) + e >= spec.h * p
            b = capped_sum(spec.ell_upper, p) + e >= spec.h * p
            assert not (a and b)
    else:
        assert res
        assert verify_regular_forest_packing(g, packing, spec) == []


def test_generic_checker_matches_graph_checker():
    rng = random.Random(9)
    for _ in range(60):
        g = random_graph(rng, max_n=5, max_m=7)
        spec = random_bounded_spec(rng, g.n)
        sets = [frozenset(e) for e in g.edges]
        assert bool(check_bounded_conditions(g.n, sets, spec)) == bool(check_conditions_28(g, spec))


def test_brute_force_examples():
    assert brute_force_regular_packing(K4, PackingSpec.spanning((1, 1))) is not None
    assert brute_force_regular_packing(EDGE, PackingSpec.spanning((1, 1))) is None
    single = brute_force_regular_packing(Graph(1, ()), PackingSpec.fixed(1, (1,)))
    assert single is not None and single.members[0].roots == frozenset({0})
