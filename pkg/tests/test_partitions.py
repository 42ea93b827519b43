import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from forestpack.core import CapExceeded, Digraph, Graph, Hypergraph, InvalidInstance
from forestpack.partitions import (
    Partition,
    Subpartition,
    bell,
    crosses,
    crossing_matrix,
    entering_count,
    entering_matrix_directed,
    enumerate_partitions,
    enumerate_subpartitions,
    meet_join,
    partition_table,
    restricted_growth_strings,
    subpartition_table,
    table_to_partition,
    table_to_subpartition,
)

from helpers import random_hypergraph, random_partition


def partitions_of(max_n=7):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.integers(0, n - 1), min_size=n, max_size=n),
            st.lists(st.integers(0, n - 1), min_size=n, max_size=n),
        )
    ).map(lambda t: (Partition.from_labels(t[1]), Partition.from_labels(t[2])))


def test_partition_constructors():
    assert Partition.of(3, [[0, 1], [2]]) == Partition([[2], [1, 0]])
    assert len(Partition.singletons(4)) == 4
    assert Partition.trivial(4) == Partition([[0, 1, 2, 3]])
    assert Partition.from_labels([5, 5, 2]) == Partition([[0, 1], [2]])
    with pytest.raises(InvalidInstance):
        Partition.of(3, [[0, 1]])
    with pytest.raises(InvalidInstance):
        Partition.of(3, [[0, 1], [1, 2]])


def test_subpartition_blocks():
    sp = Subpartition([[2], [0, 1]])
    assert sp.ground == frozenset({0, 1, 2})
    assert sp.block_of(1) == frozenset({0, 1})
    assert sp.block_of(5) is None


@pytest.mark.parametrize(
    "x, blocks, expected",
    [({0, 1}, [[0], [1], [2]], True), ({0, 1}, [[0, 1], [2]], False), ({2}, [[0], [1], [2]], False), ({2}, [[0, 1, 2]], False)],
)
def test_crosses(x, blocks, expected):
    assert crosses(x, [frozenset(b) for b in blocks]) is expected


def test_entering_count_examples():
    tri = Graph(3, ((0, 1), (1, 2), (0, 2)))
    assert entering_count(tri, Partition.singletons(3)) == 3
    assert entering_count(tri, Partition.trivial(3)) == 0
    assert entering_count(Digraph(3, ((0, 1), (1, 2))), Subpartition([[1]])) == 1
    assert entering_count(tri, Partition.singletons(3), subset=[0]) == 1


@pytest.mark.parametrize(
    "p1, p2, join, meet",
    [
        ([[0, 1], [2]], [[0], [1, 2]], [[0, 1, 2]], [[0], [1], [2]]),
        ([[0, 1], [2]], [[0, 1], [2]], [[0, 1], [2]], [[0, 1], [2]]),
        ([[0], [1], [2]], [[0, 1, 2]], [[0, 1, 2]], [[0], [1], [2]]),
    ],
)
def test_meet_join_examples(p1, p2, join, meet):
    assert meet_join(Partition(p1), Partition(p2)) == (Partition(join), Partition(meet))


def test_meet_join_rejects_different_grounds():
    with pytest.raises(InvalidInstance):
        meet_join(Partition.trivial(2), Partition.trivial(3))


def test_crossing_pair_has_no_meet_made_of_single_intersections():
    # For {02,13} and {03,12} every nonempty U1 & U2 is a singleton, yet the
    # block-count identity with the ordering bounds rules out a singleton meet.
    p1, p2 = Partition([[0, 2], [1, 3]]), Partition([[0, 3], [1, 2]])
    atoms = {u1 & u2 for u1 in p1 for u2 in p2 if u1 & u2}
    assert all(len(a) == 1 for a in atoms)
    candidates = [
        (j, m)
        for j in enumerate_partitions(4)
        for m in enumerate_partitions(4)
        if len(j) + len(m) == 4 and len(m) >= 2 >= len(j) and all(b in atoms for b in m)
    ]
    assert candidates == []
    join, meet = meet_join(p1, p2)
    assert len(join) + len(meet) == 4


@given(partitions_of())
def test_lattice_properties(pair):
    p1, p2 = pair
    join, meet = meet_join(p1, p2)
    for b in meet:
        assert b == frozenset().union(*(a for a in (u & v for u in p1 for v in p2) if a <= b))
    for b in list(p1) + list(p2):
        assert any(b <= j for j in join)
    assert len(join) + len(meet) == len(p1) + len(p2)
    assert len(meet) >= max(len(p1), len(p2)) >= min(len(p1), len(p2)) >= len(join)


@given(partitions_of())
def test_meet_join_is_commutative(pair):
    p1, p2 = pair
    assert meet_join(p1, p2) == meet_join(p2, p1)


@given(partitions_of(), st.data())
def test_crossing_under_join_and_meet(pair, data):
    p1, p2 = pair
    n = len(p1.ground)
    x = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    join, meet = meet_join(p1, p2)
    if crosses(x, join):
        assert crosses(x, p1) and crosses(x, p2)
    if crosses(x, meet):
        assert crosses(x, p1) or crosses(x, p2)


@settings(max_examples=200)
@given(st.integers(0, 2**32))
def test_entering_count_is_submodular(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    hg = random_hypergraph(rng, max_m=8, max_size=n, n=n)
    p1, p2 = random_partition(rng, n), random_partition(rng, n)
    join, meet = meet_join(p1, p2)
    assert entering_count(hg, p1) + entering_count(hg, p2) >= entering_count(hg, meet) + entering_count(hg, join)


@given(st.integers(0, 12), st.integers(0, 12), st.integers(0, 12), st.integers(1, 12))
def test_capped_exchange_inequality(a1, a2, b2, ell):
    b1 = a1 + a2 - b2
    if b1 < 0 or min(a1, a2) < b2:
        return
    assert min(ell, a1) + min(ell, a2) >= min(ell, b1) + min(ell, b2)


@pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (3, 5), (4, 15), (6, 203)])
def test_partition_counts(n, count):
    assert bell(n) == count
    assert sum(1 for _ in enumerate_partitions(n)) == count
    assert partition_table(n).shape[0] == count


@pytest.mark.parametrize("n, count", [(1, 2), (2, 5), (3, 15)])
def test_subpartition_counts(n, count):
    subs = list(enumerate_subpartitions(n))
    assert len(subs) == count
    assert len(set(subs)) == count
    assert subpartition_table(n)[0].shape[0] == count


def test_subpartitions_of_two_vertices():
    expected = {Subpartition(b) for b in ([], [[0]], [[1]], [[0], [1]], [[0, 1]])}
    assert set(enumerate_subpartitions(2)) == expected


def test_restricted_growth_strings_are_canonical():
    for rgs in restricted_growth_strings(5):
        top = -1
        for x in rgs:
            assert x <= top + 1
            top = max(top, x)


def test_enumeration_caps():
    with pytest.raises(CapExceeded):
        list(enumerate_partitions(5, cap=4))
    with pytest.raises(CapExceeded):
        list(enumerate_subpartitions(5, cap=4))


def test_tables_round_trip():
    table = partition_table(4)
    assert {table_to_partition(r) for r in table} == set(enumerate_partitions(4))
    full, sizes = subpartition_table(3)
    subs = [table_to_subpartition(r, 3) for r in full]
    assert set(subs) == set(enumerate_subpartitions(3))
    assert [len(s) for s in subs] == list(sizes)


def test_crossing_matrix_matches_entering_count():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(2, 6)
        hg = random_hypergraph(rng, max_m=6, max_size=n, n=n)
        table = partition_table(n)
        mat = crossing_matrix(table, hg.hyperedges)
        for row, counts in zip(table, mat.sum(axis=1) if mat.ndim == 2 and mat.shape[1] else np.zeros(len(table))):
            assert counts == entering_count(hg, table_to_partition(row))


def test_directed_entering_matrix_matches_entering_count():
    d = Digraph(3, ((0, 1), (1, 2), (2, 0), (0, 2)))
    arcs = d.as_dypergraph().hyperarcs
    full, _ = subpartition_table(3)
    mat = entering_matrix_directed(full, 3, arcs)
    for row, hits in zip(full, mat.sum(axis=1)):
        assert hits == entering_count(d, table_to_subpartition(row, 3))
