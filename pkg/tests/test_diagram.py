import numpy as np
import pytest

from lfsr_debruijn import oracles
from lfsr_debruijn.diagram import (
    InvariantError,
    PerfectTree,
    StateClass,
    _check_perfect,
    adjacency_graph,
    analysis_report,
    build_diagram,
    connected_components,
    export_dot,
    extract_trees,
    find_cycle,
)
from lfsr_debruijn.fsr import StageRangeError, cycle_states, from_bitstring, shift_int, to_bitstring


def test_n3_leaves():
    d = build_diagram(3)
    assert d.size == 8
    assert {to_bitstring(s, 3) for s in d.leaves()} == {"100", "001", "010", "111"}


def test_n6_classes(d6):
    assert d6.class_of(from_bitstring("101100")) == StateClass.LEAF_100
    assert d6.class_of(0) == StateClass.ON_CYCLE
    assert int(d6.is_leaf.sum()) == 32
    # oracle: count states whose last three bits (a, b, c) have c != a ^ b
    assert sum(1 for y in oracles.states(6) if y[-1] != y[-3] ^ y[-2]) == 32


def test_build_range():
    with pytest.raises(StageRangeError):
        build_diagram(2)
    with pytest.raises(StageRangeError):
        build_diagram(29)


@pytest.mark.parametrize("n", range(3, 10))
def test_diagram_against_oracle(n):
    d = build_diagram(n)
    succ = oracles.diagram(n)
    preds = oracles.predecessors(n)
    for y, z in succ.items():
        s = oracles.to_int(y)
        assert d.successor_of(s) == oracles.to_int(z)
        got = d.predecessors_of(s)
        assert sorted(got) == sorted(oracles.to_int(p) for p in preds[y])
        assert d.class_of(s).is_leaf == (len(preds[y]) == 0)
    counts = d.predecessor_counts()
    assert counts.sum() == d.size
    for s in range(d.size):
        p = d.predecessors_of(s)
        if p:
            assert p[0] ^ p[1] == 1 << (n - 1)


@pytest.mark.parametrize("workers", [2, 3, 5])
def test_parallel_build_identical(workers):
    a = build_diagram(14)
    b = build_diagram(14, workers=workers)
    assert np.array_equal(a.successor, b.successor)
    assert np.array_equal(a.classes, b.classes)


@pytest.mark.parametrize("n", range(3, 10))
def test_components_against_oracle(n):
    comps = connected_components(build_diagram(n))
    brute = oracles.components(n)
    assert len(comps) == len(brute) == 2
    got = sorted(sorted(c.states.tolist()) for c in comps)
    want = sorted(sorted(oracles.to_int(y) for y in comp) for comp in brute)
    assert got == want


def test_components_n6(d6):
    g1, g2 = connected_components(d6)
    assert g1.id == 1 and g1.cycle == [0] and g1.ring(6) == [0]
    assert g2.cycle == list(cycle_states(6)) and g2.ring(6).bits == (0, 1, 1)
    assert from_bitstring("101100") in set(g1.states.tolist())
    assert shift_int(from_bitstring("101100"), 6, 4) == 0


def test_components_n3():
    g1, g2 = connected_components(build_diagram(3))
    assert sorted(g1.states.tolist()) == [0b000, 0b100]
    assert g2.size == 6


def test_find_cycle_from_start(d6):
    assert find_cycle(d6, from_bitstring("111111")) == list(cycle_states(6))
    assert find_cycle(d6, 0) == [0]


@pytest.mark.parametrize("n", range(3, 13))
def test_g1_holds_s100_and_s000(n):
    d = build_diagram(n)
    g1 = set(connected_components(d)[0].states.tolist())
    for s in range(d.size):
        if s & 7 in (0b100, 0b000):
            assert s in g1
            assert any(shift_int(s, n, k) == 0 for k in range(n - 1))


def test_trees_n3():
    trees = extract_trees(build_diagram(3))
    assert [t.depth for t in trees] == [0, 0, 0, 0]
    assert [t.size for t in trees] == [1, 1, 1, 1]


def test_trees_n6(d6):
    trees = extract_trees(d6)
    assert [t.root for t in trees] == [0b100000] + [v ^ 0b100000 for v in cycle_states(6)]
    assert [t.depth for t in trees] == [3] * 4
    assert [t.size for t in trees] == [15] * 4
    assert 4 * 15 + 4 == 64
    s100_g1 = {s for s in connected_components(d6)[0].states.tolist() if s & 7 == 0b100}
    assert set(trees[0].leaves().tolist()) == s100_g1


@pytest.mark.parametrize("n", range(3, 12))
def test_tree_leaves_reach_root(n):
    d = build_diagram(n)
    trees = extract_trees(d)
    union = set()
    for t in trees:
        vs = set(t.vertices.tolist())
        assert not vs & union
        union |= vs
        for leaf in t.leaves().tolist():
            assert shift_int(leaf, n, n - 3) == t.root
        for child, parent in t.parent_of.items():
            assert d.successor_of(child) == parent
    assert len(union) + 4 == d.size


def test_non_perfect_tree_detected():
    # root 0 with a single child 1
    t = PerfectTree(root=0, depth=1, vertices=np.array([0, 1, 2]), parents=np.array([-1, 0, 1]))
    with pytest.raises(InvariantError):
        _check_perfect(t, np.array([0, 1, 2]), 4)


@pytest.mark.parametrize("n", [3, 6, 10])
def test_adjacency_graph_isolated(n):
    adj = adjacency_graph(connected_components(build_diagram(n)))
    assert adj.vertices == (1, 2)
    assert adj.edge_count == 0


def test_adjacency_graph_counts_cross_pairs():
    # synthetic split of the n=3 space; pairs (000,100) and (001,101) straddle
    from lfsr_debruijn.diagram import Component
    comps = [
        Component(1, np.array([0b000, 0b001]), [0]),
        Component(2, np.array([2, 3, 4, 5, 6, 7]), [2]),
    ]
    adj = adjacency_graph(comps)
    assert adj.edges == {(1, 2): 2}


def test_report(d6):
    rep = analysis_report(d6)
    assert rep["ok"] and rep["schema"] == 1
    assert [c["ring"] for c in rep["components"]] == ["[0]", "[0,1,1]"]


def test_export_dot_n3():
    text = export_dot(build_diagram(3))
    assert text.count("->") == 8
    assert sum(1 for line in text.splitlines() if "[" in line and "->" not in line and "node" not in line) == 8


def test_export_dot_n6(d6):
    text = export_dot(d6)
    assert text.count("->") == 64
    assert text.count("subgraph cluster_") == 2
    assert text == export_dot(d6)


def test_export_cap():
    d = build_diagram(11)
    with pytest.raises(ValueError):
        export_dot(d)
    assert export_dot(d, force=True).count("->") == 2048
