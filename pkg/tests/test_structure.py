import json

import pytest

from leaderhinf.errors import AntiParallelPairError, DuplicateEdgeError, GraphError, NotOnPathError, NotTreeError
from leaderhinf.generators import directed_cycle_plus_leader, directed_path
from leaderhinf.graph import build_graph
from leaderhinf.structure import (
    DECREASES,
    INCREASES,
    OUT_OF_SCOPE,
    SAME_PATH_BACKWARD,
    SAME_PATH_FORWARD,
    UNCLASSIFIED,
    LeaderRootedPath,
    apply_edge_and_measure,
    classify_edge_addition,
    interfering,
    leader_addition_effect,
    leader_rooted_paths,
)


def paths_of(g):
    return sorted(p.nodes for p in leader_rooted_paths(g))


def test_rooted_paths_simple():
    assert paths_of(directed_path(3)) == [(1, 2, 3)]
    fork = build_graph(4, [(3, 0), (0, 1), (0, 2)], [3])
    assert paths_of(fork) == [(0, 1), (0, 2)]
    assert leader_rooted_paths(fork)[0].root_leader == 3


def test_rooted_paths_two_leaders_overlap():
    # 4 -> 0 -> 1 -> 2, 5 -> 1, 1 -> 3
    g = build_graph(6, [(4, 0), (0, 1), (1, 2), (1, 3), (5, 1)], [4, 5])
    assert paths_of(g) == [(0, 1, 2), (0, 1, 3), (1, 2), (1, 3)]


def test_rooted_paths_stop_only_at_leaves():
    # node 1 is a sink with two in-neighbours, so it is not a leaf
    g = build_graph(4, [(2, 0), (0, 1), (3, 1)], [2, 3])
    assert paths_of(g) == []


def test_rooted_paths_need_tree():
    with pytest.raises(NotTreeError):
        leader_rooted_paths(directed_cycle_plus_leader(3))


def test_interfering_definition():
    path = (1, 2, 3, 4, 5, 6)
    assert not interfering(path, (1, 3), (4, 6))
    assert not interfering(path, (4, 6), (1, 3))
    assert not interfering(path, (1, 3), (3, 5))  # shared endpoint only
    assert interfering(path, (1, 4), (3, 5))
    assert interfering(path, (1, 6), (2, 4))
    with pytest.raises(NotOnPathError):
        interfering(path, (1, 3), (4, 9))
    with pytest.raises(NotOnPathError):
        LeaderRootedPath(path, 0).position(7)


def test_classification_path3():
    g = directed_path(3)
    c = classify_edge_addition(g, [], (1, 3))
    assert (c.classification, c.reason) == (DECREASES, SAME_PATH_FORWARD)
    c = classify_edge_addition(g, [], (3, 1))
    assert (c.classification, c.reason) == (INCREASES, SAME_PATH_BACKWARD)


def test_classification_interference_and_scope():
    g = directed_path(6)
    assert classify_edge_addition(g, [(1, 3)], (4, 6)).classification == DECREASES
    assert classify_edge_addition(g, [(1, 4)], (3, 5)).classification == UNCLASSIFIED
    # backward edge after earlier additions is outside the stated result
    assert classify_edge_addition(g, [(1, 3)], (6, 4)).classification == UNCLASSIFIED
    fork = build_graph(5, [(4, 0), (0, 1), (0, 2), (2, 3)], [4])
    c = classify_edge_addition(fork, [], (1, 3))
    assert (c.classification, c.reason) == (UNCLASSIFIED, OUT_OF_SCOPE)


def test_classification_errors():
    g = directed_path(3)
    with pytest.raises(DuplicateEdgeError):
        classify_edge_addition(g, [], (1, 2))
    with pytest.raises(AntiParallelPairError):
        classify_edge_addition(g, [], (2, 1))
    with pytest.raises(GraphError):
        classify_edge_addition(g, [], (1, 0))
    with pytest.raises(NotTreeError):
        classify_edge_addition(directed_cycle_plus_leader(4), [], (0, 2))


def test_measure_path3():
    fwd = apply_edge_and_measure(directed_path(3), (1, 3))
    assert fwd.hinf_before == pytest.approx(2.246979603717468)
    assert fwd.hinf_after == pytest.approx(1.986, abs=5e-4)
    assert fwd.prediction_confirmed is True
    assert fwd.inverse_shift[1] <= 1e-12
    back = apply_edge_and_measure(directed_path(3), (3, 1))
    # after the cycle edge the matrix equals the three-cycle one
    assert back.hinf_after == pytest.approx(4.181943336052392)
    assert back.inverse_shift[0] >= -1e-12
    d = json.loads(json.dumps(back.to_json()))
    assert d["classification"] == INCREASES and d["edge"] == [3, 1]


def test_measure_unclassified_has_no_verdict():
    fork = build_graph(5, [(4, 0), (0, 1), (0, 2), (2, 3)], [4])
    r = apply_edge_and_measure(fork, (1, 3))
    assert r.classification == UNCLASSIFIED and r.prediction_confirmed is None


def test_multi_leader_counterexample_is_flagged():
    # leaders 4 -> 0 and 5 -> 1; path (0, 1, 2) ends at a true leaf, yet the
    # forward edge 0 -> 2 raises the norm because node 1 has a second leader
    g = build_graph(6, [(4, 0), (0, 1), (0, 3), (1, 2), (5, 1)], [4, 5])
    r = apply_edge_and_measure(g, (0, 2))
    assert r.classification == DECREASES
    assert r.hinf_after > r.hinf_before
    assert r.prediction_confirmed is False


def test_leader_addition():
    before, after = leader_addition_effect(directed_path(1), 1)
    assert (before, after) == (1.0, 0.5)
    b, a = leader_addition_effect(directed_cycle_plus_leader(3), 0)
    assert a < b
    b, a = leader_addition_effect(directed_path(4), 4, count=3)
    assert a <= b + 1e-10
