import json
import math

import numpy as np
import pytest

from treesample.graph import WeightedGraph, complete_unit_graph
from treesample.tree import (
    is_dependency_tree,
    is_spanning_tree,
    log_tree_weight,
    read_tree,
    tree_record,
    tree_weight,
    write_tree,
)
from tests.conftest import make_graph


def test_spanning_chain():
    assert is_spanning_tree([0, 1], 2)


def test_spanning_rejects_two_cycle():
    assert not is_spanning_tree([2, 1], 2)


def test_spanning_allows_two_root_edges():
    assert is_spanning_tree([0, 0, 2], 3)
    assert not is_dependency_tree([0, 0, 2], 3)


def test_dependency_single_root():
    assert is_dependency_tree([0, 1, 1], 3)
    assert is_dependency_tree([0], 1)


def test_dependency_implies_spanning():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(1, 7))
        heads = rng.integers(0, n + 1, size=n)
        if is_dependency_tree(heads, n):
            assert is_spanning_tree(heads, n)


def test_predicates_reject_bad_input():
    assert not is_spanning_tree([0, 5], 2)  # head out of range
    assert not is_spanning_tree([1, 0], 2)  # self-loop on word 1
    assert not is_spanning_tree([0, 1], 3)  # wrong length


def test_tree_weight_all_ones():
    g = complete_unit_graph(3)
    assert tree_weight(g, [0, 1, 1]) == 1.0


def test_tree_weight_two_factor_product():
    w = np.zeros((3, 3))
    w[0, 1] = 2.0
    w[1, 2] = 3.0
    g = WeightedGraph(2, w)
    assert tree_weight(g, [0, 1]) == 6.0


def test_tree_weight_matches_manual_product():
    g = make_graph(4, seed=1)
    heads = [0, 1, 2, 2]
    manual = 1.0
    for word, head in enumerate(heads, start=1):
        manual *= g.weights[head, word]
    assert tree_weight(g, heads) == pytest.approx(manual, rel=1e-12)


def test_tree_weight_order_invariance():
    g = make_graph(6, seed=2)
    heads = [0, 1, 2, 3, 4, 5]
    base = tree_weight(g, heads)
    rng = np.random.default_rng(5)
    for _ in range(20):
        order = rng.permutation(6)
        prod = 1.0
        for k in order:
            prod *= g.weights[heads[k], k + 1]
        assert prod == pytest.approx(base, rel=1e-12)


def test_log_tree_weight():
    g = make_graph(5, seed=3)
    heads = [0, 1, 1, 2, 3]
    assert log_tree_weight(g, heads) == pytest.approx(math.log(tree_weight(g, heads)), rel=1e-12)


def test_log_tree_weight_zero_edge():
    w = np.zeros((3, 3))
    w[0, 1] = 1.0  # edge into word 2 missing
    g = WeightedGraph(2, w)
    assert log_tree_weight(g, [0, 1]) == -math.inf
    assert tree_weight(g, [0, 1]) == 0.0


def test_record_round_trip():
    rec = tree_record([0, 1, 1], weight=0.5, logprob=-0.7)
    assert rec == {"heads": [0, 1, 1], "weight": 0.5, "logprob": -0.7}
    line = write_tree(np.array([0, 1, 1]), weight=0.5)
    assert json.loads(line)["heads"] == [0, 1, 1]
    assert list(read_tree(line)) == [0, 1, 1]


def test_record_drops_none_fields():
    assert tree_record([0], weight=None) == {"heads": [0]}


def test_read_tree_rejects_garbage():
    with pytest.raises(ValueError):
        read_tree(json.dumps({"no_heads": []}))
