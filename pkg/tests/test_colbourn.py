import math

import numpy as np
import pytest

from treesample import oracle
from treesample.colbourn import (
    colbourn_sample,
    initial_state,
    transit_state,
    transition_probs,
)
from treesample.errors import DegenerateDistributionError
from treesample.graph import WeightedGraph, complete_unit_graph
from treesample.mtt import laplacian_single_root, marginals
from treesample.stats import empirical_counts, tvd
from treesample.tree import is_dependency_tree
from tests.conftest import make_graph


def test_initial_state_inverse_identity():
    for seed in range(5):
        g = make_graph(6, seed=seed, family=seed)
        s = initial_state(g)
        assert np.abs(s.B @ s.L.T - np.eye(6)).max() < 1e-10


def test_initial_transition_probs_are_first_marginal_column():
    g = make_graph(5, seed=1)
    s = initial_state(g)
    assert np.allclose(transition_probs(s), marginals(g)[:, 1], atol=1e-12)


def test_bias_demo_first_word_probs(bias_demo):
    p = transition_probs(initial_state(bias_demo))
    assert p[0] == pytest.approx(2 / 3, abs=1e-12)  # ROOT
    assert p[2] == pytest.approx(1 / 3, abs=1e-12)  # B -> A
    assert p[3] == 0.0  # no C -> A edge


def test_bias_demo_conditional_after_root_edge(bias_demo):
    s = transit_state(initial_state(bias_demo), 0)
    p = transition_probs(s)
    assert p[1] == pytest.approx(0.5, abs=1e-12)
    assert p[3] == pytest.approx(0.5, abs=1e-12)


def test_forced_chain_probability(bias_demo):
    # forcing R->A, A->B, A->C walks into one of the three unit trees
    s = initial_state(bias_demo)
    product = 1.0
    for word, head in [(1, 0), (2, 1), (3, 1)]:
        p = transition_probs(s)
        product *= p[head]
        if word < 3:
            s = transit_state(s, head)
    assert product == pytest.approx(1 / 3, rel=1e-12)


def test_transition_probs_sum_to_one():
    g = make_graph(8, seed=2)
    s = initial_state(g)
    rng = np.random.default_rng(0)
    for i in range(1, 9):
        p = transition_probs(s)
        assert p.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(p >= 0)
        j = int(rng.choice(9, p=p))
        if i < 8:
            s = transit_state(s, j)


def test_sherman_morrison_matches_fresh_inverse():
    rng = np.random.default_rng(7)
    worst = 0.0
    for trial in range(20):
        n = int(rng.integers(2, 21))
        g = make_graph(n, seed=trial, family=trial)
        s = initial_state(g)
        for i in range(1, n):
            j = int(rng.choice(n + 1, p=transition_probs(s)))
            s = transit_state(s, j)
            worst = max(worst, np.abs(s.B - np.linalg.inv(s.L).T).max())
    assert worst < 1e-8


def test_state_laplacian_tracks_weights():
    g = make_graph(6, seed=3)
    rng = np.random.default_rng(1)
    s = initial_state(g)
    for i in range(1, 6):
        j = int(rng.choice(7, p=transition_probs(s)))
        s = transit_state(s, j)
        assert np.array_equal(s.L, laplacian_single_root(s.W))
        # fixed words have exactly one incoming edge left
        for fixed in range(1, s.i):
            assert np.count_nonzero(s.W[:, fixed]) == 1


def test_chain_rule_matches_oracle():
    g = make_graph(5, seed=11)
    table = oracle.enumerate_trees(g).dependency_table()
    rng = np.random.default_rng(3)
    for _ in range(40):
        s = initial_state(g)
        logp = 0.0
        heads = []
        for i in range(1, 6):
            p = transition_probs(s)
            j = int(rng.choice(6, p=p))
            heads.append(j)
            logp += math.log(p[j])
            if i < 5:
                s = transit_state(s, j)
        assert math.exp(logp) == pytest.approx(table[tuple(heads)], rel=1e-8)


def test_transit_rejects_zero_weight_edge(bias_demo):
    s = initial_state(bias_demo)
    with pytest.raises(ValueError):
        transit_state(s, 3)  # C -> A has zero weight
    with pytest.raises(ValueError):
        transit_state(s, 1)  # self-loop


def test_final_state_refuses_transitions(bias_demo):
    s = initial_state(bias_demo)
    for word, head in [(1, 0), (2, 1), (3, 1)]:
        s = transit_state(s, head)
    assert s.done
    with pytest.raises(ValueError):
        transition_probs(s)
    with pytest.raises(ValueError):
        transit_state(s, 0)


def test_states_are_persistent_values(bias_demo):
    s0 = initial_state(bias_demo)
    w_before = s0.W.copy()
    s1 = transit_state(s0, 0)
    s2 = transit_state(s0, 2)  # branch from the same parent
    assert np.array_equal(s0.W, w_before)
    assert s1.W[0, 1] > 0 and s2.W[2, 1] > 0
    assert np.allclose(transition_probs(s0), transition_probs(initial_state(bias_demo)))


def test_single_word_sample_is_deterministic(rng):
    g = complete_unit_graph(1)
    assert list(colbourn_sample(g, rng)) == [0]


def test_sample_distribution_quick(bias_demo, rng):
    init = initial_state(bias_demo)
    n_samples = 45_000
    counts = empirical_counts(colbourn_sample(bias_demo, rng, initial=init) for _ in range(n_samples))
    freqs = np.array(list(counts.values())) / n_samples
    assert set(counts) == {(0, 1, 1), (0, 3, 1), (2, 3, 0)}
    assert np.abs(freqs - 1 / 3).max() < 0.01


def test_sample_tvd_on_random_graph(rng):
    g = make_graph(4, seed=13)
    table = oracle.enumerate_trees(g).dependency_table()
    init = initial_state(g)
    n_samples = 50_000
    counts = empirical_counts(colbourn_sample(g, rng, initial=init) for _ in range(n_samples))
    assert tvd(counts, table, n_samples) < 0.02
    assert all(is_dependency_tree(h, 4) for h in counts)


def test_degenerate_graph_raises():
    w = np.zeros((3, 3))
    w[0, 1] = w[0, 2] = 1.0
    with pytest.raises(DegenerateDistributionError):
        initial_state(WeightedGraph(2, w))
