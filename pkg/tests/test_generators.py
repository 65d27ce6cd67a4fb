from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwtrees.errors import BadConfigError, TooLargeError
from mwtrees.gallery import diamond4, path_graph
from mwtrees.generators import (
    GenConfig,
    WeightKind,
    distance_oracle,
    random_connected_nontree,
    random_instances,
    random_nonsingular,
    random_spd,
    random_tree,
    spanning_tree_oracle,
)
from mwtrees.graphs import is_connected, is_tree, validate, weight_sum
from mwtrees.linalg import is_spd
from mwtrees.operators import distance_matrix


def test_gen_config_validation():
    with pytest.raises(BadConfigError):
        GenConfig(n_range=(1, 5))
    with pytest.raises(BadConfigError):
        GenConfig(n_range=(5, 2))
    with pytest.raises(BadConfigError):
        GenConfig(s_range=(0, 2))
    with pytest.raises(BadConfigError):
        GenConfig(condition_cap=0.5)
    with pytest.raises(BadConfigError):
        GenConfig(kind="spd")


def test_random_tree_is_deterministic():
    cfg = GenConfig(seed=123)
    g1, g2 = random_tree(cfg), random_tree(cfg)
    assert g1.n == g2.n and g1.s == g2.s
    for e1, e2 in zip(g1.edges, g2.edges):
        assert (e1.u, e1.v) == (e2.u, e2.v)
        assert np.array_equal(e1.weight, e2.weight)
    g3 = random_tree(GenConfig(seed=124))
    different = (g1.n != g3.n) or (g1.s != g3.s) or any(
        (a.u, a.v) != (b.u, b.v) or not np.array_equal(a.weight, b.weight)
        for a, b in zip(g1.edges, g3.edges)
    )
    assert different


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_tree_is_a_valid_tree_in_range(seed):
    cfg = GenConfig(n_range=(2, 10), s_range=(1, 4), seed=seed)
    g = random_tree(cfg)
    assert 2 <= g.n <= 10 and 1 <= g.s <= 4
    assert validate(g) == []
    assert is_tree(g)


def test_random_tree_spd_weights_are_spd():
    g = random_tree(GenConfig(n_range=(6, 6), s_range=(3, 3),
                              kind=WeightKind.SPD, seed=77))
    assert all(is_spd(e.weight) for e in g.edges)


def test_random_tree_scalar_kinds():
    g = random_tree(GenConfig(n_range=(5, 5), s_range=(2, 2),
                              kind=WeightKind.SCALAR_POSITIVE, seed=5))
    for e in g.edges:
        assert e.weight[0, 1] == 0.0
        assert e.weight[0, 0] == e.weight[1, 1] > 0.0
    g = random_tree(GenConfig(n_range=(5, 5), s_range=(2, 2),
                              kind=WeightKind.SCALAR_ANY_NONZERO, seed=6))
    signs = {np.sign(e.weight[0, 0]) for e in g.edges}
    for e in g.edges:
        assert e.weight[0, 0] != 0.0
    assert signs <= {-1.0, 1.0}


def test_random_tree_nonsingular_weight_sum_is_invertible():
    for seed in range(25):
        g = random_tree(GenConfig(n_range=(2, 6), s_range=(2, 3),
                                  kind=WeightKind.NONSINGULAR, seed=seed))
        total = weight_sum(g)
        sv = np.linalg.svd(total, compute_uv=False)
        assert sv[-1] > sv[0] / 1e4


def test_random_tree_topology_is_uniform():
    # 16 labeled trees on 4 vertices; 10_000 draws should put each within
    # five standard deviations of 625
    counts = Counter()
    for i in range(10_000):
        g = random_tree(GenConfig(n_range=(4, 4), s_range=(1, 1),
                                  kind=WeightKind.SCALAR_POSITIVE,
                                  seed=900_000 + i))
        counts[tuple((e.u, e.v) for e in g.edges)] += 1
    assert len(counts) == 16
    sigma = (10_000 * (1 / 16) * (15 / 16)) ** 0.5
    for topo, count in counts.items():
        assert abs(count - 625) < 5 * sigma, (topo, count)


def test_random_spd_properties():
    w = random_spd(3, condition_cap=100.0, seed=1)
    assert is_spd(w)
    eigs = np.linalg.eigvalsh(w)
    assert eigs[-1] / eigs[0] <= 100.0 * (1 + 1e-9)
    assert np.array_equal(w, random_spd(3, condition_cap=100.0, seed=1))


def test_random_nonsingular_properties():
    w = random_nonsingular(3, condition_cap=1e4, seed=2)
    assert abs(np.linalg.det(w)) >= 0.05
    assert np.linalg.cond(w) <= 1e4
    assert np.array_equal(w, random_nonsingular(3, condition_cap=1e4, seed=2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_connected_nontree_has_a_cycle(seed):
    cfg = GenConfig(n_range=(3, 9), s_range=(1, 3), seed=seed)
    g = random_connected_nontree(cfg)
    assert validate(g) == []
    assert is_connected(g)
    assert not is_tree(g)
    assert g.n <= g.m <= g.n + 2


def test_random_connected_nontree_needs_three_vertices():
    with pytest.raises(BadConfigError):
        random_connected_nontree(GenConfig(n_range=(2, 5)))


def test_random_instances_vary_and_reproduce():
    cfg = GenConfig(n_range=(3, 6), s_range=(1, 2), seed=50)
    batch = random_instances(4, cfg)
    again = random_instances(4, cfg)
    assert len(batch) == 4
    for g1, g2 in zip(batch, again):
        assert g1.n == g2.n and g1.m == g2.m
        assert all(
            np.array_equal(e1.weight, e2.weight)
            for e1, e2 in zip(g1.edges, g2.edges)
        )
    assert all(is_tree(g) for g in batch)
    nontrees = random_instances(3, cfg, tree=False)
    assert all(not is_tree(g) for g in nontrees)


def test_spanning_tree_oracle_known_counts():
    assert spanning_tree_oracle(diamond4(), 1) == (4, 4)
    # a bridge of a tree is in its only spanning tree
    assert spanning_tree_oracle(path_graph(3), 0) == (1, 0)


def test_spanning_tree_oracle_caps_size():
    with pytest.raises(TooLargeError):
        spanning_tree_oracle(path_graph(10), 0)
    with pytest.raises(ValueError):
        spanning_tree_oracle(diamond4(), 9)


def test_distance_oracle_agrees_bitwise():
    for seed in (0, 1, 2, 3):
        g = random_tree(GenConfig(n_range=(2, 9), s_range=(1, 3),
                                  kind=WeightKind.NONSINGULAR, seed=seed))
        assert np.array_equal(distance_matrix(g).data,
                              distance_oracle(g).data)
