import math

import numpy as np
import pytest
from conftest import complete_graph, path_graph, random_small_graph
from hypothesis import given, settings
from hypothesis import strategies as st

from lexgreedy.graph import build, generate_gnm
from lexgreedy.priority import (
    PrefixSchedule,
    Priority,
    dependence_length,
    identity_priority,
    longest_path,
    prefix,
    prefix_sparsity,
    random_priority,
)


def test_random_priority_empty():
    p = random_priority(0, 5)
    assert len(p) == 0 and p.order.size == 0


def test_random_priority_single_is_identity():
    p = random_priority(1, 5)
    assert p.rank.tolist() == [0] and p.order.tolist() == [0]


def test_random_priority_is_bijection():
    p = random_priority(10**4, 2024)
    assert np.array_equal(p.order[p.rank], np.arange(10**4))
    assert np.array_equal(p.rank[p.order], np.arange(10**4))


def test_random_priority_reproducible():
    assert np.array_equal(random_priority(1000, 1).order, random_priority(1000, 1).order)
    assert not np.array_equal(random_priority(1000, 1).order, random_priority(1000, 2).order)
    # the full unsigned 64-bit seed range is accepted
    assert len(random_priority(10, 2**64 - 1)) == 10


def test_random_priority_is_uniform_on_three_items():
    counts = {}
    for seed in range(6000):
        key = tuple(random_priority(3, seed).order.tolist())
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 6
    assert all(abs(c - 1000) < 150 for c in counts.values())


def test_priority_constructors():
    p = Priority.from_order([2, 0, 1])
    assert p.rank.tolist() == [1, 2, 0]
    assert Priority.from_rank([1, 2, 0]).order.tolist() == [2, 0, 1]
    with pytest.raises(ValueError):
        Priority.from_order([0, 0, 1])


def test_prefix_whole_set():
    p = random_priority(50, 3)
    remaining = np.arange(0, 50, 2)
    got = prefix(p, remaining, PrefixSchedule.fixed_fraction(1.0))
    assert sorted(got.tolist()) == remaining.tolist()


def test_prefix_count_one_is_earliest():
    p = random_priority(50, 3)
    remaining = np.arange(10, 40)
    got = prefix(p, remaining, PrefixSchedule.fixed_count(1))
    assert got.tolist() == [remaining[np.argmin(p.rank[remaining])]]


def test_prefix_accepts_mask():
    p = identity_priority(6)
    mask = np.array([False, True, False, True, True, False])
    assert prefix(p, mask, PrefixSchedule.fixed_count(2)).tolist() == [1, 3]


def test_prefix_degree_aware_formula():
    n0 = 1000
    p = random_priority(n0, 8)
    remaining = np.arange(n0)[::3]
    got = prefix(p, remaining, PrefixSchedule.degree_aware(c=1.0, max_degree=n0))
    assert len(got) == math.ceil(len(remaining) * math.log(n0) / n0)
    # doubling per round
    later = prefix(p, remaining, PrefixSchedule.degree_aware(c=1.0, max_degree=n0), round_index=3)
    assert len(later) == math.ceil(len(remaining) * 8 * math.log(n0) / n0)


def test_prefix_rounds_up_and_never_empty():
    p = identity_priority(100)
    assert len(prefix(p, np.arange(100), PrefixSchedule.fixed_fraction(1e-6))) == 1
    assert len(prefix(p, np.arange(7), PrefixSchedule.fixed_fraction(0.5))) == 4
    assert len(prefix(p, np.arange(7), PrefixSchedule.fixed_count(10))) == 7
    with pytest.raises(ValueError):
        prefix(p, np.arange(0), PrefixSchedule.fixed_count(1))


def test_schedule_validation_and_parse():
    for bad in (lambda: PrefixSchedule.fixed_fraction(0.0), lambda: PrefixSchedule.fixed_fraction(1.5),
                lambda: PrefixSchedule.fixed_count(0), lambda: PrefixSchedule.degree_aware(c=0),
                lambda: PrefixSchedule.degree_aware(max_degree=0), lambda: PrefixSchedule.parse("half"),
                lambda: PrefixSchedule.parse("frac:x")):
        with pytest.raises(ValueError):
            bad()
    assert PrefixSchedule.parse("frac:0.25") == PrefixSchedule.fixed_fraction(0.25)
    assert PrefixSchedule.parse("count:3") == PrefixSchedule.fixed_count(3)
    assert PrefixSchedule.parse("degree:1.5") == PrefixSchedule.degree_aware(1.5)
    for text in ("frac:0.25", "count:3", "degree:1.5"):
        assert PrefixSchedule.parse(text).describe() == text


def test_dependence_length_complete_graph():
    g = complete_graph(12)
    for seed in range(5):
        assert dependence_length(g, random_priority(12, seed)).dependence_length == 1


def test_dependence_length_path_identity():
    stats = dependence_length(path_graph(4), identity_priority(4))
    assert stats.dependence_length == 2
    assert stats.longest_path == 3


def test_dependence_length_empty_graph():
    stats = dependence_length(build([], 9), random_priority(9, 0))
    assert (stats.dependence_length, stats.longest_path) == (1, 0)
    assert dependence_length(build([], 0), random_priority(0, 0)).dependence_length == 0


def test_longest_path_limit():
    g = path_graph(6)
    p = identity_priority(6)
    assert longest_path(g, p) == 5
    assert longest_path(g, p, limit=3) == 2
    assert longest_path(g, p, limit=1) == 0


def test_prefix_sparsity_examples():
    g = generate_gnm(100, 600, seed=1)
    p = random_priority(100, 1)
    assert prefix_sparsity(g, p, 0.01) == (0, 0)
    assert prefix_sparsity(g, p, 1.0) == (600, int((g.degrees > 0).sum()))
    assert prefix_sparsity(complete_graph(4), random_priority(4, 7), 0.5) == (1, 2)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([0.05, 0.2, 0.5, 1.0]))
def test_dag_properties(seed, delta):
    rng = np.random.default_rng(seed)
    g = random_small_graph(rng, 40)
    p = random_priority(g.n, seed)
    stats = dependence_length(g, p)
    assert stats.dependence_length <= stats.longest_path + 1
    assert min(stats.dependence_length, stats.longest_path, stats.internal_edges, stats.touched_vertices) >= 0
    if g.n:
        internal, touched = prefix_sparsity(g, p, delta)
        assert touched <= 2 * internal


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_dependence_length_relabel_invariant(seed):
    rng = np.random.default_rng(seed)
    g = random_small_graph(rng, 40)
    p = random_priority(g.n, seed)
    relabel = rng.permutation(g.n)
    h = build(relabel[g.edges], g.n)
    # vertex relabel[v] keeps v's rank
    q = Priority.from_order(relabel[p.order])
    a, b = dependence_length(g, p), dependence_length(h, q)
    assert a == b
