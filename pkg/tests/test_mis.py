import itertools
import json
import os
import subprocess
import sys

import numpy as np
import pytest
from conftest import complete_graph, path_graph, random_small_graph, star_graph
from hypothesis import given, settings
from hypothesis import strategies as st

from lexgreedy import mis
from lexgreedy.graph import build, generate_gnm, generate_rmat
from lexgreedy.priority import PrefixSchedule, Priority, dependence_length, identity_priority, random_priority
from lexgreedy.verify import lex_first_oracle

SCHEDULES = [PrefixSchedule.fixed_fraction(f) for f in (0.01, 0.1, 0.5, 1.0)] + [
    PrefixSchedule.fixed_count(1), PrefixSchedule.fixed_count(3), PrefixSchedule.degree_aware(2.0)]


def test_sequential_empty():
    res = mis.sequential_greedy(build([], 0), random_priority(0, 1))
    assert res.in_mis.size == 0


def test_sequential_triangle(triangle):
    assert mis.sequential_greedy(triangle, identity_priority(3)).members.tolist() == [0]


def test_sequential_path(path4):
    res = mis.sequential_greedy(path4, identity_priority(4))
    assert res.members.tolist() == [0, 2]
    assert res.stats.rounds == 4


def test_rootset_complete_graph():
    g = complete_graph(20)
    p = random_priority(20, 11)
    res = mis.parallel_rootset(g, p)
    assert res.members.tolist() == [int(p.order[0])]
    assert res.stats.rounds == 1


def test_rootset_path(path4):
    res = mis.parallel_rootset(path4, identity_priority(4))
    assert res.members.tolist() == [0, 2]
    assert res.stats.rounds == 2


def test_rootset_all_orderings_of_fixed_graph():
    g = build([(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (5, 6), (6, 7), (1, 7), (0, 5)], 8)
    for order in itertools.permutations(range(8)):
        p = Priority.from_order(order)
        expected = mis.sequential_greedy(g, p).in_mis
        res = mis.parallel_rootset(g, p)
        assert np.array_equal(res.in_mis, expected), order
        assert res.stats.rounds == dependence_length(g, p).dependence_length


def _state_with_parents(dead):
    """Vertex 6 with parents 0..5 (identity priority); the first ``dead`` are settled."""
    g = build([(6, i) for i in range(6)], 7)
    state = mis.MisState.initial(g, identity_priority(7))
    state.status[:dead] = mis.MisState.REMOVED
    return state


def test_mis_check_no_parents():
    state = _state_with_parents(0)
    start = state.parent_cursor[0]
    assert mis.mis_check(state, 0)
    assert state.parent_cursor[0] == start


def test_mis_check_first_parent_undecided():
    state = _state_with_parents(0)
    assert not mis.mis_check(state, 6)
    assert state.parent_cursor[6] == state.offsets[6]


def test_mis_check_skips_dead_parents():
    state = _state_with_parents(5)
    assert not mis.mis_check(state, 6)
    assert state.parent_cursor[6] - state.offsets[6] == 5
    assert state.waiting[6] == 5
    state.status[5] = mis.MisState.IN_MIS
    assert mis.mis_check(state, 6)
    assert state.parent_cursor[6] - state.offsets[6] == 6


def test_mis_check_rejects_decided_vertex():
    state = _state_with_parents(1)
    with pytest.raises(ValueError):
        mis.mis_check(state, 0)


def test_state_partition():
    g = generate_gnm(50, 200, seed=3)
    p = random_priority(50, 3)
    state = mis.MisState.initial(g, p)
    for v in range(g.n):
        parents, children = state.parents_of(v), state.children_of(v)
        assert np.all(p.rank[parents] < p.rank[v]) and np.all(p.rank[children] > p.rank[v])
        assert np.all(np.diff(p.rank[parents]) > 0)
        assert sorted(np.concatenate([parents, children]).tolist()) == g.neighbors_of(v).tolist()


def test_prefix_count_one_is_sequential():
    g = generate_gnm(300, 1200, seed=5)
    p = random_priority(300, 5)
    res = mis.prefix_greedy(g, p, PrefixSchedule.fixed_count(1))
    assert np.array_equal(res.in_mis, mis.sequential_greedy(g, p).in_mis)
    assert res.stats.rounds <= g.n
    assert np.all(res.stats.round_sizes == 1)


def test_prefix_whole_graph_is_one_round():
    g = generate_gnm(500, 2500, seed=6)
    p = random_priority(500, 6)
    res = mis.prefix_greedy(g, p, PrefixSchedule.fixed_fraction(1.0))
    assert res.stats.rounds == 1
    assert res.stats.steps_total == dependence_length(g, p).dependence_length
    assert res.stats.round_sizes.tolist() == [500]
    assert res.stats.round_internal_edges.tolist() == [g.m]


def test_prefix_round_detail():
    g = generate_gnm(1000, 5000, seed=7)
    p = random_priority(1000, 7)
    res = mis.prefix_greedy(g, p, PrefixSchedule.fixed_fraction(0.1), track_degrees=True)
    s = res.stats
    assert s.round_sizes.sum() == g.n
    assert s.round_steps.sum() == s.steps_total
    assert len(s.round_max_degree) == s.rounds and s.round_max_degree[-1] == 0
    assert s.schedule == "frac:0.1"


def test_prefix_sweep_trend():
    g = generate_gnm(2**14, 5 * 2**14, seed=1)
    p = random_priority(g.n, 1)
    runs = [mis.prefix_greedy(g, p, PrefixSchedule.fixed_fraction(d)).stats for d in (1e-4, 1e-3, 1e-2, 1e-1, 1)]
    touches = [s.edge_touches for s in runs]
    rounds = [s.rounds for s in runs]
    assert touches == sorted(touches)
    assert rounds == sorted(rounds, reverse=True)


def test_luby_empty():
    assert mis.luby(build([], 0), seed=3).in_mis.size == 0
    assert mis.luby(build([], 5), seed=3).members.tolist() == [0, 1, 2, 3, 4]


def test_luby_complete_graph():
    for seed in range(10):
        res = mis.luby(complete_graph(16), seed)
        assert res.in_mis.sum() == 1 and res.stats.rounds == 1


def test_luby_star():
    seen = set()
    for seed in range(200):
        seen.add(tuple(mis.luby(star_graph(9), seed).members.tolist()))
    assert seen == {(0,), tuple(range(1, 10))}


def test_luby_reproducible():
    g = generate_rmat(10, 4000, seed=2)
    a, b = mis.luby(g, 99), mis.luby(g, 99, workers=4)
    assert np.array_equal(a.in_mis, b.in_mis) and a.stats.rounds == b.stats.rounds


def test_bad_arguments():
    g = generate_gnm(10, 20, seed=0)
    with pytest.raises(ValueError):
        mis.parallel_rootset(g, random_priority(9, 0))
    with pytest.raises(ValueError):
        mis.parallel_rootset(g, random_priority(10, 0), workers=0)
    with pytest.raises(ValueError):
        mis.prefix_greedy(g, random_priority(10, 0), PrefixSchedule.fixed_count(1), grain=0)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(SCHEDULES), st.sampled_from([1, 7, 256]),
       st.one_of(st.none(), st.integers(0, 2**32)))
def test_schedule_independence(seed, schedule, grain, shuffle):
    rng = np.random.default_rng(seed)
    g = random_small_graph(rng)
    p = random_priority(g.n, seed)
    expected = lex_first_oracle(g, p)
    rootset = mis.parallel_rootset(g, p, 4, grain=grain, shuffle_seed=shuffle)
    pref = mis.prefix_greedy(g, p, schedule, 4, grain=grain, shuffle_seed=shuffle)
    assert np.array_equal(rootset.in_mis, expected)
    assert np.array_equal(pref.in_mis, expected)
    assert np.array_equal(mis.sequential_greedy(g, p).in_mis, expected)
    assert rootset.stats.rounds == dependence_length(g, p).dependence_length
    assert rootset.stats.edge_touches <= 4 * (g.n + g.m)
    assert rootset.stats.cursor_advance <= g.m and pref.stats.cursor_advance <= g.m


def test_stats_do_not_depend_on_shuffle():
    g = generate_rmat(12, 20000, seed=4)
    p = random_priority(g.n, 4)
    base = mis.parallel_rootset(g, p)
    for shuffle in range(3):
        other = mis.parallel_rootset(g, p, 2, grain=16, shuffle_seed=shuffle)
        assert np.array_equal(other.in_mis, base.in_mis)
        assert (other.stats.rounds, other.stats.edge_touches) == (base.stats.rounds, base.stats.edge_touches)


THREADED = """
import json, sys
import numpy as np
from lexgreedy import mis, matching
from lexgreedy.graph import generate_gnm, generate_rmat
from lexgreedy.priority import PrefixSchedule, random_priority
out = []
for seed, g in enumerate([generate_gnm(3000, 15000, 1), generate_rmat(12, 16000, seed=2)]):
    p, q = random_priority(g.n, seed), random_priority(g.m, seed)
    for grain in (1, 64):
        runs = [mis.parallel_rootset(g, p, 4, grain=grain, shuffle_seed=seed),
                mis.prefix_greedy(g, p, PrefixSchedule.fixed_fraction(0.05), 4, grain=grain, shuffle_seed=seed),
                matching.parallel_rootset_mm(g, q, 4, grain=grain, shuffle_seed=seed),
                matching.prefix_greedy_mm(g, q, PrefixSchedule.fixed_fraction(0.05), 4, grain=grain)]
        out.append([r.members.tolist() for r in runs[:2]] + [r.edges.tolist() for r in runs[2:]])
print(json.dumps(out))
"""


def test_four_threads_match_one(tmp_path):
    env = dict(os.environ, NUMBA_NUM_THREADS="4")
    proc = subprocess.run([sys.executable, "-c", THREADED], env=env, capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0, proc.stderr
    threaded = json.loads(proc.stdout)
    from lexgreedy import matching
    for seed, g in enumerate([generate_gnm(3000, 15000, 1), generate_rmat(12, 16000, seed=2)]):
        p, q = random_priority(g.n, seed), random_priority(g.m, seed)
        mis_set = mis.sequential_greedy(g, p).members.tolist()
        mm_set = matching.sequential_greedy_mm(g, q).edges.tolist()
        for row in threaded[2 * seed: 2 * seed + 2]:
            assert row == [mis_set, mis_set, mm_set, mm_set]
