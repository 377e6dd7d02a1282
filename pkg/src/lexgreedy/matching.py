"""Greedy maximal matching: sequential, root-set, and prefix-based.

All three return the lexicographically first matching for a fixed edge
priority.  Every vertex keeps its incident edges sorted by priority and a
cursor to the first edge not yet known to be dead, so an edge is ready
exactly when it sits under the cursor at both of its endpoints.

Deletion and checking alternate with a barrier in between; checks never run
while edges are being marked.  Duplicate discoveries are resolved with claim
slots, as in :mod:`lexgreedy.mis`: writers race to store a unique token and
only the surviving token's owner emits the item.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from ._parallel import (
    DEFAULT_GRAIN,
    IN_SET,
    REMOVED,
    UNDECIDED,
    advance,
    exclusive_scan,
    perturb,
    worker_threads,
)
from .graph import Graph
from .priority import PrefixSchedule, Priority, prefix_count
from .stats import RunStats

__all__ = [
    "MatchResult",
    "MatchState",
    "mm_check",
    "sort_incidence",
    "sequential_greedy_mm",
    "parallel_rootset_mm",
    "prefix_greedy_mm",
]


@dataclass
class MatchResult:
    matched: np.ndarray  # per edge
    mate: np.ndarray  # per vertex, -1 when unmatched
    stats: RunStats

    @property
    def edges(self) -> np.ndarray:
        return np.flatnonzero(self.matched)


@njit(cache=True)
def _bucket_incidence(offsets, eu, ev, order):
    fill = offsets[:-1].copy()
    inc = np.empty(offsets[-1], dtype=np.int64)
    for r in range(order.size):
        e = order[r]
        inc[fill[eu[e]]] = e
        fill[eu[e]] += 1
        inc[fill[ev[e]]] = e
        fill[ev[e]] += 1
    return inc


def sort_incidence(graph: Graph, edge_priority: Priority) -> tuple[np.ndarray, np.ndarray]:
    """Incident edge ids of every vertex, highest priority first.

    One counting pass over the edges in priority order.  Returns
    ``(offsets, incidence)`` where vertex ``v`` owns
    ``incidence[offsets[v]:offsets[v+1]]``.
    """
    if len(edge_priority) != graph.m:
        raise ValueError(f"edge priority covers {len(edge_priority)} items, graph has {graph.m} edges")
    order = np.ascontiguousarray(edge_priority.order, dtype=np.int64)
    inc = _bucket_incidence(graph.offsets, graph.edges[:, 0].copy(), graph.edges[:, 1].copy(), order)
    return graph.offsets, inc


@njit(cache=True)
def _mm_check(w, inc_off, inc, estatus, cursor, rank, eu, ev, hi):
    """The ready edge at ``w``, or -1.  Edges of rank >= ``hi`` are out of play."""
    pos, examined = advance(cursor[w], inc_off[w + 1], inc, estatus)
    cursor[w] = pos
    if pos == inc_off[w + 1]:
        return -1, examined
    e = inc[pos]
    if rank[e] >= hi:
        return -1, examined
    x = eu[e] + ev[e] - w
    pos2, ex2 = advance(cursor[x], inc_off[x + 1], inc, estatus)
    cursor[x] = pos2
    if pos2 < inc_off[x + 1] and inc[pos2] == e:
        return e, examined + ex2
    return -1, examined + ex2


@njit(parallel=True, cache=True)
def _check_vertices(cand, inc_off, inc, estatus, cursor, rank, eu, ev, claim_e, hi, stamp, counters):
    """mmCheck every candidate vertex; each ready edge is emitted once."""
    k = cand.size
    found = np.full(k, -1, dtype=np.int64)
    t = 0
    for i in prange(k):
        e, x = _mm_check(cand[i], inc_off, inc, estatus, cursor, rank, eu, ev, hi)
        found[i] = e
        t += x
        if e >= 0:
            claim_e[e] = stamp + i
    keep = np.zeros(k, dtype=np.bool_)
    for i in range(k):
        keep[i] = found[i] >= 0 and claim_e[found[i]] == stamp + i
    counters[0] += t
    counters[1] += k
    counters[2] += k
    return found[keep]


@njit(cache=True)
def _endpoint(ready, i, eu, ev):
    e = ready[i >> 1]
    return e, (eu[e] if i & 1 == 0 else ev[e])


@njit(cache=True)
def _remove_incident(e, w, inc_off, inc, estatus, cursor, rank, eu, ev, claim_v, hi, stamp):
    touched = 0
    for j in range(cursor[w], inc_off[w + 1]):
        f = inc[j]
        touched += 1
        if rank[f] >= hi:
            break
        if f != e and estatus[f] == UNDECIDED:
            estatus[f] = REMOVED
            claim_v[eu[f] + ev[f] - w] = stamp + j
    return touched


@njit(cache=True)
def _emit_far_ends(w, inc_off, inc, cursor, rank, eu, ev, claim_v, hi, stamp, slots, base):
    start = cursor[w]
    for j in range(start, inc_off[w + 1]):
        f = inc[j]
        if rank[f] >= hi:
            break
        x = eu[f] + ev[f] - w
        if claim_v[x] == stamp + j:
            slots[base + j - start] = x


@njit(parallel=True, cache=True)
def _mm_steps(inc_off, inc, estatus, cursor, rank, eu, ev, mate, claim_v, claim_e,
              ready, hi, shuffle, pstate, epoch, counters):
    """Match ready frontiers until none is left; returns the number of steps."""
    steps = 0
    scale = inc.size + 1
    while ready.size > 0:
        if shuffle:
            pstate[0] = perturb(ready, pstate[0])
        k = ready.size
        for i in prange(k):
            e = ready[i]
            estatus[e] = IN_SET
            mate[eu[e]] = ev[e]
            mate[ev[e]] = eu[e]

        # delete every other live edge at both endpoints; collect far ends
        caps = np.empty(2 * k, dtype=np.int64)
        for i in range(2 * k):
            e, w = _endpoint(ready, i, eu, ev)
            caps[i] = inc_off[w + 1] - cursor[w]
        base = exclusive_scan(caps)
        epoch[0] += 1
        stamp = epoch[0] * scale
        t = 0
        for i in prange(2 * k):
            e, w = _endpoint(ready, i, eu, ev)
            t += _remove_incident(e, w, inc_off, inc, estatus, cursor, rank, eu, ev, claim_v, hi, stamp)
        slots = np.full(base[2 * k], -1, dtype=np.int64)
        for i in prange(2 * k):
            e, w = _endpoint(ready, i, eu, ev)
            _emit_far_ends(w, inc_off, inc, cursor, rank, eu, ev, claim_v, hi, stamp, slots, base[i])
        cand = slots[slots >= 0]
        counters[0] += t
        counters[1] += 2 * k

        # barrier: all deletions of this step are visible to the checks
        epoch[0] += 1
        ready = _check_vertices(cand, inc_off, inc, estatus, cursor, rank, eu, ev, claim_e,
                                hi, epoch[0] * scale, counters)
        steps += 1
    return steps


@njit(parallel=True, cache=True)
def _prefix_mm_kernel(inc_off, inc, estatus, cursor, rank, order, eu, ev, mate,
                      mode, fraction, count, c, max_degree, ln_m0,
                      shuffle, pstate, counters, round_steps, round_sizes):
    m = rank.size
    n = inc_off.size - 1
    claim_v = np.full(n, -1, dtype=np.int64)
    claim_e = np.full(m, -1, dtype=np.int64)
    epoch = np.zeros(1, dtype=np.int64)
    scale = inc.size + 1
    lo = 0
    rnd = 0
    steps_total = 0
    while lo < m:
        k = prefix_count(mode, fraction, count, c, max_degree, ln_m0, m - lo, rnd)
        hi = lo + k
        block = order[lo:hi]
        # external edges: drop prefix edges touching an already matched vertex
        for i in prange(k):
            e = block[i]
            if mate[eu[e]] >= 0 or mate[ev[e]] >= 0:
                estatus[e] = REMOVED
        counters[0] += k
        counters[1] += k
        epoch[0] += 1
        stamp = epoch[0] * scale
        for i in range(2 * k):
            e, w = _endpoint(block, i, eu, ev)
            if estatus[e] == UNDECIDED:
                claim_v[w] = stamp + i
        ends = np.full(2 * k, -1, dtype=np.int64)
        for i in range(2 * k):
            e, w = _endpoint(block, i, eu, ev)
            if estatus[e] == UNDECIDED and claim_v[w] == stamp + i:
                ends[i] = w
        cand = ends[ends >= 0]
        epoch[0] += 1
        ready = _check_vertices(cand, inc_off, inc, estatus, cursor, rank, eu, ev, claim_e,
                                hi, epoch[0] * scale, counters)
        s = _mm_steps(inc_off, inc, estatus, cursor, rank, eu, ev, mate, claim_v, claim_e,
                      ready, hi, shuffle, pstate, epoch, counters)
        round_steps[rnd] = s
        round_sizes[rnd] = k
        steps_total += s
        lo = hi
        rnd += 1
    return rnd, steps_total


@dataclass
class MatchState:
    """Edge status plus the sorted incidence lists and cursors used by :func:`mm_check`."""

    edge_status: np.ndarray
    incidence_offsets: np.ndarray
    incidence: np.ndarray
    cursor: np.ndarray
    rank: np.ndarray
    eu: np.ndarray
    ev: np.ndarray
    mate: np.ndarray
    ready_frontier: np.ndarray

    UNDECIDED = int(UNDECIDED)
    IN_MATCHING = int(IN_SET)
    REMOVED = int(REMOVED)

    @classmethod
    def initial(cls, graph: Graph, edge_priority: Priority) -> MatchState:
        off, inc = sort_incidence(graph, edge_priority)
        return cls(
            edge_status=np.zeros(graph.m, dtype=np.int8),
            incidence_offsets=off,
            incidence=inc,
            cursor=off[:-1].copy(),
            rank=np.ascontiguousarray(edge_priority.rank, dtype=np.int64),
            eu=graph.edges[:, 0].astype(np.int64),
            ev=graph.edges[:, 1].astype(np.int64),
            mate=np.full(graph.n, -1, dtype=np.int64),
            ready_frontier=np.empty(0, dtype=np.int64),
        )

    def cursor_advance(self) -> int:
        return int((self.cursor - self.incidence_offsets[:-1]).sum())


def mm_check(state: MatchState, v: int, limit: int | None = None) -> int | None:
    """The ready edge at ``v`` (top live edge at both of its ends), if any.

    ``limit`` excludes edges of rank ``>= limit``, as within a prefix.
    """
    hi = len(state.rank) if limit is None else limit
    e, _ = _mm_check(v, state.incidence_offsets, state.incidence, state.edge_status,
                     state.cursor, state.rank, state.eu, state.ev, hi)
    return None if e < 0 else int(e)


def _check_priority(graph: Graph, edge_priority: Priority):
    if len(edge_priority) != graph.m:
        raise ValueError(f"edge priority covers {len(edge_priority)} items, graph has {graph.m} edges")


@njit(cache=True)
def _sequential_mm(eu, ev, order, matched, mate):
    for r in range(order.size):
        e = order[r]
        u = eu[e]
        v = ev[e]
        if mate[u] < 0 and mate[v] < 0:
            matched[e] = True
            mate[u] = v
            mate[v] = u


def sequential_greedy_mm(graph: Graph, edge_priority: Priority) -> MatchResult:
    """Visit edges in priority order, keeping each one whose endpoints are both free."""
    _check_priority(graph, edge_priority)
    start = time.perf_counter_ns()
    matched = np.zeros(graph.m, dtype=np.bool_)
    mate = np.full(graph.n, -1, dtype=np.int64)
    _sequential_mm(graph.edges[:, 0].astype(np.int64), graph.edges[:, 1].astype(np.int64),
                   np.ascontiguousarray(edge_priority.order, dtype=np.int64), matched, mate)
    stats = RunStats("mm-seq", graph.n, graph.m, rounds=graph.m, steps_total=graph.m,
                     edge_touches=graph.m, vertex_touches=2 * graph.m)
    stats.wall_time_ns = time.perf_counter_ns() - start
    return MatchResult(matched, mate, stats)


def _shuffle_args(shuffle_seed):
    state = np.array([0 if shuffle_seed is None else shuffle_seed], dtype=np.uint64)
    return shuffle_seed is not None, state


def _result(state: MatchState, stats: RunStats) -> MatchResult:
    stats.cursor_advance = state.cursor_advance()
    return MatchResult(state.edge_status == IN_SET, state.mate, stats)


def parallel_rootset_mm(graph: Graph, edge_priority: Priority, workers: int = 1, *,
                        grain: int = DEFAULT_GRAIN, shuffle_seed: int | None = None) -> MatchResult:
    """Work-efficient fully parallel greedy matching.

    Each step matches the ready edges, deletes their neighboring edges, and
    mmChecks the far endpoints of the deleted edges to find the next ready
    set.  ``workers``, ``grain`` and ``shuffle_seed`` behave as in
    :func:`lexgreedy.mis.parallel_rootset`.
    """
    _check_priority(graph, edge_priority)
    shuffle, pstate = _shuffle_args(shuffle_seed)
    counters = np.zeros(3, dtype=np.int64)
    start = time.perf_counter_ns()
    with worker_threads(workers, grain):
        st = MatchState.initial(graph, edge_priority)
        claim_v = np.full(graph.n, -1, dtype=np.int64)
        claim_e = np.full(graph.m, -1, dtype=np.int64)
        epoch = np.ones(1, dtype=np.int64)
        scale = st.incidence.size + 1
        args = (st.incidence_offsets, st.incidence, st.edge_status, st.cursor, st.rank, st.eu, st.ev)
        ready = _check_vertices(np.arange(graph.n, dtype=np.int64), *args, claim_e,
                                graph.m, scale, counters)
        steps = _mm_steps(*args, st.mate, claim_v, claim_e, ready, graph.m,
                          shuffle, pstate, epoch, counters)
    stats = RunStats("mm-rootset", graph.n, graph.m, rounds=int(steps), steps_total=int(steps),
                     edge_touches=int(counters[0]), vertex_touches=int(counters[1]),
                     workers=workers, wall_time_ns=time.perf_counter_ns() - start)
    return _result(st, stats)


def prefix_greedy_mm(graph: Graph, edge_priority: Priority, schedule: PrefixSchedule, workers: int = 1, *,
                     grain: int = DEFAULT_GRAIN, shuffle_seed: int | None = None) -> MatchResult:
    """Greedy matching over successive prefixes of the edge order.

    A degree-aware schedule uses the largest number of edges adjacent to a
    single edge as its a-priori maximum degree.
    """
    _check_priority(graph, edge_priority)
    m = graph.m
    if m:
        deg = graph.degrees
        edge_degree = int((deg[graph.edges[:, 0]] + deg[graph.edges[:, 1]]).max()) - 2
    else:
        edge_degree = 0
    schedule = schedule.with_max_degree(max(edge_degree, 1))
    params = schedule.kernel_params(m)
    shuffle, pstate = _shuffle_args(shuffle_seed)
    counters = np.zeros(3, dtype=np.int64)
    round_steps = np.zeros(m, dtype=np.int64)
    round_sizes = np.zeros(m, dtype=np.int64)
    start = time.perf_counter_ns()
    with worker_threads(workers, grain):
        st = MatchState.initial(graph, edge_priority)
        rounds, steps = _prefix_mm_kernel(
            st.incidence_offsets, st.incidence, st.edge_status, st.cursor, st.rank,
            np.ascontiguousarray(edge_priority.order, dtype=np.int64), st.eu, st.ev, st.mate,
            *params, shuffle, pstate, counters, round_steps, round_sizes)
    stats = RunStats("mm-prefix", graph.n, m, rounds=int(rounds), steps_total=int(steps),
                     edge_touches=int(counters[0]), vertex_touches=int(counters[1]),
                     schedule=schedule.describe(), workers=workers,
                     wall_time_ns=time.perf_counter_ns() - start,
                     round_steps=round_steps[:rounds], round_sizes=round_sizes[:rounds])
    return _result(st, stats)
