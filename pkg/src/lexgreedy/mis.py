"""Greedy maximal independent set: sequential, root-set, prefix-based, and Luby.

For a fixed priority the first three return the same set, the
lexicographically first MIS, whatever the worker count or processing order.
Luby's algorithm draws fresh priorities every round and is only checked for
validity.

The parallel kernels mark vertex status with monotone transitions
(undecided -> in set, undecided -> removed).  When several roots race to
remove the same vertex, each writes a unique token into a claim slot and
only the root whose token survives emits it.  A vertex whose check fails
waits on one undecided parent and is re-checked only when that parent is
removed, so re-checks need no claims.
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
    "MisResult",
    "MisState",
    "mis_check",
    "sequential_greedy",
    "parallel_rootset",
    "prefix_greedy",
    "luby",
]


@dataclass
class MisResult:
    in_mis: np.ndarray
    stats: RunStats

    @property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.in_mis)


# -- preprocessing ----------------------------------------------------------


@njit(cache=True)
def _sort_segment(items, lo, hi, rank):
    if hi - lo <= 24:
        for a in range(lo + 1, hi):
            x = items[a]
            rx = rank[x]
            b = a - 1
            while b >= lo and rank[items[b]] > rx:
                items[b + 1] = items[b]
                b -= 1
            items[b + 1] = x
    else:
        seg = items[lo:hi].copy()
        idx = np.argsort(rank[seg])
        for t in range(hi - lo):
            items[lo + t] = seg[idx[t]]


@njit(parallel=True, cache=True)
def _split(offsets, neighbors, rank, sort):
    """Partition each adjacency segment: parents (higher priority) first, then children.

    Returns the partitioned copy of ``neighbors`` and, per vertex, the index
    where its children start.
    """
    n = offsets.size - 1
    adj = np.empty_like(neighbors)
    split = np.empty(n, dtype=np.int64)
    for v in prange(n):
        rv = rank[v]
        p = offsets[v]
        q = offsets[v + 1] - 1
        for j in range(offsets[v], offsets[v + 1]):
            w = neighbors[j]
            # branch-free: the comparison is a coin flip under a random order
            up = np.int64(rank[w] < rv)
            adj[q + up * (p - q)] = w
            p += up
            q -= 1 - up
        split[v] = p
    if sort:
        for v in prange(n):
            _sort_segment(adj, offsets[v], split[v], rank)
            _sort_segment(adj, split[v], offsets[v + 1], rank)
    return adj, split


# -- per-vertex operations ----------------------------------------------------


@njit(cache=True, inline="always")
def _mis_check(v, split, adj, status, cursor, waiting):
    """True iff no parent of ``v`` is undecided; moves the cursor past dead ones.

    On failure ``waiting[v]`` becomes the undecided parent under the cursor.
    """
    pos, examined = advance(cursor[v], split[v], adj, status)
    cursor[v] = pos
    if pos < split[v]:
        waiting[v] = adj[pos]
        return False, examined
    return True, examined


@njit(cache=True, inline="always")
def _external_scan(v, split, adj, rank, status, cursor, lo):
    """Walk the parents of ``v`` settled in earlier rounds.

    Removes ``v`` on meeting one in the set; stops at the first parent inside
    the current prefix.  Returns (entries read, internal parent count).
    """
    end = split[v]
    j = cursor[v]
    touched = 0
    while j < end:
        p = adj[j]
        touched += 1
        if rank[p] >= lo:
            break
        if status[p] == IN_SET:
            status[v] = REMOVED
            break
        j += 1
    cursor[v] = j
    # instrumentation: parents are rank-sorted, bisect for the first internal one
    a, b = j, end
    while a < b:
        mid = (a + b) // 2
        if rank[adj[mid]] >= lo:
            b = mid
        else:
            a = mid + 1
    return touched, end - a


# -- root-set steps -----------------------------------------------------------


@njit(parallel=True, cache=True)
def _run_steps(offsets, split, adj, rank, status, cursor, waiting, claim,
               roots, hi, shuffle, pstate, counters):
    """Peel root frontiers until none is left; returns the number of steps.

    Each step: roots join the set, their undecided children are removed, and
    the children left waiting on a removed vertex are re-checked to form the
    next frontier.  A failed check leaves a vertex waiting on one parent that
    was still undecided, so every re-check has a single emitter.

    With ``hi`` set only vertices of rank below it take part, and children
    must be rank-sorted; ``hi=None`` compiles without the test.  ``roots``
    and the frontiers are int32; ``claim`` is int32, all -1 between steps.
    """
    steps = 0
    while roots.size > 0:
        if shuffle:
            pstate[0] = perturb(roots, pstate[0])
        k = roots.size
        for i in prange(k):
            status[roots[i]] = IN_SET

        # remove children; the last root to claim a child emits it
        caps = np.empty(k, dtype=np.int64)
        for i in range(k):
            caps[i] = offsets[roots[i] + 1] - split[roots[i]]
        base = exclusive_scan(caps)
        t = 0
        for i in prange(k):
            r = roots[i]
            for j in range(split[r], offsets[r + 1]):
                c = adj[j]
                t += 1
                if hi is not None:
                    if rank[c] >= hi:
                        break
                if status[c] == UNDECIDED:
                    status[c] = REMOVED
                    claim[c] = i
        slots = np.full(base[k], -1, dtype=np.int32)
        for i in prange(k):
            r = roots[i]
            b = base[i] - split[r]
            for j in range(split[r], offsets[r + 1]):
                c = adj[j]
                if hi is not None:
                    if rank[c] >= hi:
                        break
                if claim[c] == i:
                    slots[b + j] = c
        removed = slots[slots >= 0]
        kr = removed.size
        for i in prange(kr):
            claim[removed[i]] = -1

        # re-check the children waiting on a removed vertex.  No status
        # changes in this phase, and a failed re-check moves the wait onto a
        # parent that is still undecided, so no child is checked twice.
        caps = np.empty(kr, dtype=np.int64)
        for i in range(kr):
            caps[i] = offsets[removed[i] + 1] - split[removed[i]]
        base = exclusive_scan(caps)
        slots = np.full(base[kr], -1, dtype=np.int32)
        kc = 0
        for i in prange(kr):
            x = removed[i]
            b = base[i] - split[x]
            for j in range(split[x], offsets[x + 1]):
                y = adj[j]
                t += 1
                if hi is not None:
                    if rank[y] >= hi:
                        break
                if waiting[y] == x and status[y] == UNDECIDED:
                    ok, e = _mis_check(y, split, adj, status, cursor, waiting)
                    t += e
                    kc += 1
                    if ok:
                        slots[b + j] = y
        counters[0] += t
        counters[1] += k + kr + kc
        counters[2] += kc
        roots = slots[slots >= 0]
        steps += 1
    return steps


@njit(parallel=True, cache=True)
def _rootset_kernel(offsets, split, adj, rank, status, cursor, waiting, shuffle, pstate, counters):
    n = rank.size
    ready = np.zeros(n, dtype=np.bool_)
    t = 0
    # the first check of every vertex: with nothing decided yet, a vertex is
    # ready iff it has no parents, and otherwise waits on its first one
    for v in prange(n):
        if split[v] == offsets[v]:
            ready[v] = True
        else:
            waiting[v] = adj[offsets[v]]
            t += 1
    counters[0] += t
    counters[1] += n
    counters[2] += n
    roots = np.nonzero(ready)[0].astype(np.int32)
    claim = np.full(n, -1, dtype=np.int32)
    return _run_steps(offsets, split, adj, rank, status, cursor, waiting, claim,
                      roots, None, shuffle, pstate, counters)


@njit(cache=True)
def _live_max_degree(offsets, neighbors, rank, status, hi):
    """Max degree among vertices past the prefix with no neighbor in the set."""
    n = rank.size
    alive = np.zeros(n, dtype=np.bool_)
    for v in range(n):
        if rank[v] >= hi and status[v] == UNDECIDED:
            ok = True
            for j in range(offsets[v], offsets[v + 1]):
                if status[neighbors[j]] == IN_SET:
                    ok = False
                    break
            alive[v] = ok
    best = 0
    for v in range(n):
        if alive[v]:
            d = 0
            for j in range(offsets[v], offsets[v + 1]):
                if alive[neighbors[j]]:
                    d += 1
            best = max(best, d)
    return best


@njit(parallel=True, cache=True)
def _prefix_kernel(offsets, split, adj, rank, order, status, cursor, waiting,
                   mode, fraction, count, c, max_degree, ln_n0,
                   shuffle, pstate, counters,
                   round_steps, round_sizes, round_internal,
                   track, round_maxdeg):
    n = rank.size
    claim = np.full(n, -1, dtype=np.int32)
    lo = 0
    rnd = 0
    steps_total = 0
    while lo < n:
        k = prefix_count(mode, fraction, count, c, max_degree, ln_n0, n - lo, rnd)
        hi = lo + k
        block = order[lo:hi]
        t = 0
        internal = 0
        # external edges: settled parents, each read once over the whole run
        for i in prange(k):
            e, ie = _external_scan(block[i], split, adj, rank, status, cursor, lo)
            t += e
            internal += ie
        ready = np.zeros(k, dtype=np.bool_)
        for i in prange(k):
            if status[block[i]] == UNDECIDED:
                ok, e = _mis_check(block[i], split, adj, status, cursor, waiting)
                ready[i] = ok
                t += e
        counters[0] += t
        counters[1] += k
        roots = block[ready]
        s = _run_steps(offsets, split, adj, rank, status, cursor, waiting, claim,
                       roots, hi, shuffle, pstate, counters)
        round_steps[rnd] = s
        round_sizes[rnd] = k
        round_internal[rnd] = internal
        if track:
            round_maxdeg[rnd] = _live_max_degree(offsets, adj, rank, status, hi)
        steps_total += s
        lo = hi
        rnd += 1
    return rnd, steps_total


# -- public state API -------------------------------------------------------


@dataclass
class MisState:
    """Vertex status plus the parent lists and cursors used by :func:`mis_check`.

    Each vertex's slice ``adjacency[offsets[v]:offsets[v+1]]`` holds its
    parents (neighbors of higher priority) up to ``split[v]`` and its children
    after.  ``parent_cursor[v]`` indexes the first parent not yet known to be
    settled and ``waiting[v]`` is that parent after a failed check.  Parents are sorted from highest priority down only when the
    state was built with ``sort=True``.
    """

    status: np.ndarray
    offsets: np.ndarray
    split: np.ndarray
    adjacency: np.ndarray
    parent_cursor: np.ndarray
    waiting: np.ndarray
    rank: np.ndarray
    root_frontier: np.ndarray

    UNDECIDED = int(UNDECIDED)
    IN_MIS = int(IN_SET)
    REMOVED = int(REMOVED)

    @classmethod
    def initial(cls, graph: Graph, priority: Priority, sort: bool = True) -> MisState:
        if len(priority) != graph.n:
            raise ValueError(f"priority covers {len(priority)} items, graph has {graph.n} vertices")
        rank = priority.rank.astype(np.int32)
        adj, split = _split(graph.offsets, graph.neighbors, rank, sort)
        return cls(
            status=np.zeros(graph.n, dtype=np.int8),
            offsets=graph.offsets,
            split=split,
            adjacency=adj,
            parent_cursor=graph.offsets[:-1].copy(),
            waiting=np.full(graph.n, -1, dtype=np.int32),
            rank=rank,
            root_frontier=np.empty(0, dtype=np.int64),
        )

    def parents_of(self, v: int) -> np.ndarray:
        return self.adjacency[self.offsets[v]:self.split[v]]

    def children_of(self, v: int) -> np.ndarray:
        return self.adjacency[self.split[v]:self.offsets[v + 1]]

    def cursor_advance(self) -> int:
        return int((self.parent_cursor - self.offsets[:-1]).sum())


def mis_check(state: MisState, v: int) -> bool:
    """Whether every parent of ``v`` is settled; advances ``v``'s cursor."""
    if state.status[v] != UNDECIDED:
        raise ValueError(f"vertex {v} is already decided")
    ok, _ = _mis_check(v, state.split, state.adjacency, state.status, state.parent_cursor, state.waiting)
    return bool(ok)


# -- algorithms ---------------------------------------------------------------


@njit(cache=True)
def _sequential(offsets, neighbors, order, in_set):
    touched = 0
    for r in range(order.size):
        v = order[r]
        free = True
        for j in range(offsets[v], offsets[v + 1]):
            touched += 1
            if in_set[neighbors[j]]:
                free = False
                break
        in_set[v] = free
    return touched


def _check_priority(graph: Graph, priority: Priority):
    if len(priority) != graph.n:
        raise ValueError(f"priority covers {len(priority)} items, graph has {graph.n} vertices")


def sequential_greedy(graph: Graph, priority: Priority) -> MisResult:
    """Visit vertices in priority order, keeping each one with no kept neighbor."""
    _check_priority(graph, priority)
    start = time.perf_counter_ns()
    in_mis = np.zeros(graph.n, dtype=np.bool_)
    touched = _sequential(graph.offsets, graph.neighbors, priority.order, in_mis)
    stats = RunStats("mis-seq", graph.n, graph.m, rounds=graph.n, steps_total=graph.n,
                     edge_touches=int(touched), vertex_touches=graph.n)
    stats.wall_time_ns = time.perf_counter_ns() - start
    return MisResult(in_mis, stats)


def _shuffle_args(shuffle_seed):
    state = np.array([0 if shuffle_seed is None else shuffle_seed], dtype=np.uint64)
    return shuffle_seed is not None, state


def parallel_rootset(graph: Graph, priority: Priority, workers: int = 1, *,
                     grain: int = DEFAULT_GRAIN, shuffle_seed: int | None = None) -> MisResult:
    """Work-efficient fully parallel greedy MIS.

    Keeps the current roots of the priority DAG explicitly.  Each step adds
    them to the set, removes their neighbors, and re-checks only the
    children of removed vertices.  ``stats.rounds`` is the dependence length.

    Parameters
    ----------
    workers : int
        Threads for the parallel loops (capped at numba's thread pool size).
    grain : int
        Chunk size of the parallel loops; a loop shorter than this runs on
        a single thread.
    shuffle_seed : int, optional
        Shuffle every frontier before processing it.  This changes which
        claimant wins each race and the order of all work lists, but never
        the result.
    """
    _check_priority(graph, priority)
    shuffle, pstate = _shuffle_args(shuffle_seed)
    counters = np.zeros(3, dtype=np.int64)
    start = time.perf_counter_ns()
    with worker_threads(workers, grain):
        state = MisState.initial(graph, priority, sort=False)
        steps = _rootset_kernel(state.offsets, state.split, state.adjacency, state.rank, state.status,
                                state.parent_cursor, state.waiting, shuffle, pstate, counters)
    elapsed = time.perf_counter_ns() - start
    stats = RunStats("mis-rootset", graph.n, graph.m, rounds=int(steps), steps_total=int(steps),
                     edge_touches=int(counters[0]), vertex_touches=int(counters[1]),
                     cursor_advance=state.cursor_advance(), workers=workers, wall_time_ns=elapsed)
    return MisResult(state.status == IN_SET, stats)


def prefix_greedy(graph: Graph, priority: Priority, schedule: PrefixSchedule, workers: int = 1, *,
                  grain: int = DEFAULT_GRAIN, shuffle_seed: int | None = None,
                  track_degrees: bool = False) -> MisResult:
    """Greedy MIS over successive priority prefixes.

    Each round takes the next prefix of unprocessed vertices, drops those
    with a settled neighbor already in the set, and runs the root-set steps
    on the rest restricted to the prefix.  Vertices past the prefix are only
    looked at when their own prefix comes up.

    With ``track_degrees`` the maximum degree of the still-live graph after
    every round is recorded in ``stats.round_max_degree`` (an extra full scan
    per round; for experiments only).
    """
    _check_priority(graph, priority)
    n = graph.n
    schedule = schedule.with_max_degree(graph.max_degree)
    params = schedule.kernel_params(n)
    shuffle, pstate = _shuffle_args(shuffle_seed)
    counters = np.zeros(3, dtype=np.int64)
    round_steps = np.zeros(n, dtype=np.int64)
    round_sizes = np.zeros(n, dtype=np.int64)
    round_internal = np.zeros(n, dtype=np.int64)
    round_maxdeg = np.zeros(n if track_degrees else 0, dtype=np.int64)
    start = time.perf_counter_ns()
    with worker_threads(workers, grain):
        state = MisState.initial(graph, priority, sort=True)
        rounds, steps = _prefix_kernel(
            state.offsets, state.split, state.adjacency,
            state.rank, priority.order.astype(np.int32),
            state.status, state.parent_cursor, state.waiting, *params,
            shuffle, pstate, counters, round_steps, round_sizes, round_internal,
            track_degrees, round_maxdeg)
    elapsed = time.perf_counter_ns() - start
    stats = RunStats("mis-prefix", n, graph.m, rounds=int(rounds), steps_total=int(steps),
                     edge_touches=int(counters[0]), vertex_touches=int(counters[1]),
                     cursor_advance=state.cursor_advance(), schedule=schedule.describe(),
                     workers=workers, wall_time_ns=elapsed,
                     round_steps=round_steps[:rounds], round_sizes=round_sizes[:rounds],
                     round_internal_edges=round_internal[:rounds],
                     round_max_degree=round_maxdeg[:rounds] if track_degrees else None)
    return MisResult(state.status == IN_SET, stats)


@njit(cache=True)
def _local_min(v, offsets, neighbors, status, value):
    touched = 0
    for j in range(offsets[v], offsets[v + 1]):
        w = neighbors[j]
        touched += 1
        if status[w] == UNDECIDED and (value[w] < value[v] or (value[w] == value[v] and w < v)):
            return False, touched
    return True, touched


@njit(cache=True)
def _remove_neighbors(v, offsets, neighbors, status):
    for j in range(offsets[v], offsets[v + 1]):
        w = neighbors[j]
        if status[w] == UNDECIDED:
            status[w] = REMOVED
    return offsets[v + 1] - offsets[v]


@njit(parallel=True, cache=True)
def _luby_round(live, offsets, neighbors, status, value, counters):
    k = live.size
    win = np.zeros(k, dtype=np.bool_)
    t = 0
    for i in prange(k):
        ok, e = _local_min(live[i], offsets, neighbors, status, value)
        win[i] = ok
        t += e
    winners = live[win]
    kw = winners.size
    for i in prange(kw):
        status[winners[i]] = IN_SET
    for i in prange(kw):
        t += _remove_neighbors(winners[i], offsets, neighbors, status)
    counters[0] += t
    counters[1] += k
    still = np.zeros(k, dtype=np.bool_)
    for i in range(k):
        still[i] = status[live[i]] == UNDECIDED
    return live[still]


def luby(graph: Graph, seed: int, workers: int = 1, *, grain: int = DEFAULT_GRAIN) -> MisResult:
    """Luby's algorithm: fresh random priorities every round.

    A vertex joins when its 64-bit value is below those of all undecided
    neighbors (ties go to the smaller id); winners and their neighbors leave.
    The result is a valid MIS but not the lexicographically first one.
    """
    n = graph.n
    status = np.zeros(n, dtype=np.int8)
    value = np.zeros(n, dtype=np.uint64)
    counters = np.zeros(2, dtype=np.int64)
    bits = np.random.PCG64(seed)
    live = np.arange(n, dtype=np.int64)
    rounds = 0
    start = time.perf_counter_ns()
    with worker_threads(workers, grain):
        while live.size:
            value[live] = bits.random_raw(live.size)
            live = _luby_round(live, graph.offsets, graph.neighbors, status, value, counters)
            rounds += 1
    elapsed = time.perf_counter_ns() - start
    stats = RunStats("mis-luby", n, graph.m, rounds=rounds, steps_total=rounds,
                     edge_touches=int(counters[0]), vertex_touches=int(counters[1]),
                     seed=seed, workers=workers, wall_time_ns=elapsed)
    return MisResult(status == IN_SET, stats)
