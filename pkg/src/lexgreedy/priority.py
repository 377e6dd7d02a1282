"""Priorities (total orders over items), prefix schedules and priority-DAG analytics.

A priority is a permutation: ``rank[item]`` is the item's position in the
order and ``order[rank]`` inverts it.  Rank 0 is the highest priority.

Random priorities come from a Fisher-Yates shuffle driven by numpy's PCG64
bit generator.  Only ``PCG64.random_raw`` is used, whose output stream numpy
keeps stable across releases and platforms, so a seed pins the permutation.
The draw for position ``i`` is ``(r * (i + 1)) >> 64`` on a raw 64-bit word
``r`` (multiply-high; bias below ``2**-32`` for any count we accept).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .graph import Graph

__all__ = [
    "Priority",
    "random_priority",
    "identity_priority",
    "PrefixSchedule",
    "prefix",
    "prefix_count",
    "DagStats",
    "dependence_length",
    "longest_path",
    "prefix_sparsity",
]

FRACTION, COUNT, DEGREE = 0, 1, 2


@dataclass(frozen=True, eq=False)
class Priority:
    rank: np.ndarray  # item -> rank
    order: np.ndarray  # rank -> item

    def __len__(self) -> int:
        return len(self.rank)

    @classmethod
    def from_order(cls, order) -> Priority:
        order = np.asarray(order, dtype=np.int64)
        rank = np.empty_like(order)
        rank[order] = np.arange(len(order))
        if not np.array_equal(np.sort(order), np.arange(len(order))):
            raise ValueError("order is not a permutation")
        return cls(rank=rank, order=order)

    @classmethod
    def from_rank(cls, rank) -> Priority:
        rank = np.asarray(rank, dtype=np.int64)
        order = np.empty_like(rank)
        order[rank] = np.arange(len(rank))
        return cls.from_order(order)


def identity_priority(count: int) -> Priority:
    ids = np.arange(count, dtype=np.int64)
    return Priority(rank=ids, order=ids.copy())


@njit(cache=True)
def _fisher_yates(items, draws):
    for i in range(items.size - 1, 0, -1):
        j = draws[i - 1]
        t = items[i]
        items[i] = items[j]
        items[j] = t


def _bounded_draws(raw: np.ndarray, bounds: np.ndarray) -> np.ndarray:
    # floor(raw * bound / 2**64) from 32-bit halves; bound < 2**32
    hi = raw >> np.uint64(32)
    lo = raw & np.uint64(0xFFFFFFFF)
    b = bounds.astype(np.uint64)
    return ((hi * b + ((lo * b) >> np.uint64(32))) >> np.uint64(32)).astype(np.int64)


def random_priority(count: int, seed: int) -> Priority:
    """Uniformly random permutation of ``count`` items, reproducible from ``seed``."""
    if count < 0:
        raise ValueError("count must be non-negative")
    if count >= 1 << 32:
        raise ValueError("at most 2**32 - 1 items")
    order = np.arange(count, dtype=np.int64)
    if count > 1:
        raw = np.random.PCG64(seed).random_raw(count - 1)
        # draws[i - 1] picks j in [0, i] for position i
        draws = _bounded_draws(raw, np.arange(2, count + 1, dtype=np.int64))
        _fisher_yates(order, draws)
    rank = np.empty_like(order)
    rank[order] = np.arange(count, dtype=np.int64)
    return Priority(rank=rank, order=order)


@njit(cache=True)
def prefix_count(mode, fraction, count, c, max_degree, ln_n0, remaining, round_index):
    """Number of items the next prefix takes, clamped to ``[1, remaining]``."""
    if mode == COUNT:
        x = float(count)
    else:
        if mode == FRACTION:
            f = fraction
        elif round_index > 1000:
            f = 1.0
        else:
            f = c * 2.0 ** round_index * ln_n0 / max_degree
        x = min(f, 1.0) * remaining
    k = np.int64(math.floor(x))
    if x - k > 1e-9:
        k += 1
    return max(1, min(k, remaining))


@dataclass(frozen=True)
class PrefixSchedule:
    """How many of the remaining items each round processes.

    ``fixed_fraction``: a fraction ``delta`` of what remains.
    ``fixed_count``: ``s`` items per round.
    ``degree_aware``: a fraction ``c * 2**i * ln(n0) / max_degree`` in round
    ``i``, where ``n0`` is the original item count.  ``max_degree`` may be
    left ``None`` and is then taken from the input when the schedule is run.
    Prefix sizes round up and never drop below one item.
    """

    mode: str
    fraction: float = 1.0
    count: int = 1
    c: float = 2.0
    max_degree: int | None = None

    def __post_init__(self):
        if self.mode == "fixed_fraction":
            if not 0.0 < self.fraction <= 1.0:
                raise ValueError(f"prefix fraction must lie in (0, 1], got {self.fraction}")
        elif self.mode == "fixed_count":
            if self.count < 1:
                raise ValueError(f"prefix count must be >= 1, got {self.count}")
        elif self.mode == "degree_aware":
            if self.c <= 0:
                raise ValueError(f"degree-aware multiplier must be > 0, got {self.c}")
            if self.max_degree is not None and self.max_degree < 1:
                raise ValueError(f"max degree must be >= 1, got {self.max_degree}")
        else:
            raise ValueError(f"unknown schedule mode {self.mode!r}")

    @classmethod
    def fixed_fraction(cls, delta: float) -> PrefixSchedule:
        return cls("fixed_fraction", fraction=float(delta))

    @classmethod
    def fixed_count(cls, s: int) -> PrefixSchedule:
        return cls("fixed_count", count=int(s))

    @classmethod
    def degree_aware(cls, c: float = 2.0, max_degree: int | None = None) -> PrefixSchedule:
        return cls("degree_aware", c=float(c), max_degree=max_degree)

    @classmethod
    def parse(cls, text: str) -> PrefixSchedule:
        """``frac:F``, ``count:S`` or ``degree:C``."""
        kind, _, value = text.partition(":")
        try:
            if kind == "frac":
                return cls.fixed_fraction(float(value))
            if kind == "count":
                return cls.fixed_count(int(value))
            if kind == "degree":
                return cls.degree_aware(float(value) if value else 2.0)
        except ValueError as err:
            raise ValueError(f"bad schedule {text!r}: {err}") from None
        raise ValueError(f"bad schedule {text!r}")

    def describe(self) -> str:
        if self.mode == "fixed_fraction":
            return f"frac:{self.fraction:g}"
        if self.mode == "fixed_count":
            return f"count:{self.count}"
        return f"degree:{self.c:g}"

    def with_max_degree(self, max_degree: int) -> PrefixSchedule:
        if self.mode != "degree_aware" or self.max_degree is not None:
            return self
        return replace(self, max_degree=max(1, int(max_degree)))

    def kernel_params(self, n0: int):
        """Positional arguments for :func:`prefix_count` (minus the last two)."""
        modes = {"fixed_fraction": FRACTION, "fixed_count": COUNT, "degree_aware": DEGREE}
        if self.mode == "degree_aware" and self.max_degree is None:
            raise ValueError("degree-aware schedule needs max_degree")
        return (
            modes[self.mode],
            float(self.fraction),
            int(self.count),
            float(self.c),
            float(self.max_degree or 1),
            math.log(n0) if n0 > 0 else 0.0,
        )

    def size(self, remaining: int, round_index: int, n0: int) -> int:
        return int(prefix_count(*self.kernel_params(n0), remaining, round_index))


def prefix(priority: Priority, remaining, schedule: PrefixSchedule, round_index: int = 0,
           n0: int | None = None) -> np.ndarray:
    """The earliest remaining items under ``priority``, sized by ``schedule``.

    ``remaining`` is either a boolean mask over all items or an array of item
    ids.  The result lists item ids from highest priority down.
    """
    remaining = np.asarray(remaining)
    if remaining.dtype == bool:
        remaining = np.flatnonzero(remaining)
    if remaining.size == 0:
        raise ValueError("prefix of an empty item set")
    n0 = len(priority) if n0 is None else n0
    k = schedule.size(remaining.size, round_index, n0)
    by_rank = remaining[np.argsort(priority.rank[remaining], kind="stable")]
    return by_rank[:k]


@dataclass(frozen=True)
class DagStats:
    """Shape of the priority DAG (edges oriented from higher to lower priority).

    ``dependence_length`` counts peel-the-roots steps until the DAG is empty.
    ``longest_path`` counts edges on the longest directed path.  The sparsity
    fields count edges with both ends inside the prefix and the prefix
    vertices touching such an edge; :func:`dependence_length` reports them
    for the whole vertex set.
    """

    dependence_length: int
    longest_path: int
    internal_edges: int
    touched_vertices: int


def _peel_steps(n: int, src: np.ndarray, dst: np.ndarray) -> int:
    alive = np.ones(n, dtype=bool)
    steps = 0
    while alive.any():
        live = alive[src] & alive[dst]
        src, dst = src[live], dst[live]
        has_parent = np.zeros(n, dtype=bool)
        has_parent[dst] = True
        roots = alive & ~has_parent
        gone = roots.copy()
        gone[dst[roots[src]]] = True
        alive &= ~gone
        steps += 1
    return steps


@njit(cache=True)
def _longest_path(offsets, neighbors, rank, order, limit):
    depth = np.zeros(rank.size, dtype=np.int64)
    best = 0
    for r in range(limit):
        v = order[r]
        d = 0
        for j in range(offsets[v], offsets[v + 1]):
            w = neighbors[j]
            if rank[w] < r and depth[w] + 1 > d:
                d = depth[w] + 1
        depth[v] = d
        if d > best:
            best = d
    return best


def longest_path(graph: Graph, priority: Priority, limit: int | None = None) -> int:
    """Edges on the longest directed path of the priority DAG.

    With ``limit``, only the items of rank below ``limit`` are considered,
    i.e. the DAG induced by that prefix.
    """
    limit = graph.n if limit is None else min(int(limit), graph.n)
    return int(_longest_path(graph.offsets, graph.neighbors, priority.rank, priority.order, limit))


def _oriented_edges(graph: Graph, priority: Priority):
    u = graph.edges[:, 0].astype(np.int64)
    v = graph.edges[:, 1].astype(np.int64)
    first = priority.rank[u] < priority.rank[v]
    return np.where(first, u, v), np.where(first, v, u)


def prefix_sparsity(graph: Graph, priority: Priority, delta: float) -> tuple[int, int]:
    """Internal edges of the ``delta``-prefix and prefix vertices touching one."""
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    if graph.n == 0:
        return 0, 0
    k = int(prefix_count(FRACTION, float(delta), 1, 1.0, 1.0, 0.0, graph.n, 0))
    inside = priority.rank < k
    u, v = graph.edges[:, 0], graph.edges[:, 1]
    internal = inside[u] & inside[v]
    touched = np.unique(np.concatenate([u[internal], v[internal]]))
    return int(internal.sum()), int(touched.size)


def dependence_length(graph: Graph, priority: Priority) -> DagStats:
    """Simulate the fully parallel greedy rounds on the priority DAG.

    A plain whole-graph re-scan per step, independent of the work-efficient
    root-set implementation in :mod:`lexgreedy.mis`.
    """
    if len(priority) != graph.n:
        raise ValueError("priority must cover every vertex")
    src, dst = _oriented_edges(graph, priority)
    internal, touched = prefix_sparsity(graph, priority, 1.0)
    return DagStats(
        dependence_length=_peel_steps(graph.n, src, dst),
        longest_path=longest_path(graph, priority),
        internal_edges=internal,
        touched_vertices=touched,
    )
