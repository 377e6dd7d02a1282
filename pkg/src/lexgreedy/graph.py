"""Immutable undirected graphs in compressed adjacency form.

Vertices are dense ids ``0..n-1``.  Every undirected edge ``{u, v}`` with
``u < v`` gets an id in ``[0, m)`` following the lexicographic order of
``(u, v)``; both half-edges carry that id.  Adjacency lists are sorted by
neighbor id.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Graph",
    "GraphSpec",
    "GraphInputError",
    "GraphParseError",
    "PartialGraphWarning",
    "build",
    "from_canonical_edges",
    "check_graph",
    "generate_gnm",
    "generate_rmat",
    "load",
    "store",
]

RMAT_DEFAULTS = (0.5, 0.1, 0.1)


class GraphInputError(ValueError):
    """Invalid vertex ids, infeasible generator parameters, bad specs."""


class GraphParseError(GraphInputError):
    def __init__(self, path, lineno: int, message: str):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{self.path}:{lineno}: {message}")


class PartialGraphWarning(UserWarning):
    """The rMat generator hit its retry cap before reaching ``m`` edges."""


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    m: int
    offsets: np.ndarray  # int64, length n + 1
    neighbors: np.ndarray  # int32, length 2m
    edge_ids: np.ndarray  # int64, length 2m
    edges: np.ndarray  # int32, shape (m, 2), rows (u, v) with u < v, sorted
    n_dropped: int = field(default=0, compare=False)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def neighbors_of(self, v: int) -> np.ndarray:
        return self.neighbors[self.offsets[v]:self.offsets[v + 1]]

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def from_canonical_edges(edges: np.ndarray, n: int, n_dropped: int = 0) -> Graph:
    """Build the adjacency arrays from sorted, duplicate-free ``u < v`` rows."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    m = len(edges)
    u, v = edges[:, 0], edges[:, 1]
    ids = np.arange(m, dtype=np.int64)
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    eid = np.concatenate([ids, ids])
    order = np.lexsort((dst, src))
    counts = np.bincount(src, minlength=n) if m else np.zeros(n, dtype=np.int64)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return Graph(
        n=int(n),
        m=m,
        offsets=offsets,
        neighbors=dst[order].astype(np.int32),
        edge_ids=eid[order],
        edges=edges.astype(np.int32),
        n_dropped=int(n_dropped),
    )


def _canonicalize(pairs: np.ndarray, n: int) -> np.ndarray:
    u = np.minimum(pairs[:, 0], pairs[:, 1])
    v = np.maximum(pairs[:, 0], pairs[:, 1])
    keep = u != v
    keys = np.unique(u[keep] * n + v[keep])
    return np.stack([keys // n, keys % n], axis=1) if len(keys) else np.empty((0, 2), np.int64)


def build(edge_list, n: int) -> Graph:
    """Build a graph from ``(u, v)`` pairs, dropping self-loops and duplicates.

    The number of dropped pairs is kept on ``Graph.n_dropped``.

    >>> build([(0, 1), (1, 0), (2, 2)], 3).m
    1
    """
    if n < 0:
        raise GraphInputError(f"vertex count must be non-negative, got {n}")
    pairs = np.asarray(edge_list, dtype=np.int64)
    if pairs.size == 0:
        pairs = pairs.reshape(0, 2)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise GraphInputError("edge list must be a sequence of (u, v) pairs")
    bad = (pairs < 0) | (pairs >= n)
    if bad.any():
        row = int(np.argmax(bad.any(axis=1)))
        raise GraphInputError(f"edge {tuple(int(x) for x in pairs[row])} has a vertex outside [0, {n})")
    edges = _canonicalize(pairs, n)
    return from_canonical_edges(edges, n, n_dropped=len(pairs) - len(edges))


def check_graph(graph: Graph) -> None:
    """Full scan of the structural invariants; raises ``AssertionError``."""
    n, m = graph.n, graph.m
    off = graph.offsets
    assert len(off) == n + 1 and off[0] == 0 and off[-1] == 2 * m
    assert np.all(np.diff(off) >= 0)
    assert graph.degrees.sum() == 2 * m
    src = np.repeat(np.arange(n), np.diff(off))
    dst = graph.neighbors.astype(np.int64)
    eid = graph.edge_ids
    assert np.all(src != dst), "self-loop"
    assert np.all(np.bincount(eid, minlength=m) == 2), "edge id not used by exactly two half-edges"
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    assert np.array_equal(graph.edges[eid, 0], lo) and np.array_equal(graph.edges[eid, 1], hi)
    # each id has one half-edge per orientation
    assert np.array_equal(np.sort(eid[src < dst]), np.arange(m))
    assert len(np.unique(lo * max(n, 1) + hi)) == m, "duplicate edge"
    for v in range(n) if n <= 4096 else ():
        nb = graph.neighbors_of(v)
        assert np.all(nb[1:] > nb[:-1])


def _distinct_pairs(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """``count`` distinct uniformly random ``u < v`` keys, by rejection."""
    keys = np.empty(0, dtype=np.int64)
    while len(keys) < count:
        need = count - len(keys)
        draw = need + need // 4 + 16
        u = rng.integers(0, n, size=draw)
        v = rng.integers(0, n, size=draw)
        ok = u != v
        lo = np.minimum(u[ok], v[ok])
        hi = np.maximum(u[ok], v[ok])
        merged = np.concatenate([keys, lo * n + hi])
        _, first = np.unique(merged, return_index=True)
        keys = merged[np.sort(first)]
    return keys[:count]


def generate_gnm(n: int, m: int, seed: int = 0) -> Graph:
    """Uniform random graph with exactly ``m`` distinct edges.

    Dense requests (more than half of all pairs) sample the complement.
    """
    max_m = n * (n - 1) // 2
    if n < 0 or m < 0 or m > max_m:
        raise GraphInputError(f"cannot place {m} edges on {n} vertices (max {max_m})")
    rng = np.random.default_rng(seed)
    if 2 * m > max_m:
        excluded = _distinct_pairs(rng, n, max_m - m)
        iu, iv = np.triu_indices(n, k=1)
        keys = iu.astype(np.int64) * n + iv
        keys = keys[~np.isin(keys, excluded)]
    else:
        keys = np.sort(_distinct_pairs(rng, n, m))
    edges = np.stack([keys // n, keys % n], axis=1)
    return from_canonical_edges(edges, n)


def generate_rmat(
    scale: int,
    m: int,
    a: float = RMAT_DEFAULTS[0],
    b: float = RMAT_DEFAULTS[1],
    c: float = RMAT_DEFAULTS[2],
    seed: int = 0,
) -> Graph:
    """Recursive-quadrant (R-MAT) graph on ``2**scale`` vertices.

    Each edge picks one of four quadrants per level with probabilities
    ``a, b, c, 1-a-b-c``.  Self-loops and duplicates are resampled until
    ``m`` distinct edges exist.  After ``16 * m`` draws the generator stops
    and returns what it has, issuing a :class:`PartialGraphWarning`.
    """
    if not 0 <= scale <= 30:
        raise GraphInputError(f"rmat scale must be in [0, 30], got {scale}")
    if min(a, b, c) < 0 or a + b + c > 1 + 1e-12:
        raise GraphInputError(f"rmat needs a, b, c >= 0 and a+b+c <= 1, got {a}, {b}, {c}")
    if m < 0:
        raise GraphInputError("edge count must be non-negative")
    n = 1 << scale
    rng = np.random.default_rng(seed)
    cap = 16 * m
    attempts = 0
    keys = np.empty(0, dtype=np.int64)
    ab, abc = a + b, a + b + c
    while len(keys) < m and attempts < cap:
        need = m - len(keys)
        draw = min(need + need // 4 + 64, cap - attempts)
        attempts += draw
        u = np.zeros(draw, dtype=np.int64)
        v = np.zeros(draw, dtype=np.int64)
        for _ in range(scale):
            r = rng.random(draw)
            u = 2 * u + (r >= ab)
            v = 2 * v + (((r >= a) & (r < ab)) | (r >= abc))
        ok = u != v
        lo = np.minimum(u[ok], v[ok])
        hi = np.maximum(u[ok], v[ok])
        merged = np.concatenate([keys, lo * n + hi])
        _, first = np.unique(merged, return_index=True)
        keys = merged[np.sort(first)]
    keys = np.sort(keys[:m])
    if len(keys) < m:
        warnings.warn(
            f"rmat(scale={scale}) produced only {len(keys)} of {m} edges after {cap} draws",
            PartialGraphWarning,
            stacklevel=2,
        )
    edges = np.stack([keys // n, keys % n], axis=1)
    return from_canonical_edges(edges, n)


def load(path) -> Graph:
    """Read the ``n m`` header plus ``m`` lines of ``u v`` with ``u < v``."""
    path = Path(path)
    with open(path) as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise GraphParseError(path, 1, "missing 'n m' header")

    def ints(lineno, text, expect):
        parts = text.split(" ")
        if len(parts) != 2:
            raise GraphParseError(path, lineno, f"expected {expect}, got {text!r}")
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(path, lineno, f"non-integer token in {text!r}") from None
        return x, y

    n, m = ints(1, lines[0], "'n m'")
    if n < 0 or m < 0:
        raise GraphParseError(path, 1, "negative count in header")
    if len(lines) - 1 < m:
        raise GraphParseError(path, len(lines) + 1, f"header declares {m} edges, file has {len(lines) - 1}")
    if len(lines) - 1 > m:
        raise GraphParseError(path, m + 2, f"unexpected line after the {m} declared edges")
    edges = np.empty((m, 2), dtype=np.int64)
    for i in range(m):
        u, v = ints(i + 2, lines[i + 1], "'u v'")
        if not 0 <= u < v < n:
            raise GraphParseError(path, i + 2, f"edge ({u}, {v}) violates 0 <= u < v < {n}")
        edges[i] = u, v
    g = build(edges, n)
    if g.m != m:
        raise GraphParseError(path, 1, f"{m - g.m} duplicate edges")
    return g


def store(graph: Graph, path) -> None:
    body = "".join(f"{u} {v}\n" for u, v in graph.edges.tolist())
    Path(path).write_text(f"{graph.n} {graph.m}\n{body}")


@dataclass(frozen=True)
class GraphSpec:
    """Where a graph comes from: a file, G(n, m), or rMat."""

    kind: str
    path: str | None = None
    n: int = 0
    m: int = 0
    scale: int = 0
    a: float = RMAT_DEFAULTS[0]
    b: float = RMAT_DEFAULTS[1]
    c: float = RMAT_DEFAULTS[2]
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("file", "gnm", "rmat"):
            raise GraphInputError(f"unknown graph kind {self.kind!r}")
        if self.kind == "file" and not self.path:
            raise GraphInputError("file graph needs a path")
        if self.kind == "gnm" and not (0 <= self.m <= self.n * (self.n - 1) // 2):
            raise GraphInputError(f"gnm: m={self.m} infeasible for n={self.n}")
        if self.kind == "rmat":
            if not 0 <= self.scale <= 30:
                raise GraphInputError("rmat: scale must be in [0, 30]")
            if self.a + self.b + self.c > 1 + 1e-12:
                raise GraphInputError("rmat: a + b + c must be <= 1")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> GraphSpec:
        """Parse ``file:PATH``, ``gnm:N,M`` or ``rmat:SCALE,M[,A,B,C]``."""
        kind, _, rest = text.partition(":")
        try:
            if kind == "file":
                return cls("file", path=rest, seed=seed)
            nums = rest.split(",")
            if kind == "gnm" and len(nums) == 2:
                return cls("gnm", n=int(nums[0]), m=int(nums[1]), seed=seed)
            if kind == "rmat" and len(nums) in (2, 5):
                abc = [float(x) for x in nums[2:]] or list(RMAT_DEFAULTS)
                return cls("rmat", scale=int(nums[0]), m=int(nums[1]),
                           a=abc[0], b=abc[1], c=abc[2], seed=seed)
        except ValueError as err:
            raise GraphInputError(f"bad graph spec {text!r}: {err}") from None
        raise GraphInputError(f"bad graph spec {text!r}")

    def make(self) -> Graph:
        if self.kind == "file":
            return load(self.path)
        if self.kind == "gnm":
            return generate_gnm(self.n, self.m, self.seed)
        return generate_rmat(self.scale, self.m, self.a, self.b, self.c, self.seed)
