"""Validity checks and naive lexicographically-first oracles.

Nothing here shares code with the algorithm modules, so agreement between
the two is meaningful.  The validity checks are whole-array scans of the
edge list; the oracles are plain Python over adjacency sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .priority import Priority

__all__ = ["Verdict", "check_mis", "check_mm", "lex_first_oracle", "lex_first_mm_oracle"]


@dataclass
class Verdict:
    """``violations`` holds ``(kind, witness ids)`` pairs."""

    violations: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid

    def report(self) -> str:
        return "\n".join(f"{kind}: {' '.join(map(str, ids))}" for kind, ids in self.violations)


def _adjacency(graph: Graph) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(graph.n)]
    for u, v in graph.edges.tolist():
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _membership(flags, size: int, what: str) -> np.ndarray:
    flags = np.asarray(flags)
    if flags.shape != (size,):
        raise ValueError(f"membership has shape {flags.shape}, graph has {size} {what}")
    return flags.astype(bool)


def check_mis(graph: Graph, in_mis) -> Verdict:
    """Independence (no edge inside) and maximality (every outsider has an inside neighbor).

    Scans the edge list directly, so it is cheap enough to run on every result.
    """
    in_mis = _membership(in_mis, graph.n, "vertices")
    u, v = graph.edges[:, 0], graph.edges[:, 1]
    verdict = Verdict()
    for e in np.flatnonzero(in_mis[u] & in_mis[v]).tolist():
        verdict.violations.append(("independence", (int(u[e]), int(v[e]))))
    covered = in_mis.copy()
    covered[u[in_mis[v]]] = True
    covered[v[in_mis[u]]] = True
    for x in np.flatnonzero(~covered).tolist():
        verdict.violations.append(("maximality", (x,)))
    return verdict


def check_mm(graph: Graph, matched) -> Verdict:
    """No two matched edges share an endpoint; every unmatched edge touches a matched one."""
    matched = _membership(matched, graph.m, "edges")
    u, v = graph.edges[:, 0], graph.edges[:, 1]
    verdict = Verdict()
    chosen = np.flatnonzero(matched)
    load = np.bincount(np.concatenate([u[chosen], v[chosen]]), minlength=graph.n)
    for x in np.flatnonzero(load > 1).tolist():
        owners = chosen[(u[chosen] == x) | (v[chosen] == x)].tolist()
        for e in owners[1:]:
            verdict.violations.append(("shared-endpoint", (x, owners[0], e)))
    used = load > 0
    for e in np.flatnonzero(~matched & ~used[u] & ~used[v]).tolist():
        verdict.violations.append(("maximality", (e,)))
    return verdict


def lex_first_oracle(graph: Graph, priority: Priority) -> np.ndarray:
    """Walk vertices by priority; take each one not yet knocked out, knock out its neighbors."""
    adj = _adjacency(graph)
    knocked_out = [False] * graph.n
    chosen = np.zeros(graph.n, dtype=bool)
    for v in sorted(range(graph.n), key=priority.rank.tolist().__getitem__):
        if not knocked_out[v]:
            chosen[v] = True
            for w in adj[v]:
                knocked_out[w] = True
    return chosen


def lex_first_mm_oracle(graph: Graph, edge_priority: Priority) -> np.ndarray:
    """Walk edges by priority; take each one whose endpoints are both unused."""
    edges = graph.edges.tolist()
    used: set[int] = set()
    chosen = np.zeros(graph.m, dtype=bool)
    for e in sorted(range(graph.m), key=edge_priority.rank.tolist().__getitem__):
        u, v = edges[e]
        if u not in used and v not in used:
            chosen[e] = True
            used.update((u, v))
    return chosen
