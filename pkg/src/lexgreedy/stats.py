"""Run counters shared by every algorithm, and their CSV form."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CSV_COLUMNS = (
    "algo", "n", "m", "seed", "schedule", "workers", "rounds", "steps_total",
    "edge_touches", "vertex_touches", "wall_time_ns", "verified",
)


@dataclass
class RunStats:
    """Counters for one algorithm run.

    ``rounds`` is the number of outer iterations: prefixes for the prefix
    algorithms, parallel steps for the root-set algorithms, items visited for
    the sequential ones.  ``steps_total`` sums parallel steps over all rounds.
    ``edge_touches`` counts adjacency or incidence entries read.
    ``cursor_advance`` is the total distance the per-vertex check cursors moved.
    The ``round_*`` arrays are per-round detail for the prefix algorithms.
    """

    algo: str
    n: int
    m: int
    rounds: int = 0
    steps_total: int = 0
    edge_touches: int = 0
    vertex_touches: int = 0
    cursor_advance: int = 0
    seed: int | None = None
    schedule: str = ""
    workers: int = 1
    wall_time_ns: int = 0
    verified: bool = False
    round_steps: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64), repr=False)
    round_sizes: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64), repr=False)
    round_internal_edges: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64), repr=False)
    round_max_degree: np.ndarray | None = field(default=None, repr=False)

    def csv_row(self) -> list[str]:
        row = []
        for name in CSV_COLUMNS:
            value = getattr(self, name)
            if name == "verified":
                value = "true" if value else "false"
            elif value is None:
                value = ""
            row.append(str(value))
        return row

    @classmethod
    def from_csv_row(cls, row) -> RunStats:
        if isinstance(row, dict):
            row = [row[c] for c in CSV_COLUMNS]
        if len(row) != len(CSV_COLUMNS):
            raise ValueError(f"expected {len(CSV_COLUMNS)} columns, got {len(row)}")
        values = dict(zip(CSV_COLUMNS, row))
        kwargs = {}
        for name, text in values.items():
            if name == "verified":
                if text not in ("true", "false"):
                    raise ValueError(f"verified must be true/false, got {text!r}")
                kwargs[name] = text == "true"
            elif name in ("algo", "schedule"):
                kwargs[name] = text
            elif name == "seed":
                kwargs[name] = int(text) if text else None
            else:
                kwargs[name] = int(text)
        return cls(**kwargs)

    def same_result_columns(self, other: RunStats, ignore=("wall_time_ns",)) -> bool:
        """Equal on every CSV column except wall time (and any others in ``ignore``)."""
        skip = {CSV_COLUMNS.index(name) for name in ignore}
        pairs = zip(self.csv_row(), other.csv_row())
        return all(x == y for i, (x, y) in enumerate(pairs) if i not in skip)
