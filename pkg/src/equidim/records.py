"""Result persistence (JSON-lines cache) and grid table regeneration."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from . import __version__
from .equalizer import is_equalizer_set
from .errors import CacheCorruptionError, GraphFormatError, SolverTimeout
from .graph import Graph, Label, all_pairs_distances, dumps_graph, grid
from .solver import solve_exact

CACHE_ENV = "EQUIDIM_CACHE"


def file_key(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def graph_key(g: Graph) -> str:
    """Family tag when there is one, else a content hash of the serialized graph."""
    return g.family_tag or file_key(dumps_graph(g))


@dataclass
class ResultRecord:
    key: str
    xi: int
    basis: list[list[int]]
    strategy: str
    millis: float
    nodes: int = 0
    version: str = __version__

    def basis_labels(self) -> list[Label]:
        return [tuple(lab) for lab in self.basis]

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "ResultRecord":
        data = json.loads(line)
        return cls(**data)


def default_cache_path(explicit: str | os.PathLike | None) -> Path | None:
    if explicit:
        return Path(explicit)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


class ResultCache:
    """Append-only JSON-lines store; the last record for a key wins."""

    def __init__(self, path: str | os.PathLike) -> None:
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: dict[str, ResultRecord] = {}
        if self.path.exists():
            for lineno, line in enumerate(self.path.read_text().splitlines(), 1):
                if not line.strip():
                    continue
                try:
                    rec = ResultRecord.from_json(line)
                except (ValueError, TypeError) as exc:
                    raise CacheCorruptionError(f"{self.path}:{lineno}: unreadable record ({exc})") from None
                self._records[rec.key] = rec

    def __contains__(self, key: str) -> bool:
        return key in self._records

    def __len__(self) -> int:
        return len(self._records)

    def get(self, key: str, g: Graph) -> ResultRecord | None:
        """Cached record for ``key``, re-verified against ``g``."""
        rec = self._records.get(key)
        if rec is None:
            return None
        try:
            basis = g.indices(rec.basis_labels())
        except ValueError:
            raise CacheCorruptionError(f"cached basis for {key!r} names vertices not in the graph") from None
        if len(basis) != rec.xi or not is_equalizer_set(g, all_pairs_distances(g), basis):
            raise CacheCorruptionError(f"cached basis for {key!r} fails verification")
        return rec

    def append(self, rec: ResultRecord) -> None:
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a") as fh:
                fh.write(rec.to_json() + "\n")
            self._records[rec.key] = rec


def solve_cached(
    g: Graph,
    strategy: str = "auto",
    budget: float | None = None,
    cache: ResultCache | None = None,
    key: str | None = None,
) -> tuple[ResultRecord, bool]:
    """Solve ``g`` exactly unless the cache already holds a verified answer.

    Returns ``(record, from_cache)``. Timeouts propagate as
    :class:`SolverTimeout` and are never cached.
    """
    key = key or graph_key(g)
    if cache is not None:
        hit = cache.get(key, g)
        if hit is not None:
            return hit, True
    sol = solve_exact(g, strategy=strategy, budget=budget)
    rec = ResultRecord(
        key=key,
        xi=sol.xi,
        basis=[list(lab) for lab in g.labels_of(sol.basis)],
        strategy=sol.strategy,
        millis=round(sol.seconds * 1000, 3),
        nodes=sol.nodes,
    )
    if cache is not None:
        cache.append(rec)
    return rec, False


# --------------------------------------------------------------------------
# grid table


def grid_excess(k: int, n: int, xi: int) -> int:
    """xi(P_k□P_n) minus ceil(k*n/2)."""
    return xi - (k * n + 1) // 2


@dataclass
class GridCell:
    k: int
    n: int
    status: str  # "solved" or "timeout"
    xi: int | None = None
    q: int | None = None


@dataclass
class GridTable:
    k_max: int
    n_max: int
    cells: dict[tuple[int, int], GridCell] = field(default_factory=dict)

    def q(self, k: int, n: int) -> int | None:
        return self.cells[(k, n)].q

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k\\n"] + list(range(2, self.n_max + 1)))
        for k in range(2, self.k_max + 1):
            row: list[object] = [k]
            for n in range(2, self.n_max + 1):
                cell = self.cells[(k, n)]
                row.append("T" if cell.status == "timeout" else cell.q)
            w.writerow(row)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "GridTable":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise GraphFormatError("empty table")
        cols = [int(c) for c in rows[0][1:]]
        ks = [int(r[0]) for r in rows[1:]]
        table = cls(max(ks), max(cols))
        for r in rows[1:]:
            k = int(r[0])
            for n, val in zip(cols, r[1:]):
                if val == "T":
                    table.cells[(k, n)] = GridCell(k, n, "timeout")
                else:
                    q = int(val)
                    table.cells[(k, n)] = GridCell(k, n, "solved", q + (k * n + 1) // 2, q)
        return table

    def to_json(self) -> str:
        cells = [asdict(self.cells[key]) for key in sorted(self.cells)]
        return json.dumps({"k_max": self.k_max, "n_max": self.n_max, "cells": cells}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "GridTable":
        data = json.loads(text)
        table = cls(data["k_max"], data["n_max"])
        for c in data["cells"]:
            table.cells[(c["k"], c["n"])] = GridCell(**c)
        return table


def _solve_cell(args: tuple[int, int, str, float | None]) -> tuple[int, int, int | None, dict | None, float]:
    k, n, strategy, budget = args
    g = grid(k, n)
    start = time.monotonic()
    try:
        sol = solve_exact(g, strategy=strategy, budget=budget)
    except SolverTimeout:
        return k, n, None, None, time.monotonic() - start
    rec = {
        "basis": [list(lab) for lab in g.labels_of(sol.basis)],
        "strategy": sol.strategy,
        "nodes": sol.nodes,
    }
    return k, n, sol.xi, rec, sol.seconds


def compute_grid_table(
    k_max: int,
    n_max: int,
    budget_per_cell: float | None = 60.0,
    cache: ResultCache | None = None,
    strategy: str = "bipartite_seeded",
    jobs: int = 1,
    progress: Callable[[GridCell], None] | None = None,
) -> GridTable:
    """xi(P_k□P_n) for 2 <= k <= k_max, 2 <= n <= n_max.

    Cells (k, n) and (n, k) share one solve, keyed as ``grid min max``. A
    cell that runs out of budget is marked as a timeout and the run goes on.
    """
    if k_max < 2 or n_max < 2:
        raise ValueError("table bounds must be at least 2")
    table = GridTable(k_max, n_max)
    wanted = sorted({(min(k, n), max(k, n)) for k in range(2, k_max + 1) for n in range(2, n_max + 1)})
    solved: dict[tuple[int, int], int | None] = {}
    todo = []
    for a, b in wanted:
        rec = cache.get(f"grid {a} {b}", grid(a, b)) if cache is not None else None
        if rec is not None:
            solved[(a, b)] = rec.xi
        else:
            todo.append((a, b, strategy, budget_per_cell))

    def record(result) -> None:
        a, b, xi, rec, seconds = result
        solved[(a, b)] = xi
        if xi is not None and cache is not None:
            cache.append(ResultRecord(key=f"grid {a} {b}", xi=xi, millis=round(seconds * 1000, 3), **rec))

    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for result in pool.map(_solve_cell, todo):
                record(result)
    else:
        for item in todo:
            record(_solve_cell(item))

    for k in range(2, k_max + 1):
        for n in range(2, n_max + 1):
            xi = solved[(min(k, n), max(k, n))]
            if xi is None:
                cell = GridCell(k, n, "timeout")
            else:
                cell = GridCell(k, n, "solved", xi, grid_excess(k, n, xi))
            table.cells[(k, n)] = cell
            if progress:
                progress(cell)
    return table


def parse_table_rows(rows: Iterable[str]) -> dict[tuple[int, int], int]:
    """Parse rows like ``2 & 0 & 0 & 1`` (k first, then q for n = 2, 3, ...)."""
    out = {}
    for line in rows:
        parts = [p.strip() for p in line.split("&")]
        if len(parts) < 2:
            continue
        k = int(parts[0])
        for n, val in enumerate(parts[1:], start=2):
            out[(k, n)] = int(val)
    return out
