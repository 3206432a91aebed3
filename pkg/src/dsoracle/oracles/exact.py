"""Brute-force replacement paths: rerun shortest paths with the failed vertex masked."""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path as FilePath

import numpy as np
from scipy.sparse.csgraph import dijkstra, shortest_path

from dsoracle.errors import QueryError
from dsoracle.graph import INF, Graph, Path, search


@dataclass(frozen=True)
class ReplacementAnswer:
    """Distance avoiding a failed vertex; ``path`` is ``None`` when unreachable
    or when only the distance was requested.

    ``probes`` counts sub-oracle lookups for oracles that compose others.
    """

    distance: float
    path: Path | None = None
    probes: int = 0

    @property
    def reachable(self) -> bool:
        return not math.isinf(self.distance)


def _check_vertex(g: Graph, v: int, name: str):
    if not 0 <= v < g.n:
        raise QueryError(f"{name}={v} outside vertex range 0..{g.n - 1}")


def exact_replacement(g: Graph, u: int, v: int, x: int) -> ReplacementAnswer:
    for value, name in ((u, "u"), (v, "v"), (x, "x")):
        _check_vertex(g, value, name)
    if u == x or v == x:
        raise QueryError(f"endpoint equals the failed vertex {x}")
    dist, parent = search(g, u, avoid=x)
    if math.isinf(dist[v]):
        return ReplacementAnswer(INF)
    walk = [v]
    while walk[-1] != u:
        walk.append(parent[walk[-1]])
    return ReplacementAnswer(dist[v], Path(tuple(reversed(walk)), dist[v]))


def _fault_row(g: Graph, r: int, x: int) -> np.ndarray:
    return dijkstra(g.csr(avoid=x), directed=False, indices=r, unweighted=g.unweighted)


def all_replacement_distances(g: Graph, r: int, workers: int | None = None) -> np.ndarray:
    """``table[v, x] = δ(r, v, x)``; entries with ``x == r`` or ``v == x`` are NaN.

    One masked single-source run per failed vertex. ``workers > 1`` fans the
    runs out over a thread pool; each run writes only its own column.
    """
    _check_vertex(g, r, "r")
    n = g.n
    table = np.full((n, n), np.nan)
    failures = [x for x in range(n) if x != r]

    def fill(x: int):
        col = _fault_row(g, r, x)
        col[x] = np.nan
        table[:, x] = col

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, failures))
    else:
        for x in failures:
            fill(x)
    return table


def fault_distance_matrix(g: Graph, x: int | None = None) -> np.ndarray:
    """All-pairs distances in ``G \\ {x}`` (plain APSP for ``x=None``).

    Row and column ``x`` are ``inf`` apart from the zero diagonal entry.
    """
    if x is not None:
        _check_vertex(g, x, "x")
    if g.n == 0:
        return np.zeros((0, 0))
    return shortest_path(g.csr(avoid=x), method="D", directed=False, unweighted=g.unweighted)


class FaultDistances:
    """Distance matrices of ``G`` and every ``G \\ {x}``, computed on first use."""

    def __init__(self, g: Graph, cache: bool = True):
        self.graph = g
        self.cache = cache
        self._store: dict[int | None, np.ndarray] = {}

    def __call__(self, x: int | None = None) -> np.ndarray:
        hit = self._store.get(x)
        if hit is not None:
            return hit
        matrix = fault_distance_matrix(self.graph, x)
        if self.cache or x is None:
            self._store[x] = matrix
        return matrix


def nearest_in_set(row: np.ndarray, members) -> tuple[float, int]:
    """``(δ(v, B), p)`` from one distance row; smallest id wins ties, ``(inf, -1)`` if none."""
    idx = np.asarray(sorted(members), dtype=np.int64)
    if idx.size == 0:
        return INF, -1
    values = row[idx]
    best = int(np.argmin(values))  # argmin returns the first minimum
    if math.isinf(values[best]):
        return INF, -1
    d = float(values[best])
    return (int(d) if d.is_integer() else d), int(idx[best])


def write_replacement_csv(table: np.ndarray, path: str | FilePath):
    """``v,x,distance`` rows for every defined table entry; ``inf`` when disconnected."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["v", "x", "distance"])
        n = table.shape[0]
        for v in range(n):
            for x in range(n):
                d = table[v, x]
                if np.isnan(d):
                    continue
                writer.writerow([v, x, format_distance(d)])


def format_distance(d: float) -> str:
    if math.isinf(d):
        return "inf"
    d = float(d)
    return str(int(d)) if d.is_integer() else repr(d)
