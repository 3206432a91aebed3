"""Small named graphs and hypothesis strategies shared by the unit tests."""
from __future__ import annotations

import math
import os
from pathlib import Path

from hypothesis import strategies as st

from dsoracle.graph import INF, Graph
from dsoracle.utils.generate import generate_graph

# Output directory for test plots
OUTPUT_DIR = Path("unit/test_output")
OUTPUT_DIR.mkdir(parents=True, exist_ok=True)

ACCEPTANCE = os.environ.get("DSORACLE_ACCEPTANCE") == "1"

R, A, B, C = 0, 1, 2, 3


def diamond() -> Graph:
    """r-a:1, a-b:1, r-c:3, c-b:1."""
    return Graph(4, [(R, A, 1), (A, B, 1), (R, C, 3), (C, B, 1)])


def four_cycle() -> Graph:
    """r-a-b-c-r, unit weights."""
    return Graph(4, [(R, A), (A, B), (B, C), (C, R)])


def path_graph(n: int) -> Graph:
    return generate_graph("path", n=n)


def cycle(n: int) -> Graph:
    return generate_graph("cycle", n=n)


def star(n: int) -> Graph:
    return generate_graph("star", n=n)


def grid(rows: int, cols: int) -> Graph:
    return generate_graph("grid", rows=rows, cols=cols)


def binary_tree(n: int) -> Graph:
    """Complete binary tree, vertex ``i`` has children ``2i+1`` and ``2i+2``."""
    return Graph(n, [((i - 1) // 2, i) for i in range(1, n)])


def gnp(n: int, p: float, seed: int, weighted: bool = False) -> Graph:
    return generate_graph("gnp", seed, n=n, p=p, weighted=weighted)


def naive_distances(g: Graph, source: int, avoid: int | None = None) -> list[float]:
    """Quadratic Dijkstra without a heap."""
    dist = [INF] * g.n
    done = [False] * g.n
    if source == avoid:
        return dist
    dist[source] = 0
    for _ in range(g.n):
        u, best = -1, INF
        for v in range(g.n):
            if not done[v] and v != avoid and dist[v] < best:
                u, best = v, dist[v]
        if u < 0:
            break
        done[u] = True
        for v, w in g.neighbors(u):
            if v != avoid and dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
    return dist


@st.composite
def connected_graphs(draw, min_n: int = 2, max_n: int = 12, weighted: bool = False, extra: float = 0.3):
    """A random spanning tree plus random extra edges; weights 1..10 when ``weighted``."""
    n = draw(st.integers(min_n, max_n))
    weight = st.integers(1, 10) if weighted else st.just(1)
    edges = {}
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges[(u, v)] = draw(weight)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    if pairs:
        count = draw(st.integers(0, max(0, math.ceil(extra * len(pairs)))))
        for key in draw(st.lists(st.sampled_from(pairs), max_size=count, unique=True)):
            edges[key] = draw(weight)
    return Graph(n, [(u, v, w) for (u, v), w in edges.items()])
