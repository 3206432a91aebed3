"""Graphs, shortest-path trees and subgraph helpers.

Every oracle in the package is built on top of the three types defined here:
an immutable undirected :class:`Graph`, the :class:`ShortestPathTree` of a
source vertex and the :class:`Path` value returned by queries.

Shortest-path trees break ties deterministically: among all neighbours that
realise the shortest distance of a vertex the one with the smallest id is the
parent. Downstream structures (path decomposition, special vertices, detour
records) therefore depend only on the graph and the source.
"""
from __future__ import annotations

import hashlib
import heapq
import math
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse

from dsoracle.errors import GraphFormatError, QueryError
from dsoracle.graph.lca import EulerLCA

INF = math.inf


def _normalize_weight(w) -> int | float:
    if isinstance(w, bool):
        raise GraphFormatError(f"edge weight must be numeric, got {w!r}")
    if isinstance(w, (int, np.integer)):
        return int(w)
    value = float(w)
    if value.is_integer():
        return int(value)
    return value


class Graph:
    """Undirected graph on vertices ``0..n-1`` with positive edge weights.

    Immutable after construction. ``edges`` holds each edge once as
    ``(u, v, w)`` with ``u < v``, sorted.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int, float]] = ()):
        if n < 0:
            raise GraphFormatError(f"vertex count must be >= 0, got {n}")
        weights: dict[tuple[int, int], int | float] = {}
        for edge in edges:
            if len(edge) == 2:
                u, v = edge
                w = 1
            else:
                u, v, w = edge
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            w = _normalize_weight(w)
            if not w > 0 or math.isinf(w):
                raise GraphFormatError(f"edge ({u}, {v}) has non-positive weight {w}")
            key = (u, v) if u < v else (v, u)
            if key in weights:
                raise GraphFormatError(f"duplicate edge {key}")
            weights[key] = w

        self.n = n
        self.edges = tuple(sorted((u, v, w) for (u, v), w in weights.items()))
        self._weights = weights
        adj: list[list[tuple[int, int | float]]] = [[] for _ in range(n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        self._adj = tuple(tuple(sorted(a)) for a in adj)

    def __repr__(self) -> str:
        kind = "unweighted" if self.unweighted else "weighted"
        return f"Graph(n={self.n}, m={self.m}, {kind})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def unweighted(self) -> bool:
        return all(w == 1 for _, _, w in self.edges)

    def neighbors(self, v: int) -> tuple[tuple[int, int | float], ...]:
        """``(neighbour, weight)`` pairs of ``v`` sorted by neighbour id."""
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._weights

    def weight(self, u: int, v: int) -> int | float:
        try:
            return self._weights[(u, v) if u < v else (v, u)]
        except KeyError:
            raise QueryError(f"no edge between {u} and {v}") from None

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, np.zeros(0, dtype=np.float64)
        arr = np.asarray(self.edges, dtype=np.float64)
        return arr[:, 0].astype(np.int64), arr[:, 1].astype(np.int64), arr[:, 2]

    def csr(self, avoid: int | None = None) -> scipy.sparse.csr_matrix:
        """Upper-triangular weighted adjacency, optionally without vertex ``avoid``.

        Meant for ``scipy.sparse.csgraph`` routines called with ``directed=False``.
        """
        us, vs, ws = self.edge_arrays
        if avoid is not None:
            keep = (us != avoid) & (vs != avoid)
            us, vs, ws = us[keep], vs[keep], ws[keep]
        return scipy.sparse.csr_matrix((ws, (us, vs)), shape=(self.n, self.n))

    def fingerprint(self) -> dict[str, object]:
        """``n``, ``m`` and a SHA-256 over the canonical edge list."""
        digest = hashlib.sha256(f"{self.n}\n".encode())
        for u, v, w in self.edges:
            digest.update(f"{u} {v} {w!r}\n".encode())
        return {"n": self.n, "m": self.m, "sha256": digest.hexdigest()}


@dataclass(frozen=True)
class Path:
    vertices: tuple[int, ...]
    length: float

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return max(0, len(self.vertices) - 1)


def path_weight(g: Graph, vertices: Sequence[int]) -> int | float:
    """Summed weight of a vertex walk; raises if two consecutive vertices are not adjacent."""
    total: int | float = 0
    for a, b in zip(vertices, vertices[1:]):
        total += g.weight(a, b)
    return total


def search(g: Graph, source: int, avoid: int | None = None) -> tuple[list[float], list[int]]:
    """Single-source distances and smallest-id parents, skipping vertex ``avoid``.

    BFS when the graph is unweighted, Dijkstra otherwise. Unreachable vertices
    get ``INF`` and parent ``-1``; the source is its own parent.
    """
    n = g.n
    dist = [INF] * n
    if source == avoid:
        return dist, [-1] * n
    dist[source] = 0
    adj = g._adj
    if g.unweighted:
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for v, _ in adj[u]:
                if dist[v] == INF and v != avoid:
                    dist[v] = du
                    queue.append(v)
    else:
        heap = [(0, source)]
        done = [False] * n
        while heap:
            du, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for v, w in adj[u]:
                if v == avoid or done[v]:
                    continue
                nd = du + w
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))

    parent = [-1] * n
    parent[source] = source
    for v in range(n):
        dv = dist[v]
        if v == source or dv == INF:
            continue
        for u, w in adj[v]:
            if u != avoid and dist[u] + w == dv:
                parent[v] = u
                break
    return dist, parent


@dataclass(frozen=True, eq=False)
class ShortestPathTree:
    """Shortest-path tree ``T_r`` with levels, preorder intervals and an LCA index.

    ``post[v]`` is the largest preorder number inside the subtree of ``v``, so
    ``u`` is an ancestor of ``v`` iff ``pre[u] <= pre[v] <= post[u]``.
    Unreachable vertices have ``dist = INF``, ``parent = level = pre = -1``.
    """

    root: int
    parent: list[int]
    dist: list[float]
    level: list[int]
    children: tuple[tuple[int, ...], ...]
    pre: list[int]
    post: list[int]
    size: list[int]
    order: tuple[int, ...]
    lca_index: EulerLCA = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def height(self) -> int:
        return max((self.level[v] for v in self.order), default=0)

    def reachable(self, v: int) -> bool:
        return self.pre[v] >= 0

    def is_ancestor(self, u: int, v: int) -> bool:
        """True when ``u`` is ``v`` or lies on the tree path from the root to ``v``."""
        pu, pv = self.pre[u], self.pre[v]
        return pu >= 0 and pv >= 0 and pu <= pv <= self.post[u]

    def subtree(self, v: int) -> tuple[int, ...]:
        return self.order[self.pre[v]:self.post[v] + 1]


def build_tree(root: int, dist: list[float], parent: list[int]) -> ShortestPathTree:
    n = len(parent)
    kids: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        p = parent[v]
        if p >= 0 and v != root:
            kids[p].append(v)
    children = tuple(tuple(k) for k in kids)  # already ascending

    level = [-1] * n
    pre = [-1] * n
    post = [-1] * n
    size = [0] * n
    order: list[int] = []
    if n:
        level[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            pre[u] = len(order)
            order.append(u)
            for c in reversed(children[u]):
                level[c] = level[u] + 1
                stack.append(c)
        for u in reversed(order):
            size[u] = 1 + sum(size[c] for c in children[u])
            post[u] = pre[u] + size[u] - 1

    index = EulerLCA(root, children, level) if n else None
    return ShortestPathTree(
        root=root,
        parent=parent,
        dist=dist,
        level=level,
        children=children,
        pre=pre,
        post=post,
        size=size,
        order=tuple(order),
        lca_index=index,
    )


def shortest_path_tree(g: Graph, r: int) -> ShortestPathTree:
    if not 0 <= r < g.n:
        raise QueryError(f"source {r} outside vertex range 0..{g.n - 1}")
    dist, parent = search(g, r)
    return build_tree(r, dist, parent)


def lca(t: ShortestPathTree, u: int, v: int) -> int:
    if not (t.reachable(u) and t.reachable(v)):
        raise QueryError(f"lca undefined: vertex {u if not t.reachable(u) else v} is unreachable")
    if u == v:
        return u
    return t.lca_index.query(u, v)


def tree_path(t: ShortestPathTree, v: int) -> Path:
    if not t.reachable(v):
        raise QueryError(f"vertex {v} is unreachable from {t.root}")
    return Path(tuple(climb(t, v, t.root)[::-1]), t.dist[v])


def climb(t: ShortestPathTree, v: int, ancestor: int) -> list[int]:
    """Tree vertices from ``v`` up to ``ancestor`` inclusive (``ancestor`` must be one)."""
    out = [v]
    while v != ancestor:
        v = t.parent[v]
        out.append(v)
    return out


def tree_distance(t: ShortestPathTree, ancestor: int, v: int) -> float:
    return t.dist[v] - t.dist[ancestor]


@dataclass(frozen=True)
class Subgraph:
    """A relabelled subgraph; local id ``i`` is global vertex ``vertices[i]``."""

    graph: Graph
    vertices: tuple[int, ...]
    local: dict[int, int]
    witness: dict[int, int] = field(default_factory=dict)


def induced_subgraph(g: Graph, X: Iterable[int]) -> Subgraph:
    vertices = tuple(sorted(set(X)))
    local = {v: i for i, v in enumerate(vertices)}
    edges = [
        (local[u], local[v], w)
        for u, v, w in g.edges
        if u in local and v in local
    ]
    return Subgraph(Graph(len(vertices), edges), vertices, local)


def augmented_subgraph(g: Graph, t: ShortestPathTree, v: int) -> Subgraph:
    """``G_r(v)``: the subtree of ``v`` plus the root, joined by shortcut edges.

    Each subtree vertex ``z`` with a neighbour ``u`` outside the subtree gets an
    edge to the root of weight ``min(dist[u] + w(u, z))``; ``witness`` maps the
    local id of ``z`` to the minimising global ``u``. The root is local id 0.
    """
    inside = t.subtree(v)
    if t.root in inside:
        raise QueryError("augmented subgraph of the root is the graph itself")
    vertices = (t.root,) + tuple(sorted(inside))
    local = {u: i for i, u in enumerate(vertices)}
    members = set(inside)
    edges: list[tuple[int, int, int | float]] = []
    witness: dict[int, int] = {}
    for z in sorted(inside):
        best, best_u = INF, -1
        for u, w in g.neighbors(z):
            if u in members:
                if u > z:
                    edges.append((local[z], local[u], w))
            elif t.dist[u] + w < best:
                best, best_u = t.dist[u] + w, u
        if best_u >= 0:
            edges.append((0, local[z], best))
            witness[local[z]] = best_u
    return Subgraph(Graph(len(vertices), edges), vertices, local, witness)
