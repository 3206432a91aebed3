"""Single-source 3-approximate replacement paths for weighted graphs.

The shortest-path tree ``T_r`` is cut into heavy paths. For a failed vertex
``x`` with successor ``u = uchild(x)`` on its own path, the subtree ``T(x)``
minus ``x`` splits into ``D_x = T(u)`` and the side subtrees ``O_x``; all
other vertices (``U_x``) keep their tree path. Per failed vertex we store

* the jump edge ``(y, z)`` into ``D_x`` minimising
  ``δ_x(r, y) + w(y, z) + δ(u, z)``, which prices ``P(r, u, x)`` exactly,
* ``o_tree``: shortest paths to ``O_x`` that never enter ``D_x``,
* ``o_fail``: shortest paths in ``G_r(O_x)`` whose root edges come either
  from ``U_x`` (exact) or from ``D_x`` (priced by the jump answer).

Every vertex lies in ``O_x`` for at most ``log2 n`` failures (one per light
edge above it), so the records hold ``O(n log n)`` entries.
"""
from __future__ import annotations

import heapq
import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

from dsoracle.errors import ContainerError, QueryError
from dsoracle.graph import (
    INF,
    Graph,
    Path,
    ShortestPathTree,
    climb,
    lca,
    shortest_path_tree,
    tree_path,
)
from dsoracle.oracles.exact import ReplacementAnswer

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PathDecomposition:
    """Heavy-path decomposition of a shortest-path tree.

    ``paths[0]`` starts at the root. ``hanging[p][j]`` lists the roots of the
    subtrees hanging off the ``j``-th vertex of path ``p``; each of them heads
    its own path one recursion level deeper.
    """

    paths: tuple[tuple[int, ...], ...]
    depth: tuple[int, ...]
    hanging: tuple[tuple[tuple[int, ...], ...], ...]
    path_of: tuple[int, ...]
    position: tuple[int, ...]

    @property
    def levels(self) -> int:
        return max(self.depth, default=-1) + 1

    def uchild(self, x: int) -> int:
        """Successor of ``x`` on its own path, ``-1`` for the last vertex or an unreachable one."""
        p = self.path_of[x]
        if p < 0:
            return -1
        path = self.paths[p]
        i = self.position[x] + 1
        return path[i] if i < len(path) else -1


def heavy_child(t: ShortestPathTree, v: int) -> int:
    kids = t.children[v]
    if not kids:
        return -1
    # children are ascending, so max() keeps the smallest id among equal sizes
    return max(kids, key=lambda c: (t.size[c], -c))


def decompose_tree(t: ShortestPathTree) -> PathDecomposition:
    if not t.order:
        raise QueryError("cannot decompose an empty tree")
    n = t.n
    path_of = [-1] * n
    position = [-1] * n
    paths: list[tuple[int, ...]] = []
    depth: list[int] = []
    hanging: list[tuple[tuple[int, ...], ...]] = []

    heads = [(t.root, 0)]
    while heads:
        head, d = heads.pop()
        chain = [head]
        while (h := heavy_child(t, chain[-1])) >= 0:
            chain.append(h)
        pid = len(paths)
        off = []
        for i, v in enumerate(chain):
            path_of[v] = pid
            position[v] = i
            nxt = chain[i + 1] if i + 1 < len(chain) else -1
            light = tuple(c for c in t.children[v] if c != nxt)
            off.append(light)
            for c in reversed(light):
                heads.append((c, d + 1))
        paths.append(tuple(chain))
        depth.append(d)
        hanging.append(tuple(off))

    return PathDecomposition(
        paths=tuple(paths),
        depth=tuple(depth),
        hanging=tuple(hanging),
        path_of=tuple(path_of),
        position=tuple(position),
    )


@dataclass(frozen=True)
class TreeEntry:
    """One vertex of a side tree.

    ``parent == -1`` marks a shortcut edge from the root; ``witness`` is then the
    real vertex outside the side subtrees the shortcut stands for.
    """

    parent: int
    dist: float
    witness: int = -1


@dataclass(frozen=True)
class JumpEdge:
    y: int
    z: int
    reach: float  # length of the best r -> y -> z prefix avoiding x and D_x


@dataclass
class FaultRecord:
    x: int
    uchild: int
    jump: JumpEdge | None
    o_tree: dict[int, TreeEntry] = field(default_factory=dict)
    o_fail: dict[int, TreeEntry] = field(default_factory=dict)

    @property
    def entries(self) -> int:
        return 2 + len(self.o_tree) + len(self.o_fail)


@dataclass
class PathFaultStructure:
    path: tuple[int, ...]
    depth: int
    records: dict[int, FaultRecord]

    @property
    def entries(self) -> int:
        return sum(rec.entries for rec in self.records.values())


def side_vertices(t: ShortestPathTree, x: int, u: int) -> tuple[int, ...]:
    """``O_x``: the subtree of ``x`` without ``x`` and without ``T(u)``."""
    lo, hi = t.pre[x] + 1, t.post[x] + 1
    if u < 0:
        return t.order[lo:hi]
    return t.order[lo:t.pre[u]] + t.order[t.post[u] + 1:hi]


def boundary_seeds(g: Graph, t: ShortestPathTree, x: int, side: Iterable[int]) -> dict[int, tuple[float, int]]:
    """Cheapest edge from outside ``T(x)`` into each side vertex: ``o -> (δ(r, y) + w, y)``."""
    seeds: dict[int, tuple[float, int]] = {}
    for o in side:
        best, who = INF, -1
        for y, w in g.neighbors(o):
            if t.is_ancestor(x, y) or not t.reachable(y):
                continue
            cand = t.dist[y] + w
            if cand < best:
                best, who = cand, y
        if who >= 0:
            seeds[o] = (best, who)
    return seeds


def grow_side_tree(g: Graph, inside: set[int], seeds: dict[int, tuple[float, int]]) -> dict[int, TreeEntry]:
    """Dijkstra over ``inside`` from a virtual root joined by the ``seeds`` edges."""
    entries = {o: TreeEntry(-1, d, y) for o, (d, y) in seeds.items()}
    heap = [(d, o) for o, (d, _) in seeds.items()]
    heapq.heapify(heap)
    done: set[int] = set()
    while heap:
        d, o = heapq.heappop(heap)
        if o in done or d > entries[o].dist:
            continue
        done.add(o)
        for y, w in g.neighbors(o):
            if y not in inside or y in done:
                continue
            nd = d + w
            cur = entries.get(y)
            if cur is None or nd < cur.dist:
                entries[y] = TreeEntry(o, nd)
                heapq.heappush(heap, (nd, y))
    return entries


def find_jump(g: Graph, t: ShortestPathTree, x: int, u: int, o_tree: dict[int, TreeEntry]) -> JumpEdge | None:
    best: tuple | None = None
    du = t.dist[u]
    for z in t.subtree(u):
        dz = t.dist[z] - du
        for y, w in g.neighbors(z):
            if y == x or t.is_ancestor(u, y):
                continue
            if t.is_ancestor(x, y):
                entry = o_tree.get(y)
                if entry is None:
                    continue
                base = entry.dist
            elif t.reachable(y):
                base = t.dist[y]
            else:
                continue
            reach = base + w
            key = (reach + dz, y, z)
            if best is None or key < best[0]:
                best = (key, reach)
    if best is None:
        return None
    (_, y, z), reach = best
    return JumpEdge(y, z, reach)


def fail_seeds(
    g: Graph,
    t: ShortestPathTree,
    u: int,
    side: Iterable[int],
    boundary: dict[int, tuple[float, int]],
    d_value: Callable[[int], float],
) -> dict[int, tuple[float, int]]:
    """Root edges of ``G_r(O_x)``: exact ones via ``U_x`` plus approximate ones via ``D_x``."""
    seeds = dict(boundary)
    if u < 0:
        return seeds
    cache: dict[int, float] = {}
    for o in side:
        best, who = seeds.get(o, (INF, -1))
        for y, w in g.neighbors(o):
            if not t.is_ancestor(u, y):
                continue
            if y not in cache:
                cache[y] = d_value(y)
            cand = cache[y] + w
            if cand < best:
                best, who = cand, y
        if who >= 0:
            seeds[o] = (best, who)
    return seeds


def walk_side_tree(entries: dict[int, TreeEntry], v: int, head: Callable[[int], list[int]]) -> list[int]:
    """Vertices from the root to ``v`` in a side tree; ``head(witness)`` expands the shortcut."""
    chain = []
    e = entries[v]
    while True:
        chain.append(v)
        if e.parent < 0:
            break
        v = e.parent
        e = entries[v]
    return head(e.witness) + chain[::-1]


def _tree_walk(t: ShortestPathTree, z: int, v: int) -> list[int]:
    """Tree walk from ``z`` up to ``lca(z, v)`` and down to ``v``."""
    top = lca(t, z, v)
    return climb(t, z, top) + climb(t, v, top)[::-1][1:]


def build_path_structure(
    g: Graph, t: ShortestPathTree, path: tuple[int, ...], depth: int = 0, fail_trees: bool = True
) -> PathFaultStructure:
    """Records for every failure on ``path``; ``fail_trees=False`` leaves ``o_fail`` empty."""
    records: dict[int, FaultRecord] = {}
    sides: dict[int, tuple[tuple[int, ...], dict]] = {}
    # o_trees and jump edges first, the o_fail trees need every jump answer
    for i, x in enumerate(path):
        if x == t.root:
            continue
        u = path[i + 1] if i + 1 < len(path) else -1
        side = side_vertices(t, x, u)
        boundary = boundary_seeds(g, t, x, side)
        o_tree = grow_side_tree(g, set(side), boundary)
        jump = find_jump(g, t, x, u, o_tree) if u >= 0 else None
        records[x] = FaultRecord(x, u, jump, o_tree)
        sides[x] = (side, boundary)
    if fail_trees:
        for x, rec in records.items():
            side, boundary = sides[x]
            seeds = fail_seeds(g, t, rec.uchild, side, boundary, lambda d, rec=rec: jump_value(t, rec, d))
            rec.o_fail = grow_side_tree(g, set(side), seeds)
    return PathFaultStructure(path, depth, records)


def jump_value(t: ShortestPathTree, rec: FaultRecord, v: int) -> float:
    """Length of the ``D_x`` answer for ``v``: jump prefix then the tree walk ``z ~> v``."""
    j = rec.jump
    if j is None:
        return INF
    top = lca(t, j.z, v)
    return j.reach + t.dist[j.z] + t.dist[v] - 2 * t.dist[top]


class Sssp3Oracle:
    def __init__(
        self,
        graph: Graph,
        tree: ShortestPathTree,
        decomposition: PathDecomposition,
        structures: list[PathFaultStructure],
    ):
        self.graph = graph
        self.tree = tree
        self.decomposition = decomposition
        self.structures = structures
        self.records: dict[int, FaultRecord] = {}
        for s in structures:
            self.records.update(s.records)

    @property
    def root(self) -> int:
        return self.tree.root

    @property
    def entries(self) -> int:
        return sum(s.entries for s in self.structures)

    def uchild(self, x: int) -> int:
        return self.decomposition.uchild(x)

    def stats(self) -> dict[str, int]:
        return {
            "paths": len(self.structures),
            "levels": self.decomposition.levels,
            "entries": self.entries,
            "side_entries": sum(len(r.o_tree) + len(r.o_fail) for r in self.records.values()),
        }

    # queries

    def check_query(self, v: int, x: int):
        n = self.graph.n
        if not (0 <= v < n and 0 <= x < n):
            raise QueryError(f"query ({v}, {x}) outside vertex range 0..{n - 1}")
        if v == x:
            raise QueryError(f"target {v} is the failed vertex")
        if x == self.root:
            raise QueryError(f"failed vertex {x} is the source")

    def unaffected(self, v: int, x: int) -> bool:
        t = self.tree
        return not t.reachable(x) or lca(t, v, x) != x

    def in_d(self, rec: FaultRecord, v: int) -> bool:
        return rec.uchild >= 0 and self.tree.is_ancestor(rec.uchild, v)

    def prefix(self, rec: FaultRecord, y: int) -> list[int]:
        """Root-to-``y`` walk avoiding ``x`` and ``D_x`` for ``y`` outside ``D_x``."""
        if y in rec.o_tree:
            return walk_side_tree(rec.o_tree, y, self.tree_vertices)
        return self.tree_vertices(y)

    def tree_vertices(self, y: int) -> list[int]:
        return list(tree_path(self.tree, y).vertices)

    def d_walk(self, rec: FaultRecord, v: int) -> list[int]:
        j = rec.jump
        return self.prefix(rec, j.y) + _tree_walk(self.tree, j.z, v)

    def distance(self, v: int, x: int) -> float:
        self.check_query(v, x)
        t = self.tree
        if not t.reachable(v):
            return INF
        if self.unaffected(v, x):
            return t.dist[v]
        rec = self.records[x]
        if self.in_d(rec, v):
            return jump_value(t, rec, v)
        entry = rec.o_fail.get(v)
        return INF if entry is None else entry.dist

    def query(self, v: int, x: int) -> ReplacementAnswer:
        self.check_query(v, x)
        t = self.tree
        if not t.reachable(v):
            return ReplacementAnswer(INF)
        if self.unaffected(v, x):
            return ReplacementAnswer(t.dist[v], tree_path(t, v))
        rec = self.records[x]
        if self.in_d(rec, v):
            d = jump_value(t, rec, v)
            if math.isinf(d):
                return ReplacementAnswer(INF)
            return ReplacementAnswer(d, Path(tuple(self.d_walk(rec, v)), d))
        entry = rec.o_fail.get(v)
        if entry is None:
            return ReplacementAnswer(INF)

        def head(w: int) -> list[int]:
            return self.d_walk(rec, w) if self.in_d(rec, w) else self.tree_vertices(w)

        return ReplacementAnswer(entry.dist, Path(tuple(walk_side_tree(rec.o_fail, v, head)), entry.dist))

    # serialization

    def to_payload(self) -> dict:
        out = []
        for x in sorted(self.records):
            rec = self.records[x]
            jump = None if rec.jump is None else [rec.jump.y, rec.jump.z, rec.jump.reach]
            out.append({
                "x": x,
                "uchild": rec.uchild,
                "jump": jump,
                "o_tree": _entries_out(rec.o_tree),
                "o_fail": _entries_out(rec.o_fail),
            })
        return {"records": out}

    @classmethod
    def from_payload(cls, g: Graph, r: int, payload: dict) -> Sssp3Oracle:
        t = shortest_path_tree(g, r)
        dec = decompose_tree(t)
        try:
            loaded = {}
            for item in payload["records"]:
                jump = item["jump"]
                loaded[item["x"]] = FaultRecord(
                    x=item["x"],
                    uchild=item["uchild"],
                    jump=None if jump is None else JumpEdge(*jump),
                    o_tree=_entries_in(item["o_tree"]),
                    o_fail=_entries_in(item["o_fail"]),
                )
        except (KeyError, TypeError, ValueError) as e:
            raise ContainerError(f"malformed sssp3 payload: {e}") from None
        structures = []
        for pid, path in enumerate(dec.paths):
            recs = {}
            for x in path:
                if x == r:
                    continue
                rec = loaded.get(x)
                if rec is None or rec.uchild != dec.uchild(x):
                    raise ContainerError(f"sssp3 payload does not match the graph at vertex {x}")
                recs[x] = rec
            structures.append(PathFaultStructure(path, dec.depth[pid], recs))
        return cls(g, t, dec, structures)


def _entries_out(entries: dict[int, TreeEntry]) -> list[list]:
    return [[o, e.parent, e.dist, e.witness] for o, e in sorted(entries.items())]


def _entries_in(rows: list[list]) -> dict[int, TreeEntry]:
    return {o: TreeEntry(p, d, w) for o, p, d, w in rows}


def build_sssp3(g: Graph, r: int, fail_trees: bool = True) -> Sssp3Oracle:
    t = shortest_path_tree(g, r)
    dec = decompose_tree(t)
    structures = [build_path_structure(g, t, path, dec.depth[pid], fail_trees) for pid, path in enumerate(dec.paths)]
    oracle = Sssp3Oracle(g, t, dec, structures)
    log.info("sssp3 oracle: n=%d root=%d %s", g.n, r, oracle.stats())
    return oracle


def query_sssp3(o: Sssp3Oracle, v: int, x: int) -> ReplacementAnswer:
    return o.query(v, x)
