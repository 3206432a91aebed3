"""Single-source (1+ε)-approximate replacement paths for unweighted graphs.

Wraps the 3-approximate oracle. Whenever ``uchild(x)`` sits far above the
target ``v`` the 3-approximate ``D_x`` answer is too coarse, so selected
*special* vertices store compressed detour records for the failures of their
ancestors and ``v`` borrows the record of its nearest special ancestor.

All sub-structures run at the internal accuracy ``ε' = ε / 6``.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from dsoracle.errors import ContainerError, InvariantViolation, UnweightedRequiredError
from dsoracle.graph import INF, Graph, Path, ShortestPathTree, climb, path_weight, search, tree_path
from dsoracle.oracles.exact import ReplacementAnswer
from dsoracle.oracles.sssp3 import (
    Sssp3Oracle,
    TreeEntry,
    boundary_seeds,
    build_sssp3,
    fail_seeds,
    grow_side_tree,
    jump_value,
    side_vertices,
    walk_side_tree,
)

log = logging.getLogger(__name__)

INTERNAL_DIVISOR = 6


def candidate_levels(height: int, epsilon: float) -> tuple[int, ...]:
    """Distinct values ``⌊(1+ε)^i⌋`` for ``i >= 0`` that do not exceed ``height``."""
    out: list[int] = []
    i = 0
    while (lvl := math.floor((1 + epsilon) ** i)) <= height:
        if not out or out[-1] != lvl:
            out.append(lvl)
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class SpecialVertexSet:
    epsilon: float
    height: int
    levels: tuple[int, ...]
    special: frozenset[int]
    nearest: tuple[int, ...]  # S(v): nearest special proper ancestor, -1 if none
    claimed: dict[int, tuple[int, ...]]  # V(u), u included
    level_of: dict[int, int]

    def __contains__(self, v: int) -> bool:
        return v in self.special

    def __len__(self) -> int:
        return len(self.special)

    def owner(self, v: int) -> int:
        return v if v in self.special else self.nearest[v]

    def by_level(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for u in sorted(self.special):
            out.setdefault(self.level_of[u], []).append(u)
        return {k: tuple(v) for k, v in sorted(out.items())}


def compute_special_vertices(t: ShortestPathTree, epsilon: float, check: bool = True) -> SpecialVertexSet:
    """Vertices at a level ``⌊(1+ε)^i⌋`` whose subtree holds at least ``ε·level`` vertices.

    With ``check`` both amortisation lemmas are asserted and an
    :class:`InvariantViolation` names the first offending vertex.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    h = t.height
    levels = candidate_levels(h, epsilon)
    wanted = set(levels)
    special = frozenset(
        u for u in t.order if t.level[u] in wanted and t.size[u] >= epsilon * t.level[u]
    )

    nearest = [-1] * t.n
    for v in t.order:  # preorder: parents first
        p = t.parent[v]
        if v == t.root:
            continue
        nearest[v] = p if p in special else nearest[p]

    claimed: dict[int, list[int]] = {u: [u] for u in special}
    for v in t.order:
        if v not in special and nearest[v] >= 0:
            claimed[nearest[v]].append(v)

    out = SpecialVertexSet(
        epsilon=epsilon,
        height=h,
        levels=levels,
        special=special,
        nearest=tuple(nearest),
        claimed={u: tuple(sorted(vs)) for u, vs in claimed.items()},
        level_of={u: t.level[u] for u in special},
    )
    if check:
        check_special_lemmas(t, out)
    return out


def check_special_lemmas(t: ShortestPathTree, sv: SpecialVertexSet):
    eps = sv.epsilon
    for v in t.order:
        if v == t.root or v in sv.special or sv.nearest[v] < 0:
            continue
        gap = t.level[v] - t.level[sv.nearest[v]]
        if gap * (1 + eps) > 2 * eps * t.level[v] + 1e-9:
            raise InvariantViolation(
                f"special ancestor too far: {gap} > 2ε/(1+ε)·{t.level[v]}", v, sv.nearest[v]
            )
    for u in sv.special:
        need = max(1, math.floor(eps * t.level[u] + 1e-9))
        if len(sv.claimed[u]) < need:
            raise InvariantViolation(f"special vertex claims {len(sv.claimed[u])} < {need} vertices", u)


@dataclass(frozen=True)
class Detour:
    """Canonical ``P(r, w, x) = P(r, a) :: p_ab :: P(b, w)``; ``inner`` excludes ``a`` and ``b``."""

    kind: str  # "I", "II" or "unreachable"
    length: float
    a: int = -1
    b: int = -1
    inner: tuple[int, ...] = ()

    def vertices(self, t: ShortestPathTree, w: int) -> list[int]:
        return list(tree_path(t, self.a).vertices) + list(self.inner) + climb(t, w, self.b)[::-1]


def classify_detour(
    g: Graph,
    t: ShortestPathTree,
    w: int,
    x: int,
    w_prev: int,
    searched: tuple[list[float], list[int]] | None = None,
) -> Detour:
    """Locate the detour of ``P(r, w, x)`` and type it against the previous special ancestor.

    ``searched`` may carry a precomputed ``search(g, r, avoid=x)`` result.
    """
    dist, parent = searched if searched is not None else search(g, t.root, avoid=x)
    if math.isinf(dist[w]):
        return Detour("unreachable", INF)
    seq = [w]
    while seq[-1] != t.root:
        seq.append(parent[seq[-1]])
    seq.reverse()
    i = max(j for j, y in enumerate(seq) if y != x and t.is_ancestor(y, x))
    j = next(j for j in range(i + 1, len(seq)) if t.is_ancestor(x, seq[j]) and t.is_ancestor(seq[j], w))
    a, b = seq[i], seq[j]
    length = t.dist[a] + path_weight(g, seq[i:j + 1]) + t.dist[w] - t.dist[b]
    kind = "I" if w_prev >= 0 and t.is_ancestor(b, w_prev) else "II"
    return Detour(kind, length, a, b, tuple(seq[i + 1:j]))


class RecordKind(str, Enum):
    UNREACHABLE = "unreachable"
    TYPE_I_REF = "type-i"
    TYPE_II_PATH = "type-ii"
    LONG_REF = "long"
    PRUNED_REF = "pruned"


@dataclass(frozen=True)
class DetourRecord:
    """Stored at a special vertex for one failed ancestor.

    ``target`` is the special ancestor for ``TYPE_I_REF`` and the failure whose
    explicit path is reused for ``PRUNED_REF``. ``covers`` is the level range of
    failures an explicit path serves.
    """

    kind: RecordKind
    target: int = -1
    detour: Detour | None = None
    covers: tuple[int, int] | None = None

    @property
    def entries(self) -> int:
        return 1 + (len(self.detour.inner) + 2 if self.detour is not None else 0)


def _highest_special_below(t: ShortestPathTree, sv: SpecialVertexSet, start: int, floor_level: int) -> int:
    best = start
    s = sv.nearest[start]
    while s >= 0 and t.level[s] >= floor_level:
        best = s
        s = sv.nearest[s]
    return best


def build_detour_records(
    g: Graph, base: Sssp3Oracle, sv: SpecialVertexSet
) -> dict[int, dict[int, DetourRecord]]:
    """Records ``rec[w][x]`` for every special ``w`` and failed ancestor ``x`` with ``w ∈ D_x``."""
    t = base.tree
    eps = sv.epsilon
    detours: dict[int, dict[int, Detour]] = {w: {} for w in sv.special}
    for x in t.order:
        u = base.uchild(x)
        if x == t.root or u < 0:
            continue
        targets = [w for w in t.subtree(u) if w in sv.special]
        if not targets:
            continue
        searched = search(g, t.root, avoid=x)
        for w in targets:
            detours[w][x] = classify_detour(g, t, w, x, sv.nearest[w], searched)

    records: dict[int, dict[int, DetourRecord]] = {}
    for w in sorted(sv.special):
        recs: dict[int, DetourRecord] = {}
        wp = sv.nearest[w]
        far: list[tuple[int, Detour]] = []
        for x in climb(t, w, t.root)[::-1]:  # increasing level
            d = detours[w].get(x)
            if d is None:
                continue
            if d.kind == "unreachable":
                recs[x] = DetourRecord(RecordKind.UNREACHABLE)
            elif d.kind == "I":
                target = _highest_special_below(t, sv, wp, t.level[d.b])
                recs[x] = DetourRecord(RecordKind.TYPE_I_REF, target=target)
            elif wp >= 0 and x != wp and t.is_ancestor(x, wp):
                far.append((x, d))
            elif base.distance(w, x) <= (1 + 2 * eps) * d.length:
                recs[x] = DetourRecord(RecordKind.LONG_REF)
            else:
                recs[x] = DetourRecord(RecordKind.TYPE_II_PATH, detour=d, covers=(t.level[x], t.level[x]))

        for (x1, d1), (x2, d2) in zip(far, far[1:]):
            if d2.length > d1.length:
                raise InvariantViolation(
                    f"type-II replacement distances increase along the tree path ({d1.length} < {d2.length})",
                    w, x1, x2,
                )
        kept = -1
        kept_len = INF
        for x, d in far:
            if d.length * eps >= t.level[w]:
                recs[x] = DetourRecord(RecordKind.LONG_REF)
            elif kept < 0 or d.length * (1 + eps) < kept_len:
                recs[x] = DetourRecord(RecordKind.TYPE_II_PATH, detour=d, covers=(t.level[x], t.level[x]))
                kept, kept_len = x, d.length
            else:
                if x in recs[kept].detour.vertices(t, w) or kept_len > (1 + eps) * d.length + 1e-9:
                    raise InvariantViolation(
                        f"pruned record cannot reuse the kept path ({kept_len} vs {d.length})", w, x, kept
                    )
                recs[x] = DetourRecord(RecordKind.PRUNED_REF, target=kept)
                lo, _ = recs[kept].covers
                recs[kept] = DetourRecord(RecordKind.TYPE_II_PATH, detour=recs[kept].detour, covers=(lo, t.level[x]))
        records[w] = recs
    return records


class SsspEpsOracle:
    def __init__(
        self,
        base: Sssp3Oracle,
        epsilon: float,
        special: SpecialVertexSet,
        records: dict[int, dict[int, DetourRecord]],
        o_fail: dict[int, dict[int, TreeEntry]] | None = None,
    ):
        self.base = base
        self.epsilon = epsilon
        self.internal_epsilon = special.epsilon
        self.special = special
        self.records = records
        self.o_fail = o_fail if o_fail is not None else self._build_o_fail()

    @property
    def graph(self) -> Graph:
        return self.base.graph

    @property
    def tree(self) -> ShortestPathTree:
        return self.base.tree

    @property
    def root(self) -> int:
        return self.base.root

    @property
    def special_vertices(self) -> frozenset[int]:
        return self.special.special

    @property
    def entries(self) -> int:
        return (
            self.base.entries
            + sum(rec.entries for recs in self.records.values() for rec in recs.values())
            + sum(len(e) for e in self.o_fail.values())
        )

    def stats(self) -> dict[str, int]:
        kinds = Counter(rec.kind.value for recs in self.records.values() for rec in recs.values())
        return {
            "special": len(self.special),
            "entries": self.entries,
            "kept_type_ii": kinds.get(RecordKind.TYPE_II_PATH.value, 0),
            **{f"records_{k}": kinds[k] for k in sorted(kinds)},
        }

    def _build_o_fail(self) -> dict[int, dict[int, TreeEntry]]:
        g, t = self.graph, self.tree
        out = {}
        for x, rec in self.base.records.items():
            side = side_vertices(t, x, rec.uchild)
            if not side:
                continue
            seeds = fail_seeds(
                g, t, rec.uchild, side, boundary_seeds(g, t, x, side),
                lambda d, x=x: self._d_answer(d, x, with_path=False)[0],
            )
            out[x] = grow_side_tree(g, set(side), seeds)
        return out

    def _resolve(self, w: int, x: int, with_path: bool) -> tuple[float, list[int] | None, int]:
        """Record answer for special ``w``: ``(length, walk, w_end)`` where the walk ends at ``w_end``."""
        t = self.tree
        while True:
            rec = self.records[w][x]
            if rec.kind is RecordKind.TYPE_I_REF:
                w = rec.target
                continue
            if rec.kind is RecordKind.PRUNED_REF:
                rec = self.records[w][rec.target]
            break
        if rec.kind is RecordKind.UNREACHABLE:
            return INF, None, w
        if rec.kind is RecordKind.LONG_REF:
            base_rec = self.base.records[x]
            d = jump_value(t, base_rec, w)
            if math.isinf(d):
                return INF, None, w
            return d, (self.base.d_walk(base_rec, w) if with_path else None), w
        d = rec.detour
        return d.length, (d.vertices(t, w) if with_path else None), w

    def _d_answer(self, v: int, x: int, with_path: bool) -> tuple[float, list[int] | None]:
        t = self.tree
        base_rec = self.base.records[x]
        u = base_rec.uchild
        eps = self.internal_epsilon
        w = self.special.owner(v)
        close = t.level[v] - t.level[u] <= eps / 2 * t.level[v]
        if close or w < 0 or t.level[w] < t.level[u]:
            d = jump_value(t, base_rec, v)
            if math.isinf(d) or not with_path:
                return d, None
            return d, self.base.d_walk(base_rec, v)
        value, walk, end = self._resolve(w, x, with_path)
        if math.isinf(value):
            return INF, None
        value += t.dist[v] - t.dist[end]
        if with_path:
            walk = walk + climb(t, v, end)[::-1][1:]
        return value, walk

    def distance(self, v: int, x: int) -> float:
        return self._answer(v, x, with_path=False).distance

    def query(self, v: int, x: int) -> ReplacementAnswer:
        return self._answer(v, x, with_path=True)

    def _answer(self, v: int, x: int, with_path: bool) -> ReplacementAnswer:
        base = self.base
        base.check_query(v, x)
        t = self.tree
        if not t.reachable(v):
            return ReplacementAnswer(INF)
        if base.unaffected(v, x):
            return ReplacementAnswer(t.dist[v], tree_path(t, v) if with_path else None)
        rec = base.records[x]
        if base.in_d(rec, v):
            d, walk = self._d_answer(v, x, with_path)
        else:
            entry = self.o_fail.get(x, {}).get(v)
            if entry is None:
                return ReplacementAnswer(INF)
            d, walk = entry.dist, None
            if with_path:
                def head(y: int) -> list[int]:
                    if base.in_d(rec, y):
                        return self._d_answer(y, x, True)[1]
                    return base.tree_vertices(y)

                walk = walk_side_tree(self.o_fail[x], v, head)
        if math.isinf(d):
            return ReplacementAnswer(INF)
        return ReplacementAnswer(d, Path(tuple(walk), d) if walk is not None else None)

    # serialization

    def to_payload(self) -> dict:
        rows = []
        for w in sorted(self.records):
            for x in sorted(self.records[w]):
                rec = self.records[w][x]
                d = rec.detour
                rows.append([
                    w, x, rec.kind.value, rec.target,
                    None if d is None else [d.kind, d.length, d.a, d.b, list(d.inner)],
                    None if rec.covers is None else list(rec.covers),
                ])
        o_fail = [
            [x, [[o, e.parent, e.dist, e.witness] for o, e in sorted(entries.items())]]
            for x, entries in sorted(self.o_fail.items())
        ]
        return {"base": self.base.to_payload(), "records": rows, "o_fail": o_fail}

    @classmethod
    def from_payload(cls, g: Graph, r: int, epsilon: float, payload: dict) -> SsspEpsOracle:
        base = Sssp3Oracle.from_payload(g, r, payload["base"])
        sv = compute_special_vertices(base.tree, epsilon / INTERNAL_DIVISOR)
        try:
            records: dict[int, dict[int, DetourRecord]] = {w: {} for w in sv.special}
            for w, x, kind, target, det, covers in payload["records"]:
                detour = None if det is None else Detour(det[0], det[1], det[2], det[3], tuple(det[4]))
                records[w][x] = DetourRecord(
                    RecordKind(kind), target, detour, None if covers is None else tuple(covers)
                )
            o_fail = {
                x: {o: TreeEntry(p, d, wit) for o, p, d, wit in rows}
                for x, rows in payload["o_fail"]
            }
        except (KeyError, TypeError, ValueError) as e:
            raise ContainerError(f"malformed sssp-eps payload: {e}") from None
        return cls(base, epsilon, sv, records, o_fail)


def build_sssp_eps(g: Graph, r: int, epsilon: float) -> SsspEpsOracle:
    if not g.unweighted:
        raise UnweightedRequiredError("sssp-eps")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    # the base only answers inside D_x here; O_x is served by the oracle's own trees
    base = build_sssp3(g, r, fail_trees=False)
    sv = compute_special_vertices(base.tree, epsilon / INTERNAL_DIVISOR)
    records = build_detour_records(g, base, sv)
    oracle = SsspEpsOracle(base, epsilon, sv, records)
    log.info("sssp-eps oracle: n=%d root=%d epsilon=%g %s", g.n, r, epsilon, oracle.stats())
    return oracle


def query_sssp_eps(o: SsspEpsOracle, v: int, x: int) -> ReplacementAnswer:
    return o.query(v, x)
