"""Sampled vertex hierarchies, fault balls and ε-truncated clusters.

``Ball^x(v, A_i, A_{i+1}, ε)`` holds the ``w ∈ A_i`` with
``δ(v, w, x) < δ(v, A_{i+1}, x) / (1 + ε)``; ``x = None`` means no failure and
``ε = 0`` gives the plain ball. Clusters are the inverse relation indexed by
the center ``w``. Distances come from :class:`FaultDistances` so a caller can
share one cache of per-failure matrices between many calls.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from dsoracle.errors import InvariantViolation, OracleError, QueryError
from dsoracle.graph import INF, Graph, search
from dsoracle.oracles.exact import FaultDistances, nearest_in_set

log = logging.getLogger(__name__)

MAX_RESAMPLES = 1000


@dataclass(frozen=True)
class SampleHierarchy:
    """``A_0 = V ⊇ A_1 ⊇ … ⊇ A_{k-1}``; ``A_k`` is empty and not stored."""

    n: int
    k: int
    seed: int
    attempts: int
    levels: tuple[frozenset[int], ...]

    def members(self, i: int) -> frozenset[int]:
        if i >= self.k:
            return frozenset()
        return self.levels[i]

    def sizes(self) -> list[int]:
        return [len(a) for a in self.levels]

    @classmethod
    def from_levels(cls, n: int, levels, seed: int = 0, attempts: int = 1) -> SampleHierarchy:
        sets = tuple(frozenset(a) for a in levels)
        if not sets or sets[0] != frozenset(range(n)):
            raise ValueError("A_0 must be the whole vertex set")
        for hi, lo in zip(sets, sets[1:]):
            if not lo <= hi:
                raise ValueError("hierarchy levels must be nested")
        return cls(n, len(sets), seed, attempts, sets)


def sample_hierarchy(n: int, k: int, seed: int = 42) -> SampleHierarchy:
    """Keep each vertex of ``A_{i-1}`` in ``A_i`` with probability ``n^{-1/k}``.

    An empty ``A_{k-1}`` is redrawn with the next sub-seed; ``attempts``
    records how many draws were needed.
    """
    if k <= 1:
        raise ValueError(f"k must be > 1, got {k}")
    if n <= 0:
        raise ValueError(f"vertex count must be positive, got {n}")
    p = n ** (-1.0 / k)
    for attempt in itertools.count():
        if attempt >= MAX_RESAMPLES:
            raise OracleError(f"could not draw a non-empty A_{k - 1} in {MAX_RESAMPLES} attempts")
        rng = np.random.default_rng([seed, attempt])
        current = np.arange(n)
        levels = [frozenset(range(n))]
        for _ in range(1, k):
            current = current[rng.random(current.size) < p]
            levels.append(frozenset(current.tolist()))
        if levels[-1]:
            break
    if attempt:
        log.debug("hierarchy redrawn %d time(s) for seed %d", attempt, seed)
    return SampleHierarchy(n, k, seed, attempt + 1, tuple(levels))


def _index(members) -> np.ndarray:
    return np.asarray(sorted(members), dtype=np.int64)


def set_radius(dist: np.ndarray, members) -> np.ndarray:
    """``δ(v, B)`` for every row ``v`` of a distance matrix; ``inf`` for an empty ``B``."""
    idx = _index(members)
    if idx.size == 0:
        return np.full(dist.shape[0], np.inf)
    return dist[:, idx].min(axis=1)


@dataclass(frozen=True)
class BallRecord:
    v: int
    level: int
    failed: int | None
    epsilon: float
    radius: float
    members: dict[int, float]

    def __contains__(self, w: int) -> bool:
        return w in self.members

    def __len__(self) -> int:
        return len(self.members)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.members)


def _distances(g: Graph, distances: FaultDistances | None) -> FaultDistances:
    return distances if distances is not None else FaultDistances(g)


def fault_ball(
    g: Graph,
    h: SampleHierarchy,
    v: int,
    i: int,
    x: int | None = None,
    epsilon: float = 0.0,
    distances: FaultDistances | None = None,
) -> BallRecord:
    if x is not None and x == v:
        raise QueryError(f"ball centre {v} is the failed vertex")
    if not 0 <= i < h.k:
        raise QueryError(f"level {i} outside 0..{h.k - 1}")
    row = _distances(g, distances)(x)[v]
    radius, _ = nearest_in_set(row, h.members(i + 1))
    bound = radius / (1 + epsilon)
    members = {
        w: _as_number(row[w])
        for w in sorted(h.members(i))
        if w != x and row[w] < bound
    }
    return BallRecord(v, i, x, epsilon, radius, members)


def _as_number(d) -> int | float:
    d = float(d)
    return int(d) if d.is_integer() else d


def ball(g: Graph, h: SampleHierarchy, v: int, i: int, distances: FaultDistances | None = None) -> BallRecord:
    return fault_ball(g, h, v, i, None, 0.0, distances)


def truncated_fault_ball(
    g: Graph,
    h: SampleHierarchy,
    v: int,
    i: int,
    x: int | None,
    epsilon: float,
    distances: FaultDistances | None = None,
) -> BallRecord:
    return fault_ball(g, h, v, i, x, epsilon, distances)


def fault_cluster(
    g: Graph,
    h: SampleHierarchy,
    w: int,
    i: int,
    x: int | None = None,
    epsilon: float = 0.0,
    distances: FaultDistances | None = None,
) -> frozenset[int]:
    """``C^x(w, A_i, A_{i+1}, ε)``: the vertices whose ball contains ``w``."""
    if w not in h.members(i) or w == x:
        return frozenset()
    dist = _distances(g, distances)(x)
    bound = set_radius(dist, h.members(i + 1)) / (1 + epsilon)
    mask = dist[:, w] < bound
    if x is not None:
        mask[x] = False
    return frozenset(np.flatnonzero(mask).tolist())


def cluster(g: Graph, h: SampleHierarchy, w: int, i: int, distances: FaultDistances | None = None) -> frozenset[int]:
    return fault_cluster(g, h, w, i, None, 0.0, distances)


def truncated_fault_cluster(
    g: Graph,
    h: SampleHierarchy,
    w: int,
    i: int,
    x: int | None,
    epsilon: float,
    distances: FaultDistances | None = None,
) -> frozenset[int]:
    return fault_cluster(g, h, w, i, x, epsilon, distances)


def cluster_vertex_sets(
    g: Graph, h: SampleHierarchy, epsilon: float, distances: FaultDistances | None = None
) -> list[dict[int, tuple[int, ...]]]:
    """Per level ``i`` and centre ``w ∈ A_i``: ``∪_x C^x(w, A_i, A_{i+1}, ε)`` over ``x ∈ V ∪ {None}``.

    Streams one distance matrix per failure unless ``distances`` caches them.
    """
    n = g.n
    dist_of = distances if distances is not None else FaultDistances(g, cache=False)
    centres = [_index(h.members(i)) for i in range(h.k)]
    union = [np.zeros((n, c.size), dtype=bool) for c in centres]
    for x in itertools.chain([None], range(n)):
        dist = dist_of(x)
        for i in range(h.k):
            if centres[i].size == 0:
                continue
            bound = set_radius(dist, h.members(i + 1)) / (1 + epsilon)
            mask = dist[:, centres[i]] < bound[:, None]
            if x is not None:
                mask[x, :] = False
                mask[:, centres[i] == x] = False
            union[i] |= mask
    out = []
    for i in range(h.k):
        level = {}
        for col, w in enumerate(centres[i].tolist()):
            members = np.flatnonzero(union[i][:, col])
            if members.size:
                level[w] = tuple(members.tolist())
        out.append(level)
    return out


def ball_size_profile(g: Graph, h: SampleHierarchy, distances: FaultDistances | None = None) -> list[int]:
    """``max_{v, x} |Ball^x(v, A_i, A_{i+1})|`` per level, ``x = None`` included."""
    dist_of = distances if distances is not None else FaultDistances(g, cache=False)
    best = [0] * h.k
    for x in itertools.chain([None], range(g.n)):
        dist = dist_of(x)
        for i in range(h.k):
            idx = _index(h.members(i))
            if idx.size == 0:
                continue
            radius = set_radius(dist, h.members(i + 1))
            inside = dist[:, idx] < radius[:, None]
            if x is not None:
                inside[x, :] = False
                inside[:, idx == x] = False
            best[i] = max(best[i], int(inside.sum(axis=1).max()))
    return best


@dataclass(frozen=True)
class WitnessSet:
    """Failures on ``P(v, p_{i+1}(v))`` whose plain fault balls cover every truncated one."""

    v: int
    level: int
    epsilon: float
    path: tuple[int, ...]
    values: tuple[float, ...]  # value(path[j]) = δ(v, A_{i+1}, path[j]) for j >= 1
    h: float
    chosen: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.chosen)


def nearest_sample_path(
    g: Graph, h: SampleHierarchy, v: int, i: int, distances: FaultDistances | None = None
) -> tuple[int, ...]:
    """Shortest path from ``v`` to ``p_{i+1}(v)``; just ``(v,)`` when there is none."""
    row = _distances(g, distances)(None)[v]
    _, p = nearest_in_set(row, h.members(i + 1))
    if p < 0:
        return (v,)
    _, parent = search(g, v)
    walk = [p]
    while walk[-1] != v:
        walk.append(parent[walk[-1]])
    return tuple(reversed(walk))


def witness_set(
    g: Graph,
    h: SampleHierarchy,
    v: int,
    i: int,
    epsilon: float,
    distances: FaultDistances | None = None,
) -> WitnessSet:
    dist_of = _distances(g, distances)
    path = nearest_sample_path(g, h, v, i, dist_of)
    targets = h.members(i + 1)
    values = tuple(nearest_in_set(dist_of(x)[v], targets)[0] for x in path[1:])
    top = max(values, default=0)
    if epsilon == 0:
        return WitnessSet(v, i, epsilon, path, values, top, path[1:])

    chosen: list[int] = []
    start = 0  # index into values
    if math.isinf(top):
        last = max(j for j, val in enumerate(values) if math.isinf(val))
        chosen.append(path[last + 1])
        start = last + 1
    peak = max(values[start:], default=0)  # finite past the last inf
    step = 1
    while start < len(values):
        threshold = peak / (1 + epsilon) ** step
        hits = [j for j in range(start, len(values)) if values[j] >= threshold]
        if hits:
            chosen.append(path[hits[-1] + 1])
            start = hits[-1] + 1
        step += 1
    return WitnessSet(v, i, epsilon, path, values, top, tuple(chosen))


@dataclass(frozen=True)
class TruncatedBallUnion:
    v: int
    level: int
    epsilon: float
    members: frozenset[int]  # ∪_x Ball^x(v, A_i, A_{i+1}, ε), brute force
    witness: WitnessSet
    cover: frozenset[int]  # Ball(v) ∪ ∪_{x ∈ S} Ball^x(v)


def truncated_ball_union(
    g: Graph,
    h: SampleHierarchy,
    v: int,
    i: int,
    epsilon: float,
    distances: FaultDistances | None = None,
) -> TruncatedBallUnion:
    """Brute-force union of truncated balls, checked against the witness-set cover."""
    if not 0 <= i < h.k - 1:
        raise QueryError(f"level {i} outside 0..{h.k - 2}")
    dist_of = _distances(g, distances)
    members: set[int] = set()
    for x in itertools.chain([None], range(g.n)):
        if x == v:
            continue
        members |= truncated_fault_ball(g, h, v, i, x, epsilon, dist_of).vertices
    ws = witness_set(g, h, v, i, epsilon, dist_of)
    cover = set(ball(g, h, v, i, dist_of).vertices)
    for x in ws.chosen:
        cover |= fault_ball(g, h, v, i, x, 0.0, dist_of).vertices
    missing = members - cover
    if missing:
        raise InvariantViolation(f"witness set of vertex {v} at level {i} misses ball members", *sorted(missing))
    return TruncatedBallUnion(v, i, epsilon, frozenset(members), ws, frozenset(cover))


def check_ball_pair(
    g: Graph,
    h: SampleHierarchy,
    v: int,
    i: int,
    x1: int,
    x2: int,
    epsilon: float,
    distances: FaultDistances | None = None,
) -> bool:
    """Subset check for two failures on ``P(v, p_{i+1}(v))`` with ``x1`` nearer to ``v``.

    Returns ``False`` when the premise ``value(x1) <= (1+ε) value(x2)`` does not
    hold; raises :class:`InvariantViolation` when it holds but
    ``Ball^{x1}(ε) ⊆ Ball ∪ Ball^{x2}`` fails.
    """
    dist_of = _distances(g, distances)
    path = nearest_sample_path(g, h, v, i, dist_of)
    if x1 not in path[1:] or x2 not in path[1:] or path.index(x1) >= path.index(x2):
        raise QueryError(f"{x1} and {x2} must lie on P({v}, p_{i + 1}({v})) in that order")
    targets = h.members(i + 1)
    v1 = nearest_in_set(dist_of(x1)[v], targets)[0]
    v2 = nearest_in_set(dist_of(x2)[v], targets)[0]
    if not v1 <= (1 + epsilon) * v2:
        return False
    inner = fault_ball(g, h, v, i, x1, epsilon, dist_of).vertices
    outer = ball(g, h, v, i, dist_of).vertices | fault_ball(g, h, v, i, x2, 0.0, dist_of).vertices
    if not inner <= outer:
        raise InvariantViolation("truncated ball escapes the pair cover", v, x1, x2)
    return True


def validate_witness_sets(g: Graph, h: SampleHierarchy, epsilon: float, distances: FaultDistances | None = None) -> int:
    """Run :func:`truncated_ball_union` for every ``(v, i < k-1)``; returns the largest witness set."""
    dist_of = _distances(g, distances)
    largest = 0
    for i in range(h.k - 1):
        for v in range(g.n):
            largest = max(largest, len(truncated_ball_union(g, h, v, i, epsilon, dist_of).witness))
    return largest
