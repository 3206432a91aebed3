"""All-pairs (2k-1)(1+ε)-approximate distances avoiding one failed vertex.

Unweighted graphs only. The structure keeps

* a sampled hierarchy ``A_0 ⊇ … ⊇ A_{k-1}``,
* for every centre ``w ∈ A_i`` a (1+ε) single-source oracle rooted at ``w``
  on the subgraph induced by its ε-truncated cluster union,
* for ``i >= 1`` an index ``N_i``: a (1+ε) single-source oracle rooted at a
  virtual vertex joined to all of ``A_i``, which yields an approximately
  nearest ``A_i`` vertex avoiding the failure.

Queries bounce between the two endpoints, climbing one level per bounce, and
make at most ``2k - 1`` sub-oracle probes.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from dsoracle.errors import ContainerError, QueryError, UnweightedRequiredError
from dsoracle.graph import INF, Graph, Path, Subgraph, induced_subgraph, tree_path
from dsoracle.oracles.balls import SampleHierarchy, cluster_vertex_sets, sample_hierarchy, validate_witness_sets
from dsoracle.oracles.exact import FaultDistances, ReplacementAnswer
from dsoracle.oracles.sssp_eps import SsspEpsOracle, build_sssp_eps

log = logging.getLogger(__name__)

DEFAULT_VALIDATE_CUTOFF = 80


def internal_epsilon(epsilon: float, k: int) -> float:
    return epsilon / (4 * k)


@dataclass
class ClusterOracle:
    level: int
    center: int
    sub: Subgraph
    oracle: SsspEpsOracle

    @property
    def entries(self) -> int:
        return len(self.sub.vertices) + self.oracle.entries

    def probe(self, b: int, x: int, with_path: bool) -> tuple[float, list[int] | None]:
        """Distance from the centre to ``b`` avoiding ``x`` inside the cluster graph."""
        lb = self.sub.local.get(b)
        if lb is None or x == self.center:
            return INF, None
        lx = self.sub.local.get(x)
        if lx is None:
            t = self.oracle.tree
            if not t.reachable(lb):
                return INF, None
            d = t.dist[lb]
            walk = tree_path(t, lb).vertices if with_path else None
        else:
            ans = self.oracle.query(lb, lx) if with_path else None
            d = ans.distance if ans is not None else self.oracle.distance(lb, lx)
            walk = ans.path.vertices if ans is not None and ans.path is not None else None
        if math.isinf(d):
            return INF, None
        return d, ([self.sub.vertices[i] for i in walk] if walk is not None else None)


@dataclass(frozen=True)
class NearestHit:
    vertex: int
    distance: float
    walk: tuple[int, ...] | None  # from the query vertex to ``vertex``


@dataclass
class NearestSampler:
    """``N_i``: approximate ``p_i^x(v)`` through a virtual root joined to ``A_i``."""

    level: int
    oracle: SsspEpsOracle

    @property
    def source(self) -> int:
        return self.oracle.root

    @property
    def entries(self) -> int:
        return self.oracle.entries

    def nearest(self, v: int, x: int, with_path: bool = False) -> NearestHit:
        ans = self.oracle.query(v, x)
        if not ans.reachable:
            return NearestHit(-1, INF, None)
        verts = ans.path.vertices  # virtual root, p, ..., v
        walk = tuple(reversed(verts[1:])) if with_path else None
        return NearestHit(verts[1], ans.distance - 1, walk)


def sampler_graph(g: Graph, members) -> Graph:
    s = g.n
    return Graph(g.n + 1, list(g.edges) + [(a, s, 1) for a in sorted(members)])


class ApaspOracle:
    def __init__(
        self,
        graph: Graph,
        k: int,
        epsilon: float,
        hierarchy: SampleHierarchy,
        clusters: dict[tuple[int, int], ClusterOracle],
        samplers: dict[int, NearestSampler],
    ):
        self.graph = graph
        self.k = k
        self.epsilon = epsilon
        self.internal_epsilon = internal_epsilon(epsilon, k)
        self.hierarchy = hierarchy
        self.clusters = clusters
        self.samplers = samplers

    @property
    def seed(self) -> int:
        return self.hierarchy.seed

    @property
    def entries(self) -> int:
        return (
            sum(self.hierarchy.sizes())
            + sum(c.entries for c in self.clusters.values())
            + sum(s.entries for s in self.samplers.values())
        )

    def stats(self) -> dict[str, int]:
        out = {
            "entries": self.entries,
            "attempts": self.hierarchy.attempts,
            "clusters": len(self.clusters),
        }
        for i in range(self.k):
            sizes = [len(c.sub.vertices) for (lvl, _), c in self.clusters.items() if lvl == i]
            out[f"A{i}"] = len(self.hierarchy.members(i))
            out[f"max_cluster_{i}"] = max(sizes, default=0)
        return out

    def _check(self, u: int, v: int, x: int):
        n = self.graph.n
        if not all(0 <= a < n for a in (u, v, x)):
            raise QueryError(f"query ({u}, {v}, {x}) outside vertex range 0..{n - 1}")
        if u == x or v == x:
            raise QueryError(f"endpoint equals the failed vertex {x}")

    def _probe(self, i: int, w: int, b: int, x: int, with_path: bool):
        c = self.clusters.get((i, w))
        if c is None:
            return INF, None
        return c.probe(b, x, with_path)

    def query(self, u: int, v: int, x: int, with_path: bool = True) -> ReplacementAnswer:
        self._check(u, v, x)
        if u == v:
            return ReplacementAnswer(0, Path((u,), 0) if with_path else None, 0)
        a, b = u, v
        w, acc, lead = u, 0, (u,)
        probes = 0
        for i in range(self.k):
            t, walk = self._probe(i, w, b, x, with_path)
            probes += 1
            if i < self.k - 1:
                hit = self.samplers[i + 1].nearest(b, x, with_path)
                probes += 1
                if not t < hit.distance:
                    if hit.vertex < 0:
                        return ReplacementAnswer(INF, None, probes)
                    a, b = b, a
                    w, acc, lead = hit.vertex, hit.distance, hit.walk
                    continue
            if math.isinf(t):
                return ReplacementAnswer(INF, None, probes)
            d = acc + t
            path = None
            if with_path:
                verts = tuple(lead) + tuple(walk[1:])
                if a != u:
                    verts = verts[::-1]
                path = Path(verts, d)
            return ReplacementAnswer(d, path, probes)
        raise AssertionError("unreachable: the top level always answers")

    def distance(self, u: int, v: int, x: int) -> float:
        return self.query(u, v, x, with_path=False).distance

    # serialization

    def to_payload(self) -> dict:
        return {
            "hierarchy": {
                "attempts": self.hierarchy.attempts,
                "levels": [sorted(a) for a in self.hierarchy.levels],
            },
            "clusters": [
                {
                    "level": i,
                    "center": w,
                    "vertices": list(c.sub.vertices),
                    "oracle": c.oracle.to_payload(),
                }
                for (i, w), c in sorted(self.clusters.items())
            ],
            "samplers": [
                {"level": i, "oracle": s.oracle.to_payload()} for i, s in sorted(self.samplers.items())
            ],
        }

    @classmethod
    def from_payload(cls, g: Graph, k: int, epsilon: float, seed: int, payload: dict) -> ApaspOracle:
        phi = internal_epsilon(epsilon, k)
        try:
            h = SampleHierarchy.from_levels(
                g.n, payload["hierarchy"]["levels"], seed, payload["hierarchy"]["attempts"]
            )
            if h.k != k:
                raise ValueError(f"hierarchy has {h.k} levels, expected {k}")
            clusters = {}
            for item in payload["clusters"]:
                sub = induced_subgraph(g, item["vertices"])
                oracle = SsspEpsOracle.from_payload(sub.graph, sub.local[item["center"]], phi, item["oracle"])
                clusters[(item["level"], item["center"])] = ClusterOracle(item["level"], item["center"], sub, oracle)
            samplers = {}
            for item in payload["samplers"]:
                i = item["level"]
                sg = sampler_graph(g, h.members(i))
                samplers[i] = NearestSampler(i, SsspEpsOracle.from_payload(sg, g.n, phi, item["oracle"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ContainerError(f"malformed apasp payload: {e}") from None
        return cls(g, k, epsilon, h, clusters, samplers)


def build_apasp(
    g: Graph,
    k: int = 2,
    epsilon: float = 0.5,
    seed: int = 42,
    validate: bool | None = None,
) -> ApaspOracle:
    """Build the all-pairs oracle.

    ``validate`` runs the witness-set cover check for every ``(v, i < k-1)``;
    by default only on graphs with at most ``DEFAULT_VALIDATE_CUTOFF`` vertices.
    """
    if not g.unweighted:
        raise UnweightedRequiredError("apasp")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    phi = internal_epsilon(epsilon, k)
    h = sample_hierarchy(g.n, k, seed)
    if validate is None:
        validate = g.n <= DEFAULT_VALIDATE_CUTOFF
    distances = FaultDistances(g, cache=validate)

    sets = cluster_vertex_sets(g, h, phi, distances)
    clusters: dict[tuple[int, int], ClusterOracle] = {}
    for i, level in enumerate(sets):
        for w, verts in level.items():
            sub = induced_subgraph(g, verts)
            clusters[(i, w)] = ClusterOracle(i, w, sub, build_sssp_eps(sub.graph, sub.local[w], phi))
        log.debug("level %d: %d cluster oracles", i, len(level))

    samplers = {}
    for i in range(1, k):
        sg = sampler_graph(g, h.members(i))
        samplers[i] = NearestSampler(i, build_sssp_eps(sg, g.n, phi))

    if validate:
        largest = validate_witness_sets(g, h, phi, distances)
        log.debug("witness sets validated, largest has %d failures", largest)

    oracle = ApaspOracle(g, k, epsilon, h, clusters, samplers)
    log.info("apasp oracle: n=%d k=%d epsilon=%g seed=%d %s", g.n, k, epsilon, seed, oracle.stats())
    return oracle


def query_apasp(o: ApaspOracle, u: int, v: int, x: int) -> ReplacementAnswer:
    return o.query(u, v, x)
