"""Seeded test graphs built with networkx generators."""
from __future__ import annotations

import logging

import networkx as nx
import numpy as np

from dsoracle.graph import Graph

log = logging.getLogger(__name__)

GRAPH_KINDS = ("gnp", "grid", "cycle", "path", "star")
GNP_RETRIES = 100


def from_networkx(G: nx.Graph, weights: np.ndarray | None = None) -> Graph:
    """Relabel nodes to ``0..n-1`` in sorted order; unit weights unless given per edge."""
    H = nx.convert_node_labels_to_integers(G, ordering="sorted")
    edges = sorted((min(u, v), max(u, v)) for u, v in H.edges())
    if weights is None:
        return Graph(H.number_of_nodes(), edges)
    return Graph(H.number_of_nodes(), [(u, v, int(w)) for (u, v), w in zip(edges, weights)])


def to_networkx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_weighted_edges_from(g.edges)
    return G


def _gnp(n: int, p: float, seed: int, weighted: bool, max_weight: int, retries: int) -> Graph:
    if n < 1:
        raise ValueError(f"gnp needs n >= 1, got {n}")
    if not 0 <= p <= 1:
        raise ValueError(f"gnp needs 0 <= p <= 1, got {p}")
    if n > 1 and p == 0:
        raise ValueError("gnp with p=0 is never connected")
    for attempt in range(retries):
        rng = np.random.default_rng([seed, attempt])
        G = nx.gnp_random_graph(n, p, seed=int(rng.integers(2**32)))
        if not nx.is_connected(G):
            continue
        weights = rng.integers(1, max_weight + 1, size=G.number_of_edges()) if weighted else None
        log.debug("gnp n=%d p=%g connected after %d attempts", n, p, attempt + 1)
        return from_networkx(G, weights)
    raise ValueError(f"gnp n={n} p={p}: no connected sample in {retries} attempts")


def generate_graph(kind: str, seed: int = 42, **params) -> Graph:
    """Build a graph of the given family.

    ``gnp``: ``n``, ``p``, ``weighted`` (weights uniform in ``1..max_weight``),
    ``max_weight`` (10), ``retries``. ``grid``: ``rows``, ``cols``.
    ``cycle``, ``path``, ``star``: ``n``. The same seed gives the same graph.
    """
    if kind == "gnp":
        return _gnp(
            int(params["n"]),
            float(params["p"]),
            seed,
            bool(params.get("weighted", False)),
            int(params.get("max_weight", 10)),
            int(params.get("retries", GNP_RETRIES)),
        )
    if kind == "grid":
        rows, cols = int(params["rows"]), int(params["cols"])
        if rows < 1 or cols < 1:
            raise ValueError(f"grid needs rows, cols >= 1, got {rows}x{cols}")
        return from_networkx(nx.grid_2d_graph(rows, cols))
    if kind not in GRAPH_KINDS:
        raise ValueError(f"unknown graph kind {kind!r}, expected one of {GRAPH_KINDS}")
    n = int(params["n"])
    if kind == "cycle":
        if n < 3:
            raise ValueError(f"cycle needs n >= 3, got {n}")
        return from_networkx(nx.cycle_graph(n))
    if n < 1:
        raise ValueError(f"{kind} needs n >= 1, got {n}")
    if kind == "path":
        return from_networkx(nx.path_graph(n))
    return from_networkx(nx.star_graph(n - 1))
