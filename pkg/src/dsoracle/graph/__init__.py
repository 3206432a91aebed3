"""Graph representation, shortest-path trees and LCA support."""

from dsoracle.graph.core import (
    INF,
    Graph,
    Path,
    ShortestPathTree,
    Subgraph,
    augmented_subgraph,
    climb,
    induced_subgraph,
    lca,
    path_weight,
    search,
    shortest_path_tree,
    tree_distance,
    tree_path,
)

__all__ = [
    "INF",
    "Graph",
    "Path",
    "ShortestPathTree",
    "Subgraph",
    "augmented_subgraph",
    "climb",
    "induced_subgraph",
    "lca",
    "path_weight",
    "search",
    "shortest_path_tree",
    "tree_distance",
    "tree_path",
]
