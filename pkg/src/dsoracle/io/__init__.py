"""Graph files and the oracle container."""

from dsoracle.io.formats import FORMATS, parse_dimacs, parse_edgelist, read_graph, write_graph

__all__ = ["FORMATS", "parse_dimacs", "parse_edgelist", "read_graph", "write_graph"]
