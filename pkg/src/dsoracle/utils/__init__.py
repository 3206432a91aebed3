"""Graph generation, verification against the exact baseline, benchmarks."""

from dsoracle.utils.generate import GRAPH_KINDS, generate_graph
from dsoracle.utils.verify import BenchReport, verify_oracle

__all__ = ["GRAPH_KINDS", "BenchReport", "generate_graph", "verify_oracle"]
