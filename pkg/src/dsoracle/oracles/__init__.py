"""Distance sensitivity oracles and the exact baseline they are checked against."""
from __future__ import annotations

from dsoracle.config import OracleConfig
from dsoracle.graph import Graph
from dsoracle.oracles.apasp import ApaspOracle, build_apasp, query_apasp
from dsoracle.oracles.exact import (
    FaultDistances,
    ReplacementAnswer,
    all_replacement_distances,
    exact_replacement,
    fault_distance_matrix,
)
from dsoracle.oracles.sssp3 import Sssp3Oracle, build_sssp3, query_sssp3
from dsoracle.oracles.sssp_eps import SsspEpsOracle, build_sssp_eps, query_sssp_eps

Oracle = Sssp3Oracle | SsspEpsOracle | ApaspOracle


def build_oracle(g: Graph, cfg: OracleConfig) -> Oracle:
    cfg.validate()
    if cfg.kind == "sssp3":
        return build_sssp3(g, cfg.source)
    if cfg.kind == "sssp-eps":
        return build_sssp_eps(g, cfg.source, cfg.epsilon)
    return build_apasp(g, cfg.k, cfg.epsilon, cfg.seed)


def oracle_kind(oracle: Oracle) -> str:
    if isinstance(oracle, SsspEpsOracle):
        return "sssp-eps"
    if isinstance(oracle, Sssp3Oracle):
        return "sssp3"
    if isinstance(oracle, ApaspOracle):
        return "apasp"
    raise TypeError(f"not an oracle: {type(oracle).__name__}")


def oracle_config(oracle: Oracle) -> OracleConfig:
    """Build parameters that reproduce ``oracle``."""
    kind = oracle_kind(oracle)
    if kind == "sssp3":
        return OracleConfig(kind=kind, source=oracle.root)
    if kind == "sssp-eps":
        return OracleConfig(kind=kind, source=oracle.root, epsilon=oracle.epsilon)
    return OracleConfig(kind=kind, epsilon=oracle.epsilon, k=oracle.k, seed=oracle.seed)


__all__ = [
    "ApaspOracle",
    "FaultDistances",
    "Oracle",
    "ReplacementAnswer",
    "Sssp3Oracle",
    "SsspEpsOracle",
    "all_replacement_distances",
    "build_apasp",
    "build_oracle",
    "build_sssp3",
    "build_sssp_eps",
    "exact_replacement",
    "fault_distance_matrix",
    "oracle_config",
    "oracle_kind",
    "query_apasp",
    "query_sssp3",
    "query_sssp_eps",
]
