"""Versioned JSON container for built oracles.

Layout::

    {"format_version": 1, "kind": "sssp3", "params": {...},
     "fingerprint": {"n": .., "m": .., "sha256": ..},
     "graph": {"n": .., "edges": [[u, v, w], ...]},
     "payload": {...}}

The graph travels with the oracle, so a container answers queries on its own.
Keys are sorted and separators compact; saving a loaded container reproduces
the same bytes.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from dsoracle.config import ORACLE_KINDS
from dsoracle.errors import ContainerError
from dsoracle.graph import Graph
from dsoracle.oracles import ApaspOracle, Oracle, Sssp3Oracle, SsspEpsOracle, oracle_config, oracle_kind

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass
class OracleContainer:
    kind: str
    params: dict
    fingerprint: dict
    graph: Graph
    payload: dict
    format_version: int = FORMAT_VERSION

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "kind": self.kind,
            "params": self.params,
            "fingerprint": self.fingerprint,
            "graph": {"n": self.graph.n, "edges": [list(e) for e in self.graph.edges]},
            "payload": self.payload,
        }


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def pack(oracle: Oracle) -> OracleContainer:
    return OracleContainer(
        kind=oracle_kind(oracle),
        params=oracle_config(oracle).params(),
        fingerprint=oracle.graph.fingerprint(),
        graph=oracle.graph,
        payload=oracle.to_payload(),
    )


def dumps(oracle: Oracle | OracleContainer) -> str:
    box = oracle if isinstance(oracle, OracleContainer) else pack(oracle)
    try:
        return json.dumps(
            box.to_dict(), sort_keys=True, separators=(",", ":"), allow_nan=False, default=_json_default
        )
    except (TypeError, ValueError) as e:
        raise ContainerError(f"cannot serialize {box.kind} oracle: {e}") from None


def parse(text: str) -> OracleContainer:
    """Decode and check a container without rebuilding the oracle."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ContainerError(f"not a JSON container: {e}") from None
    if not isinstance(data, dict):
        raise ContainerError("container must be a JSON object")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ContainerError(f"format version mismatch: got {version!r}, expected {FORMAT_VERSION}")
    kind = data.get("kind")
    if kind not in ORACLE_KINDS:
        raise ContainerError(f"unknown oracle kind {kind!r}")
    try:
        g = Graph(data["graph"]["n"], [tuple(e) for e in data["graph"]["edges"]])
        box = OracleContainer(kind, dict(data["params"]), dict(data["fingerprint"]), g, data["payload"], version)
    except (KeyError, TypeError, ValueError) as e:
        raise ContainerError(f"malformed container: {e}") from None
    if g.fingerprint() != box.fingerprint:
        raise ContainerError("graph fingerprint mismatch: the stored graph does not match its fingerprint")
    return box


def unpack(box: OracleContainer, graph: Graph | None = None) -> Oracle:
    """Rebuild the oracle; ``graph``, when given, must match the stored fingerprint."""
    if graph is not None and graph.fingerprint() != box.fingerprint:
        raise ContainerError("graph fingerprint mismatch: the container was built on a different graph")
    g, p = box.graph, box.params
    try:
        if box.kind == "sssp3":
            return Sssp3Oracle.from_payload(g, p["source"], box.payload)
        if box.kind == "sssp-eps":
            return SsspEpsOracle.from_payload(g, p["source"], p["epsilon"], box.payload)
        return ApaspOracle.from_payload(g, p["k"], p["epsilon"], p["seed"], box.payload)
    except KeyError as e:
        raise ContainerError(f"missing build parameter {e} for {box.kind}") from None


def loads(text: str, graph: Graph | None = None) -> Oracle:
    return unpack(parse(text), graph)


def save_container(oracle: Oracle, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(dumps(oracle))
    log.info("saved %s container to %s", oracle_kind(oracle), path)
    return path


def load_container(path: str | Path, graph: Graph | None = None) -> Oracle:
    return loads(Path(path).read_text(), graph)
