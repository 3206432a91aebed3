"""Check oracle answers against the exact replacement distances.

Every answer must satisfy ``exact <= reported <= bound * exact``; a returned
path must run between the query endpoints, avoid the failed vertex, use only
graph edges and weigh exactly the reported distance.
"""
from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path as FilePath

import numpy as np

from dsoracle.config import VerifyConfig
from dsoracle.errors import QueryError
from dsoracle.graph import Graph, lca, path_weight
from dsoracle.oracles import ApaspOracle, Oracle, ReplacementAnswer, all_replacement_distances, oracle_config, oracle_kind
from dsoracle.oracles.exact import fault_distance_matrix, format_distance

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuerySample:
    u: int
    v: int
    x: int
    reported: float
    exact: float
    probes: int = 0

    @property
    def stretch(self) -> float:
        if math.isinf(self.exact):
            return 1.0
        if self.exact == 0:
            return 1.0 if self.reported == 0 else math.inf
        return self.reported / self.exact


@dataclass
class BenchReport:
    kind: str
    n: int
    m: int
    params: dict
    bound: float
    entries: int
    samples: list[QuerySample] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)
    build_ms: float = 0.0
    query_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def stretches(self) -> np.ndarray:
        """Stretch of every query whose exact distance is finite."""
        return np.array([s.stretch for s in self.samples if not math.isinf(s.exact)], dtype=float)

    @property
    def max_stretch(self) -> float:
        values = self.stretches()
        return float(values.max()) if values.size else 1.0

    @property
    def mean_stretch(self) -> float:
        values = self.stretches()
        return float(values.mean()) if values.size else 1.0

    @property
    def max_probes(self) -> int:
        return max((s.probes for s in self.samples), default=0)

    @property
    def mean_probes(self) -> float:
        return float(np.mean([s.probes for s in self.samples])) if self.samples else 0.0

    def summary(self) -> str:
        status = "OK" if self.ok else f"FAILED ({len(self.violations)} violations)"
        return (
            f"{self.kind} n={self.n} m={self.m} queries={len(self.samples)} entries={self.entries} "
            f"max_stretch={self.max_stretch:.4f} mean_stretch={self.mean_stretch:.4f} "
            f"bound={self.bound:g} {status}"
        )


def stretch_bound(oracle: Oracle) -> float:
    kind = oracle_kind(oracle)
    if kind == "sssp3":
        return 3.0
    if kind == "sssp-eps":
        return 1.0 + oracle.epsilon
    return (2 * oracle.k - 1) * (1.0 + oracle.epsilon)


def _integral(g: Graph) -> bool:
    return all(isinstance(w, int) for _, _, w in g.edges)


def check_answer(
    g: Graph,
    ans: ReplacementAnswer,
    exact: float,
    u: int,
    v: int,
    x: int,
    bound: float,
    rel_tol: float = 0.0,
) -> list[str]:
    """Problems with one answer; empty when it is within ``[exact, bound * exact]``."""
    where = f"query (u={u}, v={v}, x={x})"
    d = ans.distance
    if math.isinf(exact):
        return [] if math.isinf(d) else [f"{where}: reported {d} but v is disconnected from u"]
    if math.isinf(d):
        return [f"{where}: reported inf, exact {format_distance(exact)}"]
    problems = []
    slack = rel_tol * exact
    if d < exact - slack:
        problems.append(f"{where}: reported {d} below exact {format_distance(exact)}")
    if d > bound * exact + slack:
        problems.append(f"{where}: reported {d} exceeds {bound:g} x exact {format_distance(exact)}")
    p = ans.path
    if p is None:
        return problems
    verts = p.vertices
    if not verts or verts[0] != u or verts[-1] != v:
        problems.append(f"{where}: path does not run from u to v")
    if x in verts:
        problems.append(f"{where}: path passes through the failed vertex")
    try:
        w = path_weight(g, verts)
    except QueryError as e:
        problems.append(f"{where}: path uses a missing edge ({e})")
        return problems
    if not math.isclose(w, d, rel_tol=rel_tol):
        problems.append(f"{where}: path weighs {w}, reported {d}")
    return problems


def _timed_query(oracle: Oracle, u: int, v: int, x: int) -> tuple[ReplacementAnswer, float]:
    start = time.perf_counter()
    ans = oracle.query(u, v, x) if isinstance(oracle, ApaspOracle) else oracle.query(v, x)
    return ans, time.perf_counter() - start


def _check_column(oracle: Oracle, g: Graph, u: int, x: int, exact_of, targets, bound: float, rel_tol: float):
    samples, violations, elapsed = [], [], 0.0
    t = getattr(oracle, "tree", None)
    for v in targets:
        ans, dt = _timed_query(oracle, u, v, x)
        elapsed += dt
        exact = exact_of(v)
        samples.append(QuerySample(u, v, x, ans.distance, exact, ans.probes))
        violations += check_answer(g, ans, exact, u, v, x, bound, rel_tol)
        if t is not None and t.reachable(v) and t.reachable(x) and lca(t, v, x) != x and ans.distance != t.dist[v]:
            violations.append(f"query (v={v}, x={x}): unaffected vertex answered {ans.distance}, tree distance {t.dist[v]}")
    return samples, violations, elapsed


def _sampled_failures(n: int, u: int, v: int, count: int, rng: np.random.Generator) -> np.ndarray:
    pool = np.array([x for x in range(n) if x != u and x != v], dtype=np.int64)
    if pool.size <= count:
        return pool
    return np.sort(rng.choice(pool, size=count, replace=False))


def verify_oracle(oracle: Oracle, cfg: VerifyConfig | None = None) -> BenchReport:
    """Compare every valid query (sampled for large all-pairs oracles) with the exact answer."""
    cfg = cfg or VerifyConfig()
    g = oracle.graph
    kind = oracle_kind(oracle)
    bound = stretch_bound(oracle)
    rel_tol = 0.0 if _integral(g) else cfg.rel_tol
    report = BenchReport(kind, g.n, g.m, oracle_config(oracle).params(), bound, oracle.entries)
    n = g.n

    if kind != "apasp":
        r = oracle.root
        table = all_replacement_distances(g, r, cfg.workers)

        def job(x: int):
            targets = [v for v in range(n) if v != x]
            return _check_column(oracle, g, r, x, lambda v: float(table[v, x]), targets, bound, rel_tol)

        failures = [x for x in range(n) if x != r]
    else:
        plan: dict[int, list[tuple[int, int]]] = {x: [] for x in range(n)}
        if n <= cfg.apasp_full_cutoff:
            for u in range(n):
                for v in range(n):
                    if u != v:
                        for x in range(n):
                            if x != u and x != v:
                                plan[x].append((u, v))
        else:
            rng = np.random.default_rng([cfg.seed, n])
            for u in range(n):
                for v in range(n):
                    if u != v:
                        for x in _sampled_failures(n, u, v, cfg.apasp_sampled_failures, rng):
                            plan[int(x)].append((u, v))
            log.info("apasp verification sampled %d failures per pair", cfg.apasp_sampled_failures)

        def job(x: int):
            matrix = fault_distance_matrix(g, x)
            samples, violations, elapsed = [], [], 0.0
            for u, v in plan[x]:
                s, bad, dt = _check_column(oracle, g, u, x, lambda w: float(matrix[u, w]), [v], bound, rel_tol)
                samples += s
                violations += bad
                elapsed += dt
            return samples, violations, elapsed

        failures = [x for x in range(n) if plan[x]]

    if cfg.workers and cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(job, failures))
    else:
        results = [job(x) for x in failures]
    for samples, violations, elapsed in results:
        report.samples += samples
        report.violations += violations
        report.query_ms += elapsed * 1000.0

    if report.violations:
        log.warning("%s: %d violations, first: %s", kind, len(report.violations), report.violations[0])
    log.info(report.summary())
    return report


def write_report_csv(report: BenchReport, path: str | FilePath):
    """Per-query table ``u,v,x,reported,exact,stretch,probes``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["u", "v", "x", "reported", "exact", "stretch", "probes"])
        for s in report.samples:
            stretch = "" if math.isinf(s.exact) else f"{s.stretch:.6f}"
            writer.writerow([s.u, s.v, s.x, format_distance(s.reported), format_distance(s.exact), stretch, s.probes])
