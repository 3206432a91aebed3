"""Benchmark suites: build, verify and report storage and stretch per graph size."""
from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from dsoracle.config import OracleConfig, VerifyConfig
from dsoracle.oracles import build_oracle
from dsoracle.utils.generate import generate_graph
from dsoracle.utils.verify import BenchReport, verify_oracle

log = logging.getLogger(__name__)

BENCH_HEADER = ["n", "m", "kind", "params", "build_ms", "entries", "mean_stretch", "max_stretch", "mean_probes"]


@dataclass
class BenchCase:
    """One suite entry: a generated graph family at size ``n`` and an oracle to build on it."""

    n: int
    oracle: OracleConfig = field(default_factory=OracleConfig)
    family: str = "gnp"
    degree: float = 10.0  # expected degree for gnp
    seed: int = 42

    def graph_params(self) -> dict:
        if self.family == "gnp":
            p = min(1.0, self.degree / max(1, self.n - 1))
            return {"n": self.n, "p": p, "weighted": self.oracle.kind == "sssp3"}
        if self.family == "grid":
            rows = 2
            return {"rows": rows, "cols": max(1, self.n // rows)}
        return {"n": self.n}

    @classmethod
    def from_dict(cls, data: dict) -> BenchCase:
        oracle = OracleConfig(**{k: v for k, v in data.items() if k in OracleConfig.__dataclass_fields__})
        rest = {k: v for k, v in data.items() if k in ("n", "family", "degree", "seed")}
        return cls(oracle=oracle, **rest)


def doubling_suite(start: int, stop: int, oracle: OracleConfig, family: str = "gnp", degree: float = 10.0, seed: int = 42) -> list[BenchCase]:
    """Sizes ``start, 2*start, ...`` up to ``stop`` inclusive; empty when ``start > stop``."""
    cases = []
    n = start
    while 0 < n <= stop:
        cases.append(BenchCase(n, oracle, family, degree, seed))
        n *= 2
    return cases


def load_suite(path: str | Path) -> list[BenchCase]:
    """A JSON list of cases, e.g. ``[{"n": 64, "kind": "apasp", "k": 2}]``."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list):
        raise ValueError(f"bench suite {path} must be a JSON list")
    return [BenchCase.from_dict(item) for item in data]


def run_case(case: BenchCase, verify_cfg: VerifyConfig | None = None) -> BenchReport:
    g = generate_graph(case.family, case.seed, **case.graph_params())
    start = time.perf_counter()
    oracle = build_oracle(g, case.oracle)
    build_ms = (time.perf_counter() - start) * 1000.0
    report = verify_oracle(oracle, verify_cfg)
    report.build_ms = build_ms
    log.info("bench %s n=%d: build %.1f ms, %d entries", case.oracle.kind, g.n, build_ms, report.entries)
    return report


def run_suite(cases: list[BenchCase], verify_cfg: VerifyConfig | None = None) -> list[BenchReport]:
    return [run_case(case, verify_cfg) for case in cases]


def report_row(report: BenchReport) -> list:
    params = ";".join(f"{k}={v}" for k, v in report.params.items())
    return [
        report.n,
        report.m,
        report.kind,
        params,
        f"{report.build_ms:.3f}",
        report.entries,
        f"{report.mean_stretch:.6f}",
        f"{report.max_stretch:.6f}",
        f"{report.mean_probes:.3f}",
    ]


def format_csv(reports: list[BenchReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_HEADER)
    for report in reports:
        writer.writerow(report_row(report))
    return buf.getvalue()


def write_histogram_csv(reports: list[BenchReport], path: str | Path):
    """Per-query stretch samples ``kind,n,stretch`` for every report."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["kind", "n", "stretch"])
        for report in reports:
            for s in report.stretches():
                writer.writerow([report.kind, report.n, f"{s:.6f}"])


def plot_stretch_histogram(reports: list[BenchReport], path: str | Path) -> Path:
    """One stretch histogram per report, bound drawn as a dashed line."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = max(1, len(reports))
    fig, axes = plt.subplots(rows, 1, figsize=(8, 2.5 * rows), squeeze=False)
    for ax, report in zip(axes[:, 0], reports):
        values = report.stretches()
        ax.hist(values, bins=40, color="steelblue")
        ax.axvline(report.bound, color="r", linestyle="--", label=f"bound {report.bound:g}")
        ax.set_title(f"{report.kind} n={report.n} (max {report.max_stretch:.3f})")
        ax.set_xlabel("stretch")
        ax.legend()
        ax.grid(True)
    plt.tight_layout()
    plt.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
