from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

ORACLE_KINDS = ("sssp3", "sssp-eps", "apasp")


@dataclass
class OracleConfig:
    kind: str = "sssp3"
    source: int = 0  # root for the single-source kinds
    epsilon: float = 0.5
    k: int = 2  # apasp only
    seed: int = 42  # apasp sampling hierarchy

    def validate(self):
        if self.kind not in ORACLE_KINDS:
            raise ValueError(f"unknown oracle kind {self.kind!r}, expected one of {ORACLE_KINDS}")
        if self.kind != "sssp3" and not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.kind == "apasp" and self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.source < 0:
            raise ValueError(f"source must be a vertex id, got {self.source}")

    def params(self) -> dict:
        """Build parameters stored in a container for this kind."""
        if self.kind == "sssp3":
            return {"source": self.source}
        if self.kind == "sssp-eps":
            return {"source": self.source, "epsilon": self.epsilon}
        return {"k": self.k, "epsilon": self.epsilon, "seed": self.seed}

    def label(self) -> str:
        """``params`` as one CSV-safe field, e.g. ``eps=0.5;k=2``."""
        short = {"source": "r", "epsilon": "eps"}
        return ";".join(f"{short.get(k, k)}={v}" for k, v in self.params().items())

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class VerifyConfig:
    apasp_full_cutoff: int = 80  # exhaustive (u, v, x) up to this many vertices
    apasp_sampled_failures: int = 50  # failures drawn per (u, v) above the cutoff
    rel_tol: float = 1e-9  # only used when weights are not integers
    workers: int | None = None
    seed: int = 42

    @classmethod
    def from_file(cls, config_path: str | Path | None = None) -> VerifyConfig:
        """Load verification config from file.

        Args:
            config_path: Path to config file. If None, uses ~/.config/dsoracle/verify.json
        """
        if config_path is None:
            config_path = Path.home() / ".config" / "dsoracle" / "verify.json"

        if not Path(config_path).exists():
            return cls()

        try:
            with open(config_path) as f:
                data = json.load(f)
            return cls(**{k: v for k, v in data.items() if hasattr(cls, k)})
        except Exception:
            return cls()
