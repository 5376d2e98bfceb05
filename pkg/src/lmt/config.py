"""Run-time configuration: defaults, then LMT_* environment variables, then flags."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

_ENV = {
    "maxDepth": "LMT_MAX_DEPTH",
    "searchBudget": "LMT_SEARCH_BUDGET",
    "tol": "LMT_TOL",
    "qubitCap": "LMT_QUBIT_CAP",
    "seed": "LMT_SEED",
    "jobs": "LMT_JOBS",
}


@dataclass(frozen=True)
class Config:
    maxDepth: int = 64
    searchBudget: int = 100_000
    tol: float = 1e-9
    qubitCap: int = 10
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        for name in ("maxDepth", "searchBudget", "qubitCap", "jobs"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not -(2**63) <= self.seed < 2**63:
            raise ValueError("seed must fit in 64 bits")

    def with_overrides(self, **kw) -> "Config":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def load_config(env=None, **overrides) -> Config:
    env = os.environ if env is None else env
    vals = {}
    for f in fields(Config):
        raw = env.get(_ENV[f.name])
        if raw is None or raw == "":
            continue
        try:
            vals[f.name] = float(raw) if f.name == "tol" else int(raw)
        except ValueError:
            raise ValueError(f"{_ENV[f.name]}={raw!r} is not a number") from None
    return Config(**vals).with_overrides(**overrides)
