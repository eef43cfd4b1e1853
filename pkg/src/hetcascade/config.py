"""Experiment configuration, flat key=value files and substream derivation."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

SEED_POLICIES = (
    "random_fraction", "top_degree_fraction", "tim_fraction",
    "random_count", "top_degree_count", "tim_count",
)
REMOVAL_STRATEGIES = ("by_influence", "by_susceptibility", "random")

# stage ids for substream derivation; recorded in manifests
STAGES = {"features": 1, "cascade": 2, "tim": 3, "seeds": 4, "removal": 5}


class ConfigError(ValueError):
    pass


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(",") if t.strip())


def _strs(text: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in text.split(",") if t.strip())


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything an experiment run depends on.

    ``datasets`` entries are edge-list paths or generator specs such as
    ``ws:n=1133,k=10,p=0.1,seed=0``.  An empty ``models`` and a
    ``runs_per_seed`` of 0 select the experiment's own defaults.
    """

    datasets: tuple[str, ...] = ("ws:n=1133,k=10,p=0.1,seed=0",)
    models: tuple[str, ...] = ()
    runs_per_seed: int = 0
    rounds: int = 10
    realizations: int = 100
    seed_policy: str = "top_degree_fraction:0.01"
    removal_strategies: tuple[str, ...] = REMOVAL_STRATEGIES
    removal_grid: tuple[float, ...] = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)
    tim_k: str = "fraction:0.01"
    theta_per_node: int = 200
    epsilon: float = 0.0
    coefficients: tuple[str, ...] = ("spearman",)
    top_fraction: float = 0.1
    rng_seed: int = 0

    def __post_init__(self):
        if not self.datasets:
            raise ConfigError("at least one dataset is required")
        policy, _, arg = self.seed_policy.partition(":")
        if policy not in SEED_POLICIES or not arg:
            raise ConfigError(f"bad seed_policy {self.seed_policy!r}; use e.g. random_fraction:0.01")
        if policy.endswith("fraction") and not 0 < float(arg) <= 1:
            raise ConfigError("seed fraction must lie in (0, 1]")
        for s in self.removal_strategies:
            if s not in REMOVAL_STRATEGIES:
                raise ConfigError(f"unknown removal strategy {s!r}")
        grid = list(self.removal_grid)
        if not grid or grid[0] != 0 or grid != sorted(grid) or grid[-1] > 1:
            raise ConfigError("removal_grid must be ascending, start at 0 and stay within [0, 1]")
        kind, _, arg = self.tim_k.partition(":")
        if kind not in ("fraction", "count") or not arg:
            raise ConfigError(f"bad tim_k {self.tim_k!r}; use fraction:0.01 or count:100")
        for c in self.coefficients:
            if c not in ("pearson", "spearman", "kendall"):
                raise ConfigError(f"unknown coefficient {c!r}")
        if self.runs_per_seed < 0 or self.rounds < 1 or self.realizations < 1:
            raise ConfigError("runs_per_seed >= 0, rounds >= 1 and realizations >= 1 required")
        if self.epsilon < 0:
            raise ConfigError("epsilon must be >= 0 (0 means fixed theta)")

    # ------------------------------------------------------------ key=value

    def to_items(self) -> list[tuple[str, str]]:
        out = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ";".join(v) if f.name == "datasets" else ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
            out.append((f.name, str(v)))
        return out

    @classmethod
    def from_items(cls, items: dict[str, str]) -> ExperimentConfig:
        kw = {}
        names = {f.name: f for f in dataclasses.fields(cls)}
        for key, raw in items.items():
            if key.startswith("meta."):
                continue
            if key not in names:
                raise ConfigError(f"unknown config key {key!r}")
            default = names[key].default
            if key == "datasets":
                kw[key] = tuple(t.strip() for t in raw.split(";") if t.strip())
            elif key == "removal_grid":
                kw[key] = _floats(raw)
            elif isinstance(default, tuple):
                kw[key] = _strs(raw)
            elif isinstance(default, int):
                kw[key] = int(raw)
            elif isinstance(default, float):
                kw[key] = float(raw)
            else:
                kw[key] = raw
        return cls(**kw)

    def replace(self, **changes) -> ExperimentConfig:
        return dataclasses.replace(self, **changes)


def parse_key_values(text: str) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        key, sep, value = s.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key=value")
        out[key.strip()] = value.strip()
    return out


def read_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return ExperimentConfig.from_items(parse_key_values(fh.read()))


def format_key_values(items) -> str:
    return "".join(f"{k}={v}\n" for k, v in items)


def substream(rng_seed: int, stage: str, *index: int) -> int:
    """Deterministic 63-bit seed for one stage/index tuple of a run."""
    ss = np.random.SeedSequence(rng_seed, spawn_key=(STAGES[stage], *index))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def parse_count(spec: str, n: int) -> int:
    """``fraction:f`` -> max(1, floor(f n)); ``count:c`` -> c (capped at n)."""
    kind, _, arg = spec.partition(":")
    if kind.endswith("fraction"):
        return max(1, int(np.floor(float(arg) * n + 1e-9)))
    return min(n, int(arg))
