"""Experiment configuration: defaults, flat key=value config files, validation."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

EXPERIMENTS = (
    "universality",
    "pe_table",
    "ensembles",
    "surmise_ks",
    "w2",
    "auc",
    "rp_sweep",
    "spiked",
    "ecdf",
)

# Full-scale defaults; every value can be overridden.
DEFAULT_SIZES = {
    "universality": [50, 100, 200],
    "pe_table": [50, 100, 200, 500, 1000],
    "ensembles": [100],
    "surmise_ks": [100],
    "w2": [100],
    "auc": [50, 100, 200],
    "rp_sweep": [100],
    "spiked": [100],
    "ecdf": [100],
}
DEFAULT_SAMPLES = {
    "universality": 200,
    "pe_table": 200,
    "ensembles": 200,
    "surmise_ks": 200,
    "w2": 100,  # number of diagram pairs
    "auc": 500,  # per class
    "rp_sweep": 300,  # per lambda
    "spiked": 500,  # per class
    "ecdf": 200,
}


def default_lambda_grid() -> list[float]:
    # 0, 0.25, ..., 5 plus 0.7 so both reported thresholds sit on the grid.
    return sorted(set(np.round(np.linspace(0.0, 5.0, 21), 10).tolist()) | {0.7})


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    sizes: list[int] | None = None
    samples_per_cell: int | None = None
    master_seed: int = 0
    bulk_fraction: float = 0.8
    bootstrap_replicates: int = 1000
    output_dir: str = "results"
    format: str = "csv"
    threads: int = 1
    lambda_grid: list[float] = field(default_factory=default_lambda_grid)
    theta_grid: list[float] = field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0, 3.0])
    wishart_ratio: int = 2  # p = wishart_ratio * n

    def resolved(self) -> "ExperimentConfig":
        """Copy with per-experiment defaults filled in, validated."""
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        cfg = dataclasses.replace(
            self,
            sizes=list(self.sizes) if self.sizes else list(DEFAULT_SIZES[self.experiment]),
            samples_per_cell=self.samples_per_cell or DEFAULT_SAMPLES[self.experiment],
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not self.sizes or any(int(n) != n or n < 3 for n in self.sizes):
            raise ConfigError("sizes must be a nonempty list of integers >= 3")
        if self.samples_per_cell < 2:
            raise ConfigError("samples_per_cell must be >= 2")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be an unsigned 64-bit integer")
        if not 0 < self.bulk_fraction <= 1:
            raise ConfigError("bulk_fraction must lie in (0, 1]")
        if self.bootstrap_replicates < 100:
            raise ConfigError("bootstrap_replicates must be >= 100")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.wishart_ratio < 2:
            raise ConfigError("wishart_ratio must be >= 2 (p > n)")
        if not self.lambda_grid or min(self.lambda_grid) < 0:
            raise ConfigError("lambda_grid must be nonempty and nonnegative")
        if not self.theta_grid or min(self.theta_grid) < 0:
            raise ConfigError("theta_grid must be nonempty and nonnegative")
        if self.experiment == "rp_sweep" and self.samples_per_cell < 30:
            raise ConfigError("rp_sweep needs samples_per_cell >= 30")

    def echo(self) -> dict:
        return dataclasses.asdict(self)


_LIST_FIELDS = {"sizes": int, "lambda_grid": float, "theta_grid": float}
_SCALAR_FIELDS = {
    "experiment": str,
    "samples_per_cell": int,
    "master_seed": int,
    "bulk_fraction": float,
    "bootstrap_replicates": int,
    "output_dir": str,
    "format": str,
    "threads": int,
    "wishart_ratio": int,
}


def parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _LIST_FIELDS:
            return [_LIST_FIELDS[key](v) for v in raw.replace(" ", "").split(",") if v]
        if key in _SCALAR_FIELDS:
            return _SCALAR_FIELDS[key](raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    raise ConfigError(f"unknown config key {key!r}")


def read_config_file(path: str | Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment; lists are comma separated."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = parse_value(key, value)
    return out


def write_config_file(cfg: ExperimentConfig) -> str:
    lines = []
    for key, value in cfg.echo().items():
        if value is None:
            continue
        if isinstance(value, list):
            value = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
