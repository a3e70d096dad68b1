"""``spectpd <experiment> [--config FILE] [--seed U64] [--samples N] [--sizes LIST] ...``

Exit status: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
import time

import numpy as np

from .config import EXPERIMENTS, ConfigError, ExperimentConfig, parse_value, read_config_file
from .eigensolve import EigensolveError
from .experiments import run
from .output import version_string, write_result

log = logging.getLogger("spectpd")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectpd", description="Persistence diagrams of random matrix spectra.")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--seed", help="master seed (unsigned 64-bit)")
    p.add_argument("--samples", help="samples per cell")
    p.add_argument("--sizes", help="comma-separated matrix sizes")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--threads", help="worker threads")
    p.add_argument("--bootstrap", help="bootstrap replicates")
    p.add_argument("--bulk-fraction", help="central fraction of eigenvalues kept for unfolding")
    p.add_argument("-q", "--quiet", action="store_true")
    return p


_FLAG_TO_FIELD = {
    "seed": "master_seed",
    "samples": "samples_per_cell",
    "sizes": "sizes",
    "out": "output_dir",
    "format": "format",
    "threads": "threads",
    "bootstrap": "bootstrap_replicates",
    "bulk_fraction": "bulk_fraction",
}


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values = read_config_file(args.config) if args.config else {}
    values["experiment"] = args.experiment
    for flag, key in _FLAG_TO_FIELD.items():
        raw = getattr(args, flag)
        if raw is not None:
            values[key] = parse_value(key, str(raw))
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    return ExperimentConfig(**{k: v for k, v in values.items() if k in known}).resolved()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG

    start = time.perf_counter()
    try:
        result = run(cfg)
    except (EigensolveError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        log.error("numerical failure in %s: %s", cfg.experiment, exc)
        return EXIT_NUMERICAL
    result.metadata = {
        "experiment": cfg.experiment,
        "config": cfg.echo(),
        "version": version_string(),
        "wall_time_s": time.perf_counter() - start,
    }
    for path in write_result(result, cfg.output_dir, cfg.format):
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
