"""Seeded sampling of spectra and per-sample statistics."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable

import numpy as np

from .eigensolve import Spectrum, as_values, spectrum
from .ensembles import EnsembleSpec, draw
from .persistence import diagram_from_spectrum, max_bar_fraction, persistence_entropy, total_persistence
from .spectral_stats import normalized_spacing_variance, spacing_ratio


def _tp(lam):
    return total_persistence(diagram_from_spectrum(lam))


def _pe(lam):
    return persistence_entropy(diagram_from_spectrum(lam))


def _mu(lam):
    return max_bar_fraction(diagram_from_spectrum(lam))


def _spacing_variance(lam):
    return normalized_spacing_variance(np.diff(as_values(lam)))


def largest_eigenvalue(s) -> float:
    lam = as_values(s)
    if len(lam) == 0:
        raise ValueError("empty spectrum")
    return float(lam[-1])


STATISTICS: dict[str, Callable] = {
    "tp": _tp,
    "pe": _pe,
    "mu": _mu,
    "r": spacing_ratio,
    "spacing_variance": _spacing_variance,
    "lambda_max": largest_eigenvalue,
}


def statistic(name: str) -> Callable:
    try:
        return STATISTICS[name]
    except KeyError:
        raise ValueError(f"unknown statistic {name!r}; choose from {sorted(STATISTICS)}") from None


def one_spectrum(spec: EnsembleSpec, index: int) -> Spectrum:
    return spectrum(draw(spec, index))


def sample_spectra(
    spec: EnsembleSpec, count: int, threads: int = 1, start: int = 0
) -> list[Spectrum]:
    """Spectra for sample indices start..start+count-1, in index order."""
    indices = range(start, start + count)
    if threads <= 1:
        return [one_spectrum(spec, i) for i in indices]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda i: one_spectrum(spec, i), indices))


def evaluate(spectra: Iterable, names: Iterable[str]) -> dict[str, np.ndarray]:
    spectra = list(spectra)
    return {name: np.array([statistic(name)(s) for s in spectra]) for name in names}
