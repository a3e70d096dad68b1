"""Classical level statistics: spacings, <r>, analytic unfolding, Wigner surmises, KS."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import erf

from .eigensolve import SpectrumLike, as_values
from .persistence import DensityModel, density_eval

KS_SERIES_TOL = 1e-10


@dataclass
class SpacingSequence:
    values: np.ndarray
    unfolded: bool = False

    def __len__(self) -> int:
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def mean(self) -> float:
        return math.fsum(self.values) / len(self.values)


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float
    sample_size: int


def _ascending(s: SpectrumLike, min_len: int) -> np.ndarray:
    lam = as_values(s)
    if lam.ndim != 1 or len(lam) < min_len:
        raise ValueError(f"need at least {min_len} eigenvalues")
    if np.any(np.diff(lam) < 0):
        raise ValueError("eigenvalues must be sorted ascending")
    return lam


def spacings(s: SpectrumLike) -> SpacingSequence:
    return SpacingSequence(np.diff(_ascending(s, 2)))


def _ratios(sp: np.ndarray) -> np.ndarray:
    lo = np.minimum(sp[:-1], sp[1:])
    hi = np.maximum(sp[:-1], sp[1:])
    out = np.ones_like(hi)
    # hi == 0 forces lo == 0; 0/0 is treated as perfectly regular (ratio 1).
    np.divide(lo, hi, out=out, where=hi > 0)
    return out


def spacing_ratio(s: SpectrumLike) -> float:
    """Mean min/max ratio of consecutive spacings for one spectrum."""
    return float(np.mean(_ratios(np.diff(_ascending(s, 3)))))


def bulk_indices(n: int, bulk_fraction: float) -> slice:
    """Central ``bulk_fraction`` of n ranked eigenvalues."""
    if not 0 < bulk_fraction <= 1:
        raise ValueError("bulk_fraction must lie in (0, 1]")
    # small epsilon guards e.g. (1 - 0.8) * 100 / 2 = 9.999...
    drop = int(math.floor((1 - bulk_fraction) * n / 2 + 1e-9))
    return slice(drop, n - drop)


def unfold_bulk(s: SpectrumLike, m: DensityModel, bulk_fraction: float = 0.8) -> SpacingSequence:
    """Bulk spacings rescaled by n * rho(midpoint) so the local mean spacing is 1."""
    lam = _ascending(s, 2)
    n = len(lam)
    bulk = lam[bulk_indices(n, bulk_fraction)]
    if len(bulk) < 2:
        raise ValueError("bulk selection is empty")
    mid = 0.5 * (bulk[:-1] + bulk[1:])
    return SpacingSequence(n * density_eval(m, mid) * np.diff(bulk), unfolded=True)


def wigner_surmise(beta: int, s):
    """Nearest-neighbour spacing density p_beta(s) for beta in {1, 2}."""
    x = np.asarray(s, dtype=float)
    if beta == 1:
        out = (math.pi / 2) * x * np.exp(-math.pi * x * x / 4)
    elif beta == 2:
        out = (32 / math.pi**2) * x * x * np.exp(-4 * x * x / math.pi)
    else:
        raise ValueError("beta must be 1 or 2")
    out = np.where(x >= 0, out, 0.0)
    return float(out) if out.ndim == 0 else out


def wigner_surmise_cdf(beta: int, s):
    x = np.maximum(np.asarray(s, dtype=float), 0.0)
    if beta == 1:
        out = -np.expm1(-math.pi * x * x / 4)
    elif beta == 2:
        out = erf(2 * x / math.sqrt(math.pi)) - (4 / math.pi) * x * np.exp(-4 * x * x / math.pi)
    else:
        raise ValueError("beta must be 1 or 2")
    return float(out) if out.ndim == 0 else out


def kolmogorov_sf(x: float) -> float:
    """P(K > x) for the limiting Kolmogorov distribution."""
    if x <= 0:
        return 1.0
    if x < 1.0:
        # Jacobi-theta form converges fast for small x.
        total, k = 0.0, 1
        c = math.sqrt(2 * math.pi) / x
        while True:
            term = c * math.exp(-((2 * k - 1) ** 2) * math.pi**2 / (8 * x * x))
            total += term
            if term < KS_SERIES_TOL:
                break
            k += 1
        return min(1.0, max(0.0, 1.0 - total))
    total, k = 0.0, 1
    while True:
        term = 2 * math.exp(-2 * k * k * x * x)
        total += term if k % 2 else -term
        if term < KS_SERIES_TOL:
            break
        k += 1
    return min(1.0, max(0.0, total))


def ks_statistic(samples, cdf: Callable) -> float:
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    f = np.asarray(cdf(x), dtype=float)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(n) / n
    return float(max(upper.max(), lower.max()))


def ks_test(samples, cdf: Callable) -> KsResult:
    """One-sample KS test with the asymptotic Kolmogorov p-value."""
    n = len(samples)
    if n < 10:
        raise ValueError("KS test needs at least 10 samples")
    d = ks_statistic(samples, cdf)
    return KsResult(d, kolmogorov_sf(math.sqrt(n) * d), n)


def normalized_spacing_variance(sp) -> float:
    """Population variance of s_k / <s> over the whole spacing sequence."""
    s = np.asarray(sp, dtype=float)
    if len(s) < 2:
        raise ValueError("need at least two spacings")
    mean = math.fsum(s) / len(s)
    if mean <= 0:
        raise ValueError("mean spacing is zero")
    z = s / mean
    zbar = math.fsum(z) / len(z)
    return math.fsum((z - zbar) ** 2) / len(z)
