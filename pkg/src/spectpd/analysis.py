"""Cross-sample statistics: AUC, bootstrap CIs, Fisher discriminant, W2, SNR sweeps, fits."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .ensembles import EnsembleSpec, Kind
from .montecarlo import evaluate, largest_eigenvalue, sample_spectra
from .persistence import PersistenceDiagram

__all__ = [
    "ScoreSet",
    "AucResult",
    "SnrCurve",
    "auc",
    "bootstrap_auc_ci",
    "fisher_combine",
    "wasserstein2",
    "snr_sweep",
    "powerlaw_exponent",
    "pearson_correlation",
    "largest_eigenvalue",
    "mean_std",
]


@dataclass
class ScoreSet:
    class_a: np.ndarray
    class_b: np.ndarray
    statistic_name: str = ""

    def __post_init__(self):
        self.class_a = np.asarray(self.class_a, dtype=float)
        self.class_b = np.asarray(self.class_b, dtype=float)
        if len(self.class_a) == 0 or len(self.class_b) == 0:
            raise ValueError("both classes must be nonempty")


@dataclass(frozen=True)
class AucResult:
    value: float
    raw: float
    flipped: bool

    def __float__(self) -> float:
        return self.value


def _raw_auc(a: np.ndarray, b: np.ndarray) -> float:
    # Mann-Whitney U via midranks: P(b > a) + P(b == a) / 2.
    ranks = rankdata(np.concatenate([a, b]))
    nb = len(b)
    u = ranks[len(a):].sum() - nb * (nb + 1) / 2
    return float(u / (len(a) * nb))


def auc(scores: ScoreSet) -> AucResult:
    """Discrimination AUC, oriented so that ``value >= 0.5``."""
    raw = _raw_auc(scores.class_a, scores.class_b)
    return AucResult(max(raw, 1 - raw), raw, raw < 0.5)


def bootstrap_auc_ci(
    scores: ScoreSet, replicates: int = 1000, level: float = 0.95, seed: int = 0
) -> tuple[float, float]:
    """Percentile CI; each class resampled with replacement independently."""
    if replicates < 100:
        raise ValueError("need at least 100 bootstrap replicates")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    flipped = auc(scores).flipped
    rng = np.random.Generator(np.random.Philox(key=seed))
    a, b = scores.class_a, scores.class_b
    reps = np.empty(replicates)
    for i in range(replicates):
        ra = a[rng.integers(0, len(a), len(a))]
        rb = b[rng.integers(0, len(b), len(b))]
        raw = _raw_auc(ra, rb)
        reps[i] = 1 - raw if flipped else raw
    alpha = (1 - level) / 2
    lo, hi = np.quantile(reps, [alpha, 1 - alpha])
    return float(lo), float(hi)


def fisher_combine(features_a, features_b, name: str = "fisher") -> ScoreSet:
    """Project onto w = S_w^{-1} (mu_b - mu_a), fitted and scored in-sample."""
    xa = np.atleast_2d(np.asarray(features_a, dtype=float))
    xb = np.atleast_2d(np.asarray(features_b, dtype=float))
    if len(xa) < 2 or len(xb) < 2:
        raise ValueError("each class needs at least two samples")
    if xa.shape[1] != xb.shape[1]:
        raise ValueError("feature dimensions differ")
    mu_a, mu_b = xa.mean(axis=0), xb.mean(axis=0)
    scatter = (xa - mu_a).T @ (xa - mu_a) + (xb - mu_b).T @ (xb - mu_b)
    if np.linalg.matrix_rank(scatter) < scatter.shape[0]:
        raise np.linalg.LinAlgError("pooled within-class covariance is singular")
    w = np.linalg.solve(scatter, mu_b - mu_a)
    return ScoreSet(xa @ w, xb @ w, name)


def wasserstein2(d1: PersistenceDiagram, d2: PersistenceDiagram, diagonal: bool = False) -> float:
    """W2 between finite parts of two diagrams, matched within each homological dimension.

    Each dimension holds one finite bar per diagram. By default the two bars
    are paired; with ``diagonal=True`` each dimension may instead send both
    bars to their nearest diagonal points, whichever is cheaper.
    """
    if d1.n != d2.n:
        raise ValueError(f"dimension mismatch: diagrams of size {d1.n} and {d2.n}")
    pair = (d1.births - d2.births) ** 2 + (d1.deaths - d2.deaths) ** 2
    if diagonal:
        to_diag = 0.5 * d1.lengths**2 + 0.5 * d2.lengths**2
        pair = np.minimum(pair, to_diag)
    return math.sqrt(math.fsum(pair))


def mean_std(x) -> tuple[float, float]:
    """Compensated mean and sample standard deviation (ddof=1)."""
    x = np.asarray(x, dtype=float)
    m = math.fsum(x) / len(x)
    if len(x) < 2:
        return m, 0.0
    return m, math.sqrt(math.fsum((x - m) ** 2) / (len(x) - 1))


@dataclass
class SnrCurve:
    lambda_grid: np.ndarray
    snr: dict[str, np.ndarray]
    reference_mean: dict[str, float]
    reference_std: dict[str, float]
    values: dict[str, np.ndarray] = field(default_factory=dict, repr=False)
    n: int = 0
    samples: int = 0
    master_seed: int = 0

    def first_crossing(self, name: str, threshold: float = 3.0) -> float | None:
        """Smallest grid value at which SNR reaches ``threshold``."""
        hits = np.nonzero(self.snr[name] >= threshold)[0]
        return float(self.lambda_grid[hits[0]]) if len(hits) else None


def snr_sweep(
    statistics: str | Sequence[str],
    lambda_grid: Sequence[float],
    n: int,
    samples: int,
    seed: int = 0,
    threads: int = 1,
) -> SnrCurve:
    """|mean_lam(stat) - mean_0(stat)| / std_0(stat) over a Rosenzweig-Porter grid.

    The reference uses the lam = 0 samples of the same run (same n, count and seed).
    """
    names = [statistics] if isinstance(statistics, str) else list(statistics)
    grid = np.asarray(lambda_grid, dtype=float)
    if len(grid) == 0:
        raise ValueError("lambda grid is empty")
    if samples < 30:
        raise ValueError("need at least 30 samples per grid point")

    def stats_at(lam: float) -> dict[str, np.ndarray]:
        spec = EnsembleSpec(Kind.RP, n, lam=float(lam), master_seed=seed)
        return evaluate(sample_spectra(spec, samples, threads), names)

    per_point = [stats_at(lam) for lam in grid]
    zero = np.nonzero(grid == 0.0)[0]
    ref = per_point[zero[0]] if len(zero) else stats_at(0.0)

    snr, ref_mean, ref_std, values = {}, {}, {}, {}
    for name in names:
        m0, s0 = mean_std(ref[name])
        if s0 <= 0:
            raise ValueError(f"reference standard deviation of {name!r} is zero")
        ref_mean[name], ref_std[name] = m0, s0
        snr[name] = np.array([abs(mean_std(p[name])[0] - m0) / s0 for p in per_point])
        values[name] = np.stack([p[name] for p in per_point])
    return SnrCurve(grid, snr, ref_mean, ref_std, values, n, samples, seed)


def powerlaw_exponent(xs, ys) -> float:
    """Least-squares slope of log y against log x."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("need at least two (x, y) points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("power-law fit needs positive data")
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)


def pearson_correlation(xs, ys) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) != len(y) or len(x) < 3:
        raise ValueError("need two equal-length sequences of at least 3 values")
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = math.fsum(dx * dx), math.fsum(dy * dy)
    if sxx == 0 or syy == 0:
        raise ValueError("zero variance")
    return math.fsum(dx * dy) / math.sqrt(sxx * syy)
