"""Persistence diagrams of x^T M x on the unit sphere, built from the spectrum of M.

For ascending eigenvalues l_1 <= ... <= l_n the sublevel filtration has
finite bars (l_k, l_{k+1}) in dimension k-1 for k = 1..n-1 and two
essential bars (l_1, inf) in dimension 0 and (l_n, inf) in dimension n-1.
Everything here is therefore a cheap function of the eigenvalue spacings.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .eigensolve import SpectrumLike, as_values

GL_ORDER = 200


class UndefinedEntropyError(ValueError):
    """All eigenvalues coincide, so bar lengths cannot be normalized."""


class Bar(NamedTuple):
    birth: float
    death: float
    dim: int

    @property
    def length(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class PersistenceDiagram:
    births: np.ndarray
    deaths: np.ndarray

    @property
    def n(self) -> int:
        return len(self.births) + 1

    @property
    def dims(self) -> np.ndarray:
        return np.arange(len(self.births))

    @property
    def lengths(self) -> np.ndarray:
        return self.deaths - self.births

    @property
    def finite_bars(self) -> list[Bar]:
        return [Bar(float(b), float(d), k) for k, (b, d) in enumerate(zip(self.births, self.deaths))]

    @property
    def infinite_bars(self) -> tuple[Bar, Bar]:
        return (
            Bar(float(self.births[0]), math.inf, 0),
            Bar(float(self.deaths[-1]), math.inf, self.n - 1),
        )

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return np.array_equal(self.births, other.births) and np.array_equal(self.deaths, other.deaths)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["birth", "death", "dim"])
        for bar in self.finite_bars + list(self.infinite_bars):
            w.writerow([repr(bar.birth), "inf" if math.isinf(bar.death) else repr(bar.death), bar.dim])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PersistenceDiagram":
        rows = list(csv.DictReader(io.StringIO(text)))
        finite = sorted(
            (int(r["dim"]), float(r["birth"]), float(r["death"])) for r in rows if r["death"] != "inf"
        )
        if [d for d, _, _ in finite] != list(range(len(finite))):
            raise ValueError("finite bars must occupy dimensions 0..n-2 exactly once")
        if len(rows) - len(finite) != 2:
            raise ValueError("expected exactly two infinite bars")
        return cls(np.array([b for _, b, _ in finite]), np.array([d for _, _, d in finite]))


def diagram_from_spectrum(s: SpectrumLike) -> PersistenceDiagram:
    lam = as_values(s)
    if lam.ndim != 1 or len(lam) < 2:
        raise ValueError("need at least two eigenvalues")
    if not np.all(np.isfinite(lam)):
        raise ValueError("eigenvalues must be finite")
    if np.any(np.diff(lam) < 0):
        raise ValueError("eigenvalues must be sorted ascending")
    return PersistenceDiagram(lam[:-1].copy(), lam[1:].copy())


def total_persistence(d: PersistenceDiagram) -> float:
    # l_n - l_1 directly: the telescoped sum is then exact in floating point.
    return float(d.deaths[-1] - d.births[0])


def _normalized_lengths(d: PersistenceDiagram) -> np.ndarray:
    tp = total_persistence(d)
    if tp <= 0:
        raise UndefinedEntropyError("total persistence is zero (all eigenvalues equal)")
    return d.lengths / tp


def persistence_entropy(d: PersistenceDiagram) -> float:
    """Shannon entropy (nats) of bar lengths / TP; zero-length bars add nothing."""
    p = _normalized_lengths(d)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def max_bar_fraction(d: PersistenceDiagram) -> float:
    return float(np.max(_normalized_lengths(d)))


@dataclass(frozen=True)
class SummaryStats:
    tp: float
    pe: float
    mu: float


def summary_stats(d: PersistenceDiagram) -> SummaryStats:
    return SummaryStats(total_persistence(d), persistence_entropy(d), max_bar_fraction(d))


def pe_closed_form_goe(n: int) -> float:
    """Large-n GOE persistence entropy, log(8n/pi) - 1."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return math.log(8 * n / math.pi) - 1


def tp_wishart_asymptotic(gamma: float) -> float:
    """Width 4 sqrt(gamma) of the Marchenko-Pastur support."""
    if not 0 < gamma < 1:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    return 4 * math.sqrt(gamma)


class DensityKind(str, Enum):
    SEMICIRCLE = "Semicircle"
    MARCHENKO_PASTUR = "MarchenkoPastur"


@dataclass(frozen=True)
class DensityModel:
    kind: DensityKind
    gamma: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", DensityKind(self.kind))
        if self.kind is DensityKind.MARCHENKO_PASTUR:
            if self.gamma is None or not 0 < self.gamma < 1:
                raise ValueError(f"Marchenko-Pastur needs gamma in (0, 1), got {self.gamma}")
        elif self.gamma is not None:
            raise ValueError("semicircle takes no gamma")

    @classmethod
    def semicircle(cls) -> "DensityModel":
        return cls(DensityKind.SEMICIRCLE)

    @classmethod
    def marchenko_pastur(cls, gamma: float) -> "DensityModel":
        return cls(DensityKind.MARCHENKO_PASTUR, gamma)

    @property
    def support(self) -> tuple[float, float]:
        if self.kind is DensityKind.SEMICIRCLE:
            return (-2.0, 2.0)
        r = math.sqrt(self.gamma)
        return ((1 - r) ** 2, (1 + r) ** 2)

    @property
    def width(self) -> float:
        lo, hi = self.support
        return hi - lo


def density_eval(m: DensityModel, lam) -> np.ndarray | float:
    """Limiting eigenvalue density at ``lam``; zero outside the support."""
    x = np.asarray(lam, dtype=float)
    lo, hi = m.support
    inside = (x >= lo) & (x <= hi)
    xc = np.where(inside, x, (lo + hi) / 2)
    root = np.sqrt(np.maximum((hi - xc) * (xc - lo), 0.0))
    if m.kind is DensityKind.SEMICIRCLE:
        rho = root / (2 * math.pi)
    else:
        rho = root / (2 * math.pi * m.gamma * xc)
    out = np.where(inside, rho, 0.0)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _sin2_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights mapped onto theta in [0, pi/2]."""
    x, w = _gauss_legendre(order)
    half = math.pi / 4
    return half * (x + 1), half * w


def _integrate_support(m: DensityModel, fn_of_theta, order: int) -> float:
    # lam = lo + width sin^2(theta) removes the square-root edge behaviour.
    theta, w = _sin2_nodes(order)
    jac = 2 * m.width * np.sin(theta) * np.cos(theta)
    val = float(np.sum(w * jac * fn_of_theta(theta)))
    if not math.isfinite(val):
        raise ArithmeticError("quadrature produced a non-finite value")
    return val


def _log_density_theta(m: DensityModel, theta: np.ndarray) -> np.ndarray:
    lo, _ = m.support
    lam = lo + m.width * np.sin(theta) ** 2
    # (hi - lam)(lam - lo) = width^2 sin^2 cos^2, evaluated without cancellation.
    log_root = np.log(m.width * np.sin(theta) * np.cos(theta))
    if m.kind is DensityKind.SEMICIRCLE:
        return log_root - math.log(2 * math.pi)
    return log_root - np.log(2 * math.pi * m.gamma * lam)


def log_density_integral(m: DensityModel, order: int = GL_ORDER) -> float:
    """Integral of log rho over the support."""
    return _integrate_support(m, lambda t: _log_density_theta(m, t), order)


def density_mass(m: DensityModel, order: int = GL_ORDER) -> float:
    lo = m.support[0]
    return _integrate_support(m, lambda t: density_eval(m, lo + m.width * np.sin(t) ** 2), order)


def pe_asymptotic(m: DensityModel, n: int, order: int = GL_ORDER) -> float:
    """Large-n persistence entropy log(n TP) + (1/TP) * integral of log rho."""
    if n < 2:
        raise ValueError("n must be >= 2")
    tp = m.width
    return math.log(n * tp) + log_density_integral(m, order) / tp


def semicircle_cdf(lam):
    """CDF of the semicircle on [-2, 2]."""
    x = np.clip(np.asarray(lam, dtype=float), -2.0, 2.0)
    out = 0.5 + x * np.sqrt(4 - x * x) / (4 * math.pi) + np.arcsin(x / 2) / math.pi
    return float(out) if out.ndim == 0 else out
