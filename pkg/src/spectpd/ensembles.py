"""Seeded random-matrix ensembles: GOE, GUE, Wishart, Rosenzweig-Porter, spiked Wishart.

Randomness model
----------------
Every sample draws from its own Philox-4x64 stream (``numpy.random.Philox``,
counter based, output identical across platforms). The stream key is a
64-bit seed obtained by :func:`sample_seed`, which hashes
``"{master_seed}|{spec_tag}|{index}"`` with SHA-256 and takes the first
8 bytes little-endian. Sub-streams inside one sample (e.g. the GOE and
diagonal parts of a Rosenzweig-Porter matrix) are keyed the same way from
``"{seed}|{tag}"``.

Standard normals come from the Box-Muller transform applied to pairs of
53-bit uniforms ``u = (raw >> 11 + 0.5) / 2**53`` in (0, 1):
``z0 = sqrt(-2 log u1) cos(2 pi u2)``, ``z1 = sqrt(-2 log u1) sin(2 pi u2)``,
emitted interleaved (z0, z1, z0, z1, ...).
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

U64_MASK = (1 << 64) - 1


class Kind(str, Enum):
    GOE = "GOE"
    GUE = "GUE"
    WISHART = "Wishart"
    RP = "RosenzweigPorter"
    SPIKED = "SpikedWishart"


_REQUIRED = {
    Kind.GOE: set(),
    Kind.GUE: set(),
    Kind.WISHART: {"p"},
    Kind.RP: {"lam"},
    Kind.SPIKED: {"p", "theta"},
}


def _real(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class EnsembleSpec:
    kind: Kind
    n: int
    p: int | None = None
    lam: float | None = None
    theta: float | None = None
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"invalid dimension n={self.n}; need an integer >= 2")
        present = {k for k in ("p", "lam", "theta") if getattr(self, k) is not None}
        required = _REQUIRED[self.kind]
        if present != required:
            missing, extra = required - present, present - required
            raise ValueError(
                f"{self.kind.value}: missing parameters {sorted(missing)}, "
                f"extraneous parameters {sorted(extra)}"
            )
        if self.p is not None and (int(self.p) != self.p or self.p <= self.n):
            raise ValueError(f"invalid aspect ratio: need integer p > n, got n={self.n}, p={self.p}")
        if self.lam is not None and not self.lam >= 0:
            raise ValueError(f"invalid parameter lambda={self.lam}; need lambda >= 0")
        if self.theta is not None and not self.theta >= 0:
            raise ValueError(f"invalid parameter theta={self.theta}; need theta >= 0")
        if not 0 <= self.master_seed <= U64_MASK:
            raise ValueError("master_seed must be an unsigned 64-bit integer")

    @property
    def gamma(self) -> float | None:
        return None if self.p is None else self.n / self.p

    def tag(self) -> str:
        """Canonical one-line serialization without the master seed.

        Keys in fixed order ``kind,n,p,lambda,theta``; absent fields omitted.
        """
        parts = [f"kind={self.kind.value}", f"n={int(self.n)}"]
        if self.p is not None:
            parts.append(f"p={int(self.p)}")
        if self.lam is not None:
            parts.append(f"lambda={_real(self.lam)}")
        if self.theta is not None:
            parts.append(f"theta={_real(self.theta)}")
        return ",".join(parts)

    @classmethod
    def from_tag(cls, tag: str, master_seed: int = 0) -> "EnsembleSpec":
        fields = dict(item.split("=", 1) for item in tag.split(","))
        return cls(
            kind=Kind(fields["kind"]),
            n=int(fields["n"]),
            p=int(fields["p"]) if "p" in fields else None,
            lam=float(fields["lambda"]) if "lambda" in fields else None,
            theta=float(fields["theta"]) if "theta" in fields else None,
            master_seed=master_seed,
        )


@dataclass
class MatrixSample:
    real_part: np.ndarray
    imag_part: np.ndarray | None = None
    spec: EnsembleSpec | None = None
    index: int | None = None

    @property
    def n(self) -> int:
        return self.real_part.shape[0]

    @property
    def is_hermitian(self) -> bool:
        return self.imag_part is not None

    def dense(self) -> np.ndarray:
        if self.imag_part is None:
            return self.real_part
        return self.real_part + 1j * self.imag_part


def _hash64(text: str) -> int:
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "little")


def sample_seed(master_seed: int, spec_tag: str, index: int) -> int:
    """Stream seed of sample ``index`` of the ensemble ``spec_tag``."""
    return _hash64(f"{int(master_seed)}|{spec_tag}|{int(index)}")


def substream_seed(seed: int, tag: str) -> int:
    return _hash64(f"{int(seed)}|{tag}")


def standard_normals(seed: int, size: int) -> np.ndarray:
    """``size`` iid N(0, 1) draws from the Philox stream keyed by ``seed`` (Box-Muller)."""
    pairs = (size + 1) // 2
    raw = np.random.Philox(key=int(seed) & U64_MASK).random_raw(2 * pairs)
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    radius = np.sqrt(-2.0 * np.log(u[0::2]))
    angle = 2.0 * math.pi * u[1::2]
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(angle)
    z[1::2] = radius * np.sin(angle)
    return z[:size]


def _check_n(n: int) -> None:
    if int(n) != n or n < 2:
        raise ValueError(f"invalid dimension n={n}; need an integer >= 2")


def _goe_matrix(n: int, seed: int) -> np.ndarray:
    a = standard_normals(substream_seed(seed, "A"), n * n).reshape(n, n)
    return (a + a.T) / math.sqrt(2 * n)


def generate_goe(n: int, seed: int) -> MatrixSample:
    """M = (A + A^T)/sqrt(2n); semicircle on [-2, 2]."""
    _check_n(n)
    return MatrixSample(_goe_matrix(n, seed))


def generate_gue(n: int, seed: int) -> MatrixSample:
    """Hermitian H with off-diagonal (x + iy)/sqrt(2n) and diagonal x/sqrt(n)."""
    _check_n(n)
    z = standard_normals(substream_seed(seed, "A"), 2 * n * n)
    x = z[: n * n].reshape(n, n)
    y = z[n * n :].reshape(n, n)
    upper_re = np.triu(x, 1) / math.sqrt(2 * n)
    upper_im = np.triu(y, 1) / math.sqrt(2 * n)
    real = upper_re + upper_re.T + np.diag(np.diag(x) / math.sqrt(n))
    imag = upper_im - upper_im.T
    return MatrixSample(real, imag)


def _gram(x: np.ndarray, p: int) -> np.ndarray:
    w = (x.T @ x) / p
    # BLAS does not promise a bitwise-symmetric product.
    return np.triu(w) + np.triu(w, 1).T


def generate_wishart(n: int, p: int, seed: int) -> MatrixSample:
    """W = X^T X / p with X a p x n standard normal matrix."""
    return generate_spiked_wishart(n, p, 0.0, seed)


def generate_spiked_wishart(n: int, p: int, theta: float, seed: int) -> MatrixSample:
    """Wishart with population covariance I + theta e1 e1^T (column 1 of X scaled)."""
    _check_n(n)
    if int(p) != p or p <= n:
        raise ValueError(f"invalid aspect ratio: need p > n, got n={n}, p={p}")
    if not theta >= 0:
        raise ValueError(f"invalid parameter theta={theta}")
    x = standard_normals(substream_seed(seed, "A"), p * n).reshape(p, n)
    x[:, 0] *= math.sqrt(1.0 + theta)
    return MatrixSample(_gram(x, p))


def generate_rp(n: int, lam: float, seed: int) -> MatrixSample:
    """Rosenzweig-Porter: GOE (stream A) + sqrt(lam) diag(z) (stream B)."""
    _check_n(n)
    if not lam >= 0:
        raise ValueError(f"invalid parameter lambda={lam}; need lambda >= 0")
    h = _goe_matrix(n, seed)
    z = standard_normals(substream_seed(seed, "B"), n)
    h[np.diag_indices(n)] += math.sqrt(lam) * z
    return MatrixSample(h)


def draw(spec: EnsembleSpec, index: int) -> MatrixSample:
    """Sample ``index`` of ``spec``; a pure function of (spec, index)."""
    seed = sample_seed(spec.master_seed, spec.tag(), index)
    if spec.kind is Kind.GOE:
        sample = generate_goe(spec.n, seed)
    elif spec.kind is Kind.GUE:
        sample = generate_gue(spec.n, seed)
    elif spec.kind is Kind.WISHART:
        sample = generate_wishart(spec.n, spec.p, seed)
    elif spec.kind is Kind.RP:
        sample = generate_rp(spec.n, spec.lam, seed)
    else:
        sample = generate_spiked_wishart(spec.n, spec.p, spec.theta, seed)
    sample.spec = spec
    sample.index = index
    return sample
