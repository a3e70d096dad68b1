"""Ascending spectra of real symmetric and complex Hermitian matrices.

Backed by LAPACK (``numpy.linalg.eigvalsh``: Householder tridiagonalization
plus implicit QL/QR or divide-and-conquer). Failures surface as
:class:`EigensolveError`, never as NaNs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .ensembles import EnsembleSpec, MatrixSample


class EigensolveError(RuntimeError):
    """The eigenvalue iteration did not converge."""


@dataclass
class Spectrum:
    values: np.ndarray
    spec: EnsembleSpec | None = None
    index: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValueError("spectrum must be one-dimensional")

    def __len__(self) -> int:
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    @property
    def n(self) -> int:
        return len(self.values)


SpectrumLike = Union[Spectrum, np.ndarray, "list[float]"]


def as_values(s: SpectrumLike) -> np.ndarray:
    if isinstance(s, Spectrum):
        return s.values
    return np.asarray(s, dtype=float)


def _check_square(m: np.ndarray, name: str) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")


def _eigvalsh(a: np.ndarray) -> np.ndarray:
    try:
        w = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise EigensolveError(str(exc)) from exc
    # eigvalsh returns ascending order; sort anyway so the contract never depends on the backend.
    return np.sort(w)


def spectrum_symmetric(m: np.ndarray) -> Spectrum:
    m = np.asarray(m, dtype=float)
    _check_square(m, "M")
    return Spectrum(_eigvalsh(m))


def spectrum_hermitian(real_part: np.ndarray, imag_part: np.ndarray | None = None) -> Spectrum:
    """Spectrum of ``real_part + 1j * imag_part`` (a Hermitian matrix)."""
    x = np.asarray(real_part, dtype=float)
    _check_square(x, "real part")
    if imag_part is None:
        return Spectrum(_eigvalsh(x))
    y = np.asarray(imag_part, dtype=float)
    _check_square(y, "imaginary part")
    if y.shape != x.shape:
        raise ValueError("real and imaginary parts differ in shape")
    return Spectrum(_eigvalsh(x + 1j * y))


def spectrum(sample: MatrixSample) -> Spectrum:
    if sample.imag_part is None:
        out = spectrum_symmetric(sample.real_part)
    else:
        out = spectrum_hermitian(sample.real_part, sample.imag_part)
    out.spec, out.index = sample.spec, sample.index
    return out


def eigenpairs(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors; validation use only."""
    m = np.asarray(m)
    _check_square(m, "M")
    try:
        return np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise EigensolveError(str(exc)) from exc
