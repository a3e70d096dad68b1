import math

import numpy as np
import pytest
from scipy.stats import ortho_group

from spectpd.eigensolve import EigensolveError, Spectrum, eigenpairs, spectrum, spectrum_hermitian, spectrum_symmetric
from spectpd.ensembles import generate_goe, generate_gue, generate_wishart


def test_diagonal():
    np.testing.assert_array_equal(spectrum_symmetric(np.diag([3.0, 1.0, 2.0])).values, [1, 2, 3])


def test_swap_matrix():
    np.testing.assert_allclose(spectrum_symmetric([[0, 1], [1, 0]]).values, [-1, 1], atol=1e-15)


def test_discrete_laplacian_closed_form():
    n = 50
    m = 2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    k = np.arange(1, n + 1)
    exact = 2 - 2 * np.cos(k * math.pi / (n + 1))
    assert np.max(np.abs(spectrum_symmetric(m).values - np.sort(exact))) <= 1e-10


def test_hermitian_examples():
    np.testing.assert_array_equal(spectrum_hermitian(np.diag([1.0, 5.0]), np.zeros((2, 2))).values, [1, 5])
    pauli_y_im = np.array([[0.0, -1.0], [1.0, 0.0]])
    np.testing.assert_allclose(spectrum_hermitian(np.zeros((2, 2)), pauli_y_im).values, [-1, 1], atol=1e-15)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        spectrum_symmetric([[1.0, np.nan], [np.nan, 1.0]])
    with pytest.raises(ValueError):
        spectrum_symmetric(np.ones((2, 3)))
    with pytest.raises(ValueError):
        spectrum_hermitian(np.eye(2), np.zeros((3, 3)))
    with pytest.raises(ValueError):
        spectrum_hermitian(np.eye(2), [[0, np.inf], [-np.inf, 0]])


def test_non_convergence_is_explicit(monkeypatch):
    def boom(a):
        raise np.linalg.LinAlgError("Eigenvalues did not converge")

    monkeypatch.setattr(np.linalg, "eigvalsh", boom)
    with pytest.raises(EigensolveError):
        spectrum_symmetric(np.eye(3))


@pytest.mark.parametrize("n", [10, 100])
def test_trace_conservation(n):
    for seed in range(500):
        for sample in (generate_goe(n, seed), generate_gue(n, seed)):
            lam = spectrum(sample).values
            m = sample.real_part
            scale = np.max(np.abs(sample.dense()))
            assert abs(math.fsum(lam) - np.trace(m)) <= 1e-10 * n * scale
            assert np.all(np.diff(lam) >= 0)
            assert len(lam) == n


def test_orthogonal_similarity_invariance():
    rng = np.random.default_rng(3)
    for trial in range(100):
        m = generate_goe(20, trial).real_part
        q = ortho_group.rvs(20, random_state=rng)
        rotated = q.T @ m @ q
        rotated = (rotated + rotated.T) / 2
        np.testing.assert_allclose(spectrum_symmetric(rotated).values, spectrum_symmetric(m).values, atol=1e-9)


def test_negation_reverses():
    for seed in range(20):
        m = generate_wishart(15, 30, seed).real_part
        np.testing.assert_allclose(spectrum_symmetric(-m).values, -spectrum_symmetric(m).values[::-1], atol=1e-10)


def test_residuals_validation_path():
    for sample in (generate_goe(40, 1), generate_gue(40, 2)):
        h = sample.dense()
        w, v = eigenpairs(h)
        norm = np.linalg.norm(h, 2)
        for k in range(len(w)):
            assert np.linalg.norm(h @ v[:, k] - w[k] * v[:, k]) <= 1e-9 * norm
        np.testing.assert_allclose(w, spectrum(sample).values, atol=1e-12)


def test_spectrum_carries_provenance():
    from spectpd.ensembles import EnsembleSpec, Kind, draw

    spec = EnsembleSpec(Kind.GOE, 5, master_seed=3)
    s = spectrum(draw(spec, 2))
    assert s.spec == spec and s.index == 2 and s.n == 5
    assert isinstance(s, Spectrum)
    np.testing.assert_array_equal(np.asarray(s), s.values)
