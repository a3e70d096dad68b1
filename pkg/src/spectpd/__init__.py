"""Exact persistence diagrams of random-matrix quadratic forms and spectral diagnostics."""
from .analysis import (
    AucResult,
    ScoreSet,
    SnrCurve,
    auc,
    bootstrap_auc_ci,
    fisher_combine,
    pearson_correlation,
    powerlaw_exponent,
    snr_sweep,
    wasserstein2,
)
from .eigensolve import EigensolveError, Spectrum, spectrum, spectrum_hermitian, spectrum_symmetric
from .ensembles import (
    EnsembleSpec,
    Kind,
    MatrixSample,
    draw,
    generate_goe,
    generate_gue,
    generate_rp,
    generate_spiked_wishart,
    generate_wishart,
    sample_seed,
)
from .montecarlo import largest_eigenvalue, sample_spectra
from .persistence import (
    Bar,
    DensityModel,
    PersistenceDiagram,
    SummaryStats,
    UndefinedEntropyError,
    density_eval,
    diagram_from_spectrum,
    max_bar_fraction,
    pe_asymptotic,
    pe_closed_form_goe,
    persistence_entropy,
    semicircle_cdf,
    summary_stats,
    total_persistence,
    tp_wishart_asymptotic,
)
from .spectral_stats import (
    KsResult,
    SpacingSequence,
    ks_test,
    normalized_spacing_variance,
    spacing_ratio,
    spacings,
    unfold_bulk,
    wigner_surmise,
    wigner_surmise_cdf,
)

__version__ = "0.1.0"
