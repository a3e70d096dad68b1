"""Batch experiments regenerating every table and figure dataset.

Each ``run_*`` function takes a resolved :class:`ExperimentConfig` and returns
an :class:`ExperimentResult` whose rows carry ``master_seed`` and ``spec_tag``;
sample ``i`` of a row is ``draw(EnsembleSpec.from_tag(spec_tag, master_seed), i)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import (
    ScoreSet,
    auc,
    bootstrap_auc_ci,
    fisher_combine,
    mean_std,
    pearson_correlation,
    powerlaw_exponent,
    snr_sweep,
    wasserstein2,
)
from .config import ExperimentConfig
from .ensembles import EnsembleSpec, Kind, sample_seed
from .montecarlo import evaluate, sample_spectra
from .persistence import (
    DensityModel,
    diagram_from_spectrum,
    pe_asymptotic,
    pe_closed_form_goe,
    semicircle_cdf,
    tp_wishart_asymptotic,
)
from .spectral_stats import ks_statistic, ks_test, unfold_bulk, wigner_surmise, wigner_surmise_cdf


@dataclass
class ExperimentResult:
    name: str
    tables: dict[str, list[dict]] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def table(self, key: str) -> list[dict]:
        return self.tables[key]

    def row(self, key: str, **match) -> dict:
        for r in self.tables[key]:
            if all(r.get(k) == v for k, v in match.items()):
                return r
        raise KeyError(f"no row in {key} matching {match}")


def _cv(x) -> float:
    m, s = mean_std(x)
    return s / m


def _provenance(spec: EnsembleSpec, count: int) -> dict:
    return {"master_seed": spec.master_seed, "spec_tag": spec.tag(), "samples": count}


def _spec(kind: Kind, n: int, cfg: ExperimentConfig, **params) -> EnsembleSpec:
    return EnsembleSpec(kind, n, master_seed=cfg.master_seed, **params)


def _wishart(n: int, cfg: ExperimentConfig) -> EnsembleSpec:
    return _spec(Kind.WISHART, n, cfg, p=cfg.wishart_ratio * n)


def run_universality(cfg: ExperimentConfig) -> ExperimentResult:
    rows = []
    for n in cfg.sizes:
        spec = _spec(Kind.GOE, n, cfg)
        v = evaluate(sample_spectra(spec, cfg.samples_per_cell, cfg.threads), ["tp", "pe", "mu"])
        row = {"n": n}
        for name in ("tp", "pe", "mu"):
            row[f"mean_{name}"], row[f"std_{name}"] = mean_std(v[name])
            row[f"cv_{name}"] = _cv(v[name])
        rows.append(row | _provenance(spec, cfg.samples_per_cell))
    exponents = []
    if len(cfg.sizes) >= 2:
        for name in ("tp", "pe", "mu"):
            exponents.append(
                {"statistic": name, "cv_exponent": powerlaw_exponent(cfg.sizes, [r[f"cv_{name}"] for r in rows])}
            )
    return ExperimentResult("universality", {"cv": rows, "exponents": exponents})


def run_pe_table(cfg: ExperimentConfig) -> ExperimentResult:
    rows = []
    semicircle = DensityModel.semicircle()
    for n in cfg.sizes:
        spec = _spec(Kind.GOE, n, cfg)
        pe = evaluate(sample_spectra(spec, cfg.samples_per_cell, cfg.threads), ["pe"])["pe"]
        mean, std = mean_std(pe)
        analytic = pe_closed_form_goe(n)
        rows.append(
            {
                "n": n,
                "pe_mean": mean,
                "pe_sem": std / math.sqrt(len(pe)),
                "pe_analytic": analytic,
                "pe_quadrature": pe_asymptotic(semicircle, n),
                "bias_percent": 100 * (analytic - mean) / analytic,
            }
            | _provenance(spec, cfg.samples_per_cell)
        )
    exponents = []
    biases = [r["bias_percent"] for r in rows]
    if len(rows) >= 2 and all(b > 0 for b in biases):
        exponents.append({"quantity": "bias_percent", "exponent": powerlaw_exponent(cfg.sizes, biases)})
    return ExperimentResult("pe_table", {"pe": rows, "exponents": exponents})


def _ensemble_specs(n: int, cfg: ExperimentConfig) -> list[tuple[str, EnsembleSpec, DensityModel, int]]:
    w = _wishart(n, cfg)
    return [
        ("GOE", _spec(Kind.GOE, n, cfg), DensityModel.semicircle(), 1),
        ("GUE", _spec(Kind.GUE, n, cfg), DensityModel.semicircle(), 2),
        ("Wishart", w, DensityModel.marchenko_pastur(w.gamma), 1),
    ]


def run_ensembles(cfg: ExperimentConfig) -> ExperimentResult:
    rows = []
    for n in cfg.sizes:
        for label, spec, model, _ in _ensemble_specs(n, cfg):
            v = evaluate(sample_spectra(spec, cfg.samples_per_cell, cfg.threads), ["tp", "pe", "mu"])
            row = {"ensemble": label, "n": n, "p": spec.p}
            for name in ("tp", "pe", "mu"):
                row[f"mean_{name}"], row[f"std_{name}"] = mean_std(v[name])
            row["tp_asymptotic"] = model.width if spec.kind is not Kind.WISHART else tp_wishart_asymptotic(spec.gamma)
            row["pe_asymptotic"] = pe_asymptotic(model, n)
            rows.append(row | _provenance(spec, cfg.samples_per_cell))
    return ExperimentResult("ensembles", {"ensembles": rows})


HIST_EDGES = np.round(np.arange(0.0, 4.0 + 1e-9, 0.1), 10)


def run_surmise_ks(cfg: ExperimentConfig) -> ExperimentResult:
    ks_rows, hist_rows, pooled_rows = [], [], []
    for n in cfg.sizes:
        for label, spec, model, beta in _ensemble_specs(n, cfg):
            spectra = sample_spectra(spec, cfg.samples_per_cell, cfg.threads)
            pooled = np.concatenate([unfold_bulk(s, model, cfg.bulk_fraction).values for s in spectra])
            for test_beta in (1, 2):
                res = ks_test(pooled, lambda x, b=test_beta: wigner_surmise_cdf(b, x))
                ks_rows.append(
                    {
                        "ensemble": label,
                        "n": n,
                        "surmise_beta": test_beta,
                        "matched": test_beta == beta,
                        "ks_statistic": res.statistic,
                        "p_value": res.p_value,
                        "sample_size": res.sample_size,
                        "mean_spacing": float(pooled.mean()),
                    }
                    | _provenance(spec, cfg.samples_per_cell)
                )
            counts, _ = np.histogram(pooled, bins=HIST_EDGES)
            density = counts / (len(pooled) * np.diff(HIST_EDGES))
            mids = 0.5 * (HIST_EDGES[:-1] + HIST_EDGES[1:])
            for lo, hi, mid, d in zip(HIST_EDGES[:-1], HIST_EDGES[1:], mids, density):
                hist_rows.append(
                    {
                        "ensemble": label,
                        "n": n,
                        "bin_lo": float(lo),
                        "bin_hi": float(hi),
                        "density": float(d),
                        "surmise_beta1": wigner_surmise(1, mid),
                        "surmise_beta2": wigner_surmise(2, mid),
                    }
                )
            pooled_rows.extend({"ensemble": label, "n": n, "spacing": float(s)} for s in pooled)
    return ExperimentResult(
        "surmise_ks", {"ks": ks_rows, "histogram": hist_rows, "pooled_spacings": pooled_rows}
    )


def run_w2(cfg: ExperimentConfig) -> ExperimentResult:
    pairs = cfg.samples_per_cell
    summary, per_pair = [], []
    for n in cfg.sizes:
        goe_spec, wis_spec = _spec(Kind.GOE, n, cfg), _wishart(n, cfg)
        goe = [diagram_from_spectrum(s) for s in sample_spectra(goe_spec, 2 * pairs, cfg.threads)]
        wis = [diagram_from_spectrum(s) for s in sample_spectra(wis_spec, pairs, cfg.threads)]
        same = [wasserstein2(goe[2 * i], goe[2 * i + 1]) for i in range(pairs)]
        cross = [wasserstein2(goe[2 * i], wis[i]) for i in range(pairs)]
        for i in range(pairs):
            per_pair.append({"n": n, "pair": i, "w2_goe_goe": same[i], "w2_goe_wishart": cross[i]})
        m_same, s_same = mean_std(same)
        m_cross, s_cross = mean_std(cross)
        summary.append(
            {
                "n": n,
                "pairs": pairs,
                "w2_goe_goe_mean": m_same,
                "w2_goe_goe_std": s_same,
                "w2_goe_wishart_mean": m_cross,
                "w2_goe_wishart_std": s_cross,
                "separation_ratio": m_cross / m_same,
                "master_seed": cfg.master_seed,
                "goe_spec_tag": goe_spec.tag(),
                "wishart_spec_tag": wis_spec.tag(),
            }
        )
    return ExperimentResult("w2", {"summary": summary, "pairs": per_pair})


def _boot_seed(cfg: ExperimentConfig, label: str) -> int:
    return sample_seed(cfg.master_seed, f"bootstrap|{label}", 0)


def run_auc(cfg: ExperimentConfig) -> ExperimentResult:
    rows, corr = [], []
    names = ["pe", "r", "spacing_variance"]
    for n in cfg.sizes:
        goe_spec, gue_spec = _spec(Kind.GOE, n, cfg), _spec(Kind.GUE, n, cfg)
        a = evaluate(sample_spectra(goe_spec, cfg.samples_per_cell, cfg.threads), names)
        b = evaluate(sample_spectra(gue_spec, cfg.samples_per_cell, cfg.threads), names)
        score_sets = [ScoreSet(a[k], b[k], k) for k in names]
        score_sets.append(
            fisher_combine(np.column_stack([a["pe"], a["r"]]), np.column_stack([b["pe"], b["r"]]), "pe+r")
        )
        for ss in score_sets:
            res = auc(ss)
            lo, hi = bootstrap_auc_ci(
                ss, cfg.bootstrap_replicates, 0.95, _boot_seed(cfg, f"auc|n={n}|{ss.statistic_name}")
            )
            rows.append(
                {
                    "n": n,
                    "statistic": ss.statistic_name,
                    "auc": res.value,
                    "ci_lo": lo,
                    "ci_hi": hi,
                    "flipped": res.flipped,
                    "samples_per_class": cfg.samples_per_cell,
                    "master_seed": cfg.master_seed,
                    "class_a_tag": goe_spec.tag(),
                    "class_b_tag": gue_spec.tag(),
                }
            )
        corr.append(
            {"n": n, "pearson_pe_r_goe": pearson_correlation(a["pe"], a["r"])}
            | _provenance(goe_spec, cfg.samples_per_cell)
        )
    return ExperimentResult("auc", {"auc": rows, "correlation": corr})


RP_STATISTICS = ("pe", "r", "spacing_variance")


def run_rp_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    rows, crossings = [], []
    for n in cfg.sizes:
        curve = snr_sweep(RP_STATISTICS, cfg.lambda_grid, n, cfg.samples_per_cell, cfg.master_seed, cfg.threads)
        for i, lam in enumerate(curve.lambda_grid):
            row = {"n": n, "lambda": float(lam)}
            for name in RP_STATISTICS:
                row[f"snr_{name}"] = float(curve.snr[name][i])
                row[f"mean_{name}"] = mean_std(curve.values[name][i])[0]
            spec = EnsembleSpec(Kind.RP, n, lam=float(lam), master_seed=cfg.master_seed)
            rows.append(row | _provenance(spec, cfg.samples_per_cell))
        for name in RP_STATISTICS:
            crossings.append(
                {
                    "n": n,
                    "statistic": name,
                    "first_lambda_snr_ge_3": curve.first_crossing(name, 3.0),
                    "max_snr": float(curve.snr[name].max()),
                    "reference_mean": curve.reference_mean[name],
                    "reference_std": curve.reference_std[name],
                }
            )
    return ExperimentResult("rp_sweep", {"snr": rows, "crossings": crossings})


def run_spiked(cfg: ExperimentConfig) -> ExperimentResult:
    rows = []
    count = cfg.samples_per_cell
    names = ["lambda_max", "pe"]
    for n in cfg.sizes:
        p = cfg.wishart_ratio * n
        null_spec = _spec(Kind.SPIKED, n, cfg, p=p, theta=0.0)
        null = evaluate(sample_spectra(null_spec, count, cfg.threads), names)
        for theta in cfg.theta_grid:
            alt_spec = _spec(Kind.SPIKED, n, cfg, p=p, theta=float(theta))
            # indices count..2*count-1 keep the theta = 0 alternative independent of the null class
            alt = evaluate(sample_spectra(alt_spec, count, cfg.threads, start=count), names)
            row = {"n": n, "p": p, "theta": float(theta)}
            for name in names:
                ss = ScoreSet(null[name], alt[name], name)
                res = auc(ss)
                lo, hi = bootstrap_auc_ci(
                    ss, cfg.bootstrap_replicates, 0.95, _boot_seed(cfg, f"spiked|n={n}|theta={theta}|{name}")
                )
                row |= {f"auc_{name}": res.value, f"raw_auc_{name}": res.raw, f"ci_lo_{name}": lo, f"ci_hi_{name}": hi}
            row |= {
                "samples_per_class": count,
                "master_seed": cfg.master_seed,
                "null_tag": null_spec.tag(),
                "alt_tag": alt_spec.tag(),
                "alt_start_index": count,
            }
            rows.append(row)
    return ExperimentResult("spiked", {"auc": rows})


ECDF_GRID_POINTS = 512


def run_ecdf(cfg: ExperimentConfig) -> ExperimentResult:
    rows, summary = [], []
    for n in cfg.sizes:
        spec = _spec(Kind.GOE, n, cfg)
        pooled = np.sort(np.concatenate([s.values for s in sample_spectra(spec, cfg.samples_per_cell, cfg.threads)]))
        grid = np.linspace(-2.5, 2.5, ECDF_GRID_POINTS)
        ecdf = np.searchsorted(pooled, grid, side="right") / len(pooled)
        theory = semicircle_cdf(grid)
        for x, e, t in zip(grid, ecdf, theory):
            rows.append({"n": n, "lambda": float(x), "ecdf": float(e), "semicircle_cdf": float(t)})
        summary.append(
            {
                "n": n,
                "grid_max_abs_deviation": float(np.max(np.abs(ecdf - theory))),
                "sup_abs_deviation": ks_statistic(pooled, semicircle_cdf),
                "eigenvalues": len(pooled),
            }
            | _provenance(spec, cfg.samples_per_cell)
        )
    return ExperimentResult("ecdf", {"ecdf": rows, "summary": summary})


RUNNERS = {
    "universality": run_universality,
    "pe_table": run_pe_table,
    "ensembles": run_ensembles,
    "surmise_ks": run_surmise_ks,
    "w2": run_w2,
    "auc": run_auc,
    "rp_sweep": run_rp_sweep,
    "spiked": run_spiked,
    "ecdf": run_ecdf,
}


def run(cfg: ExperimentConfig) -> ExperimentResult:
    cfg = cfg.resolved()
    return RUNNERS[cfg.experiment](cfg)
