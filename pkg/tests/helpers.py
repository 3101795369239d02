"""Shared statistical helpers for the test suite."""

import numpy as np
from scipy.stats import chi2, norm

from freqbeat import sample_batch
from freqbeat.interference import conditional_bunching_probability
from freqbeat.quadrature import integrate_adaptive
from freqbeat.spectral import envelope_density


def histogram_gof_pvalue(cfg, n, seed, n_bins=50, min_expected=5.0):
    """Pearson chi-square p-value of sampled (delta_omega, pattern) records
    against the closed-form model.

    Bins delta_omega at equal marginal probability (quantiles of the
    envelope), crossing each bin with the two patterns. The expected
    pattern split inside a bin integrates the conditional bunching
    probability against the envelope over the bin. Cells expected below
    ``min_expected`` counts are merged into their neighbor so the
    Pearson statistic stays calibrated.
    """
    batch = sample_batch(cfg, n, seed=seed, stream_id=0)
    sw = cfg.profile.sigma_omega
    marginal_std = np.sqrt(2.0) * sw
    qs = np.linspace(0.0, 1.0, n_bins + 1)
    edges = norm.ppf(qs, scale=marginal_std)
    edges[0], edges[-1] = -np.inf, np.inf

    idx = np.searchsorted(edges, batch.delta_omega, side="right") - 1
    observed = np.zeros((n_bins, 2))
    for b in range(n_bins):
        in_bin = idx == b
        observed[b, 0] = np.sum(in_bin & batch.bunched)
        observed[b, 1] = np.sum(in_bin & ~batch.bunched)

    expected = np.zeros_like(observed)
    for b in range(n_bins):
        lo = edges[b] if np.isfinite(edges[b]) else -12.0 * marginal_std
        hi = edges[b + 1] if np.isfinite(edges[b + 1]) else 12.0 * marginal_std
        mass, _ = integrate_adaptive(
            lambda x: envelope_density(cfg.profile, x),
            lo, hi, max_panel_width=marginal_std / 4.0,
            rel_tol=1e-9, abs_tol=1e-12,
        )
        bunch_mass, _ = integrate_adaptive(
            lambda x: envelope_density(cfg.profile, x)
            * conditional_bunching_probability(cfg, x),
            lo, hi,
            max_panel_width=min(marginal_std / 4.0,
                                np.pi / (2.0 * max(cfg.delta_t, 1e-9))),
            rel_tol=1e-9, abs_tol=1e-12,
        )
        expected[b, 0] = n * bunch_mass
        expected[b, 1] = n * (mass - bunch_mass)

    obs, exp = _merge_small_cells(observed.ravel(), expected.ravel(), min_expected)
    stat = float(np.sum((obs - exp) ** 2 / exp))
    dof = obs.size - 1
    return float(chi2.sf(stat, dof))


def _merge_small_cells(obs, exp, min_expected):
    """Merge cells with small expectation into the running neighbor."""
    order = np.argsort(exp)[::-1]
    merged_obs, merged_exp = [], []
    acc_o = acc_e = 0.0
    for i in order:
        acc_o += obs[i]
        acc_e += exp[i]
        if acc_e >= min_expected:
            merged_obs.append(acc_o)
            merged_exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 and merged_exp:
        merged_obs[-1] += acc_o
        merged_exp[-1] += acc_e
    return np.asarray(merged_obs), np.asarray(merged_exp)
