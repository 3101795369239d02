"""Compiled likelihood kernels for the maximum-likelihood search.

The per-candidate log likelihood drops every delay-independent factor,
leaving sum_i log(1 + sign_i nu cos(dw_i c / 2)). Two cost tricks, both
exact up to rounding:

* a blocked product with exponent renormalization replaces one log per
  sample by one log per 64 samples;
* on the uniform coarse grid, cos(dw_i c_g / 2) for consecutive grid
  points follows the Chebyshev recurrence, so the scan needs a single
  cosine per sample instead of one per (sample, grid point). The
  refinement stage evaluates cosines directly at arbitrary candidates.

Brackets that round to zero or below are floored at 1e-300 and counted.
All loops are deterministic for any thread count: parallelism is only
across trials, each writing its own output slot.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

_FLOOR = 1e-300
_LN2 = math.log(2.0)
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@njit(cache=True)
def profile_log_likelihood(half_dw, signed_nu, candidate):
    """Log likelihood at one candidate delay; returns (value, n_floored)."""
    prod = 1.0
    exponent = 0
    floored = 0
    n = half_dw.size
    for i in range(n):
        b = 1.0 + signed_nu[i] * math.cos(half_dw[i] * candidate)
        if b < _FLOOR:
            b = _FLOOR
            floored += 1
        prod *= b
        if (i & 63) == 63 or prod < 1e-100:
            m, e = math.frexp(prod)
            prod = m
            exponent += e
    m, e = math.frexp(prod)
    return math.log(m) + (exponent + e) * _LN2, floored


@njit(cache=True)
def _scan_grid(half_dw, signed_nu, spacing, search_max):
    """Coarse scan of candidates g*spacing on [0, search_max].

    Returns (best_idx, best_ll, worst_ll, n_grid). Uses the cosine
    recurrence across grid indices.
    """
    n = half_dw.size
    n_grid = int(math.ceil(search_max / spacing)) + 1
    c_step = np.empty(n)
    c_prev = np.empty(n)   # cos((g-1) * theta_i)
    c_cur = np.empty(n)    # cos(g * theta_i)
    for i in range(n):
        c_step[i] = math.cos(half_dw[i] * spacing)
        c_prev[i] = c_step[i]   # g = -1 mirrors g = +1
        c_cur[i] = 1.0          # g = 0
    best = -np.inf
    worst = np.inf
    best_idx = 0
    for g in range(n_grid):
        prod = 1.0
        exponent = 0
        for i in range(n):
            b = 1.0 + signed_nu[i] * c_cur[i]
            if b < _FLOOR:
                b = _FLOOR
            prod *= b
            if (i & 63) == 63 or prod < 1e-100:
                m, e = math.frexp(prod)
                prod = m
                exponent += e
            nxt = 2.0 * c_step[i] * c_cur[i] - c_prev[i]
            c_prev[i] = c_cur[i]
            c_cur[i] = nxt
        m, e = math.frexp(prod)
        ll = math.log(m) + (exponent + e) * _LN2
        if ll > best:
            best = ll
            best_idx = g
        if ll < worst:
            worst = ll
    return best_idx, best, worst, n_grid


@njit(cache=True)
def _golden_section(half_dw, signed_nu, lo, hi, tol):
    """Maximize the profile log likelihood on [lo, hi] to width tol."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, _ = profile_log_likelihood(half_dw, signed_nu, c)
    fd, _ = profile_log_likelihood(half_dw, signed_nu, d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc, _ = profile_log_likelihood(half_dw, signed_nu, c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd, _ = profile_log_likelihood(half_dw, signed_nu, d)
    return 0.5 * (a + b)


@njit(cache=True)
def _single_mle(half_dw, signed_nu, spacing, search_max, tol):
    """Grid scan plus golden-section refinement for one trial.

    Returns (estimate, loglike, n_grid, flat_flag).
    """
    best_idx, best, worst, n_grid = _scan_grid(half_dw, signed_nu, spacing, search_max)
    if best - worst < 1e-9:
        return 0.0, best, n_grid, True
    lo = spacing * (best_idx - 1)
    if lo < 0.0:
        lo = 0.0
    hi = spacing * (best_idx + 1)
    if hi > search_max:
        hi = search_max
    est = _golden_section(half_dw, signed_nu, lo, hi, tol)
    ll, _ = profile_log_likelihood(half_dw, signed_nu, est)
    # refinement never worsens the (exactly re-evaluated) grid optimum
    grid_best = spacing * best_idx
    ll_grid, _ = profile_log_likelihood(half_dw, signed_nu, grid_best)
    if ll < ll_grid:
        est = grid_best
        ll = ll_grid
    return est, ll, n_grid, False


@njit(cache=True, parallel=True)
def batch_mle(half_dw_2d, signed_nu_2d, spacing_cap, search_max, tol):
    """Independent MLE per row; deterministic for any thread count."""
    trials = half_dw_2d.shape[0]
    estimates = np.empty(trials)
    loglikes = np.empty(trials)
    n_grid = np.empty(trials, dtype=np.int64)
    flat = np.zeros(trials, dtype=np.bool_)
    for k in prange(trials):
        dw_max = 0.0
        for i in range(half_dw_2d.shape[1]):
            v = abs(2.0 * half_dw_2d[k, i])
            if v > dw_max:
                dw_max = v
        spacing = spacing_cap
        if dw_max > 0.0:
            alt = 0.5 * math.pi / dw_max
            if alt < spacing:
                spacing = alt
        est, ll, ng, is_flat = _single_mle(
            half_dw_2d[k], signed_nu_2d[k], spacing, search_max, tol
        )
        estimates[k] = est
        loglikes[k] = ll
        n_grid[k] = ng
        flat[k] = is_flat
    return estimates, loglikes, n_grid, flat
