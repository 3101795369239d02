"""Fisher information of the frequency-resolved scheme and its limits.

Conventions: all closed forms and integrals include the detection
efficiency ``eta`` (information per *emitted* pair). Because an
undetected pair carries no information, the information per *detected*
pair is the same quantity divided by eta; every operation accepts
``per_detected_pair=True`` to return that convention, tagged on the
report. The Monte Carlo pipeline, whose sample counts are detected
pairs, uses the detected convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import UnboundedVarianceError
from .interference import ExperimentConfig
from .quadrature import integrate_adaptive
from .spectral import SpectralProfile, envelope_density, temporal_overlap

__all__ = [
    "FisherReport",
    "quantum_limit",
    "fisher_indistinguishable",
    "fisher_partial",
    "fisher_asymptote",
    "bucket_fisher",
    "crb",
    "precision_budget",
]

EMITTED = "per_emitted_pair"
DETECTED = "per_detected_pair"


@dataclass(frozen=True)
class FisherReport:
    """Fisher information value with provenance.

    value            : nonnegative, units 1/time**2.
    method           : analytic | quadrature | asymptote | bucket | quantum_limit.
    quadrature_error : estimated absolute error; 0 for closed forms.
    convention       : whether eta is included (per emitted pair) or divided
                       out (per detected pair).
    diagnostics      : optional numeric details (excluded bins, etc).
    """

    value: float
    method: str
    quadrature_error: float = 0.0
    convention: str = EMITTED
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"Fisher information must be >= 0, got {self.value}")
        if self.quadrature_error < 0:
            raise ValueError("quadrature_error must be >= 0")


def _finalize(value, method, eta, per_detected_pair, err=0.0, diagnostics=None):
    if per_detected_pair:
        return FisherReport(value / eta, method, err / eta, DETECTED,
                            diagnostics or {})
    return FisherReport(value, method, err, EMITTED, diagnostics or {})


def quantum_limit(profile: SpectralProfile) -> FisherReport:
    """Best Fisher information any measurement can reach: sigma_omega**2."""
    return FisherReport(profile.sigma_omega**2, "quantum_limit")


def fisher_indistinguishable(
    profile: SpectralProfile, eta: float = 1.0, *, per_detected_pair: bool = False
) -> FisherReport:
    """Information per pair at nu = 1: eta sigma_omega**2 / 2, for any delay.

    Exactly half the quantum limit times eta.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    value = 0.5 * eta * profile.sigma_omega**2
    return _finalize(value, "analytic", eta, per_detected_pair)


def fisher_asymptote(
    profile: SpectralProfile,
    nu: float,
    eta: float = 1.0,
    *,
    per_detected_pair: bool = False,
) -> FisherReport:
    """Large-delay plateau of the partial-distinguishability information.

    (1 - sqrt(1 - nu**2)) times the nu = 1 value; exact closed form.
    """
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu}")
    shrink = 1.0 - math.sqrt((1.0 - nu) * (1.0 + nu))
    value = shrink * fisher_indistinguishable(profile, eta).value
    return _finalize(value, "asymptote", eta, per_detected_pair)


def fisher_partial(
    cfg: ExperimentConfig,
    *,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-14,
    per_detected_pair: bool = False,
) -> FisherReport:
    """Information of the (delta_omega, pattern) record at arbitrary nu.

    nu = 1 and nu = 0 reduce to closed forms (the oscillatory ratio in the
    integrand becomes 1 or 0); otherwise the beat-resolved quadrature

        F = eta/4 * int C(dw) dw^2 nu^2 sin^2(dw dt/2)
                       / [(1 - nu cos(dw dt/2))(1 + nu cos(dw dt/2))] ddw

    is evaluated with panels narrow enough to track the oscillation.
    """
    prof, nu, eta, dt = cfg.profile, cfg.nu, cfg.eta, cfg.delta_t
    if nu == 0.0:
        return _finalize(0.0, "analytic", eta, per_detected_pair)
    if nu == 1.0:
        value = fisher_indistinguishable(prof, eta).value
        return _finalize(value, "analytic", eta, per_detected_pair)

    sw = prof.sigma_omega

    def integrand(dw):
        c = np.cos(0.5 * dw * dt)
        s = np.sin(0.5 * dw * dt)
        ratio = (nu * nu) * s * s / ((1.0 - nu * c) * (1.0 + nu * c))
        return envelope_density(prof, dw) * np.square(dw) * ratio

    half_width = 15.0 * math.sqrt(2.0) * sw
    max_panel = half_width / 8.0
    if dt > 0.0:
        max_panel = min(max_panel, 0.5 * math.pi / dt)
    value, err = integrate_adaptive(
        integrand, 0.0, half_width,
        max_panel_width=max_panel, rel_tol=rel_tol, abs_tol=abs_tol,
    )
    # even integrand: double the half-line result; eta/4 prefactor
    value *= 2.0 * eta / 4.0
    err *= 2.0 * eta / 4.0
    return _finalize(value, "quadrature", eta, per_detected_pair, err)


def bucket_fisher(
    cfg: ExperimentConfig, *, per_detected_pair: bool = False
) -> FisherReport:
    """Information kept when only the port pattern is recorded.

    With p_B = (1 + nu g(dt))/2 and g the temporal overlap,
    F = eta (dp_B/ddt)^2 [1/p_B + 1/(1 - p_B)]. The 1 - p_B factor is
    evaluated through expm1 so the nu = 1, small-delay regime (where the
    value approaches the full nu = 1 information) suffers no
    cancellation; the removable 0/0 at exactly dt = 0, nu = 1 takes the
    analytic limit.
    """
    prof, nu, eta, dt = cfg.profile, cfg.nu, cfg.eta, cfg.delta_t
    sw = prof.sigma_omega
    if dt == 0.0:
        value = 0.5 * eta * sw**2 if nu == 1.0 else 0.0
        return _finalize(value, "bucket", eta, per_detected_pair)
    x = (sw * dt) ** 2 / 4.0
    g = temporal_overlap(prof, dt)
    dg = -0.5 * sw**2 * dt * g
    p = 0.5 * (1.0 + nu * g)
    one_minus_p = 0.5 * ((1.0 - nu) + nu * (-math.expm1(-x)))
    dp = 0.5 * nu * dg
    value = eta * dp * dp * (1.0 / p + 1.0 / one_minus_p)
    return _finalize(value, "bucket", eta, per_detected_pair)


def crb(fisher: FisherReport, n_pairs: int) -> float:
    """Cramer-Rao variance floor 1/(N F) for N pairs."""
    if n_pairs < 1:
        raise ValueError(f"n_pairs must be >= 1, got {n_pairs}")
    if fisher.value <= 0.0:
        raise UnboundedVarianceError(
            "zero Fisher information: the delay variance is unbounded"
        )
    return 1.0 / (n_pairs * fisher.value)


def precision_budget(
    rate: float,
    duration: float,
    sigma_t: float,
    eta: float = 1.0,
    nu: float = 1.0,
) -> float:
    """CRB-limited timing standard deviation for a measurement campaign.

    rate is the emitted-pair rate (pairs/s), duration the integration
    time (s), sigma_t the photon temporal width (s). Uses the large-delay
    information plateau (the exact nu = 1 value when nu = 1); the result
    is in seconds. eta cancels between pair thinning and per-pair
    information, so it enters as an overall 1/sqrt(eta).
    """
    if rate <= 0 or duration <= 0 or sigma_t <= 0:
        raise ValueError("rate, duration and sigma_t must be positive")
    profile = SpectralProfile(sigma_t)
    info = fisher_asymptote(profile, nu, eta).value
    if info <= 0.0:
        raise UnboundedVarianceError("nu = 0 budget: no information per pair")
    n_pairs = rate * duration
    return 1.0 / math.sqrt(n_pairs * info)


def _score_variance_check(cfg: ExperimentConfig, n_samples: int, seed: int = 0):
    """Monte Carlo mean squared score; test helper, see tests for use."""
    # imported lazily to keep fisher free of sampling at import time
    from .sampling import sample_batch

    batch = sample_batch(cfg, n_samples, seed=seed, stream_id=0)
    h = 1e-5 * cfg.profile.sigma_t
    lo = replace(cfg, delta_t=max(cfg.delta_t - h, 0.0))
    hi = replace(cfg, delta_t=cfg.delta_t + h)
    signs = np.where(batch.bunched, 1.0, -1.0)

    def log_density(c):
        beat = np.cos(0.5 * batch.delta_omega * c.delta_t)
        bracket = np.maximum(1.0 + signs * c.nu * beat, 1e-300)
        return np.log(envelope_density(c.profile, batch.delta_omega)) + np.log(bracket)

    score = (log_density(hi) - log_density(lo)) / (hi.delta_t - lo.delta_t)
    return float(np.mean(score**2))
