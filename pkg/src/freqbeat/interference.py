"""Outcome probabilities of the frequency-resolved two-photon interferometer.

A probe photon (emitted at one of two times separated by the delay
``delta_t``, mixed incoherently) meets a reference photon on a balanced
beam splitter; both output cameras resolve photon frequencies. A
measurement record is the frequency difference ``delta_omega`` of the
detected pair together with the port pattern: ``B`` when both photons
bunch into the same camera, ``A`` when they anti-bunch (a coincidence).

Two independent routes to the same probability live here:

* ``joint_probability`` / ``delay_probability`` - the closed form, a
  quantum-beat modulation of the envelope density.
* ``amplitude_oracle`` - a brute-force evaluation that builds the
  two-photon detection amplitudes from the input wavepackets, applies
  the beam-splitter unitary per detection pattern, decomposes partial
  distinguishability into an interfering and an orthogonal internal
  mode, and marginalizes the sum frequency numerically.

The oracle is deliberately kept free of the closed form so it can serve
as its verification.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .quadrature import integrate_adaptive
from .spectral import SpectralProfile, envelope_density

__all__ = [
    "Port",
    "Outcome",
    "ExperimentConfig",
    "alpha",
    "joint_probability",
    "delay_probability",
    "conditional_bunching_probability",
    "amplitude_oracle",
]


class Port(enum.Enum):
    """Detection pattern at the beam splitter outputs."""

    A = "A"  # antibunching: one photon per camera (coincidence)
    B = "B"  # bunching: both photons on the same camera

    def __str__(self) -> str:
        return self.value


def alpha(port: Port) -> float:
    """Interference sign of a pattern: +1 for bunching, -1 for coincidence."""
    return 1.0 if port is Port.B else -1.0


@dataclass(frozen=True)
class Outcome:
    """One measurement record: frequency difference and port pattern."""

    delta_omega: float
    port_pattern: Port

    def __post_init__(self):
        if not isinstance(self.port_pattern, Port):
            raise TypeError(f"port_pattern must be a Port, got {self.port_pattern!r}")
        if not math.isfinite(self.delta_omega):
            raise ValueError(f"delta_omega must be finite, got {self.delta_omega}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Physical scenario of one interferometer run.

    delta_t : nonnegative delay between the two incoherent emissions
              (only |delta_t| is observable, so the model fixes the sign).
    nu      : indistinguishability of probe and reference in every degree
              of freedom other than arrival time, in [0, 1].
    eta     : pair detection efficiency in (0, 1]. Probabilities carry the
              factor eta; conditioned on detection it divides out.
    tau_r   : offset of the reference arrival time from the emission
              centroid. Zero (the default) after calibration.
    """

    profile: SpectralProfile
    delta_t: float
    nu: float = 1.0
    eta: float = 1.0
    tau_r: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.delta_t) and self.delta_t >= 0):
            raise ValueError(f"delta_t must be >= 0, got {self.delta_t}")
        if not (math.isfinite(self.nu) and 0.0 <= self.nu <= 1.0):
            raise ValueError(f"nu must lie in [0, 1], got {self.nu}")
        if not (math.isfinite(self.eta) and 0.0 < self.eta <= 1.0):
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if not math.isfinite(self.tau_r):
            raise ValueError(f"tau_r must be finite, got {self.tau_r}")

    def with_tau_r(self, tau_r: float) -> "ExperimentConfig":
        return replace(self, tau_r=tau_r)


def joint_probability(cfg: ExperimentConfig, outcome: Outcome) -> float:
    """Density of (delta_omega, pattern) for a general reference offset.

    P = eta/2 * C(dw) * {1 + alpha(X) nu cos(dw dt/2) cos(dw tau_r)};
    summed over patterns and integrated over dw it carries total mass eta.
    """
    dw = outcome.delta_omega
    beat = math.cos(0.5 * dw * cfg.delta_t) * math.cos(dw * cfg.tau_r)
    bracket = 1.0 + alpha(outcome.port_pattern) * cfg.nu * beat
    return 0.5 * cfg.eta * float(envelope_density(cfg.profile, dw)) * bracket


def delay_probability(cfg: ExperimentConfig, outcome: Outcome) -> float:
    """Joint density with the reference locked to the emission centroid.

    The tau_r = 0 specialization used for estimation: the beat period in
    delta_omega is set purely by the delay.
    """
    return joint_probability(cfg.with_tau_r(0.0), outcome)


def conditional_bunching_probability(cfg: ExperimentConfig, delta_omega) -> float:
    """P(pattern = B | delta_omega, pair detected); vectorizes over delta_omega.

    Complementary to the coincidence probability; equals 1/2 for fully
    distinguishable photons and reaches 0/1 only at nu = 1.
    """
    dw = np.asarray(delta_omega, dtype=float)
    p = 0.5 * (1.0 + cfg.nu * np.cos(0.5 * dw * cfg.delta_t) * np.cos(dw * cfg.tau_r))
    return float(p) if p.ndim == 0 else p


# --- amplitude-level oracle ---------------------------------------------

# Balanced beam splitter, row = output camera, column = input port
# (0 = reference input, 1 = probe input).
_BS = ((1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)),
       (1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0)))

# (camera_x, camera_y, unordered-pair weight) per pattern: a coincidence
# assigns the two resolved frequencies to distinct cameras; bunching sums
# both cameras, each with the 1/2 factor that undoes double counting of
# the ordered frequency pair on a single camera.
_PATTERNS = {
    Port.A: ((0, 1, 1.0),),
    Port.B: ((0, 0, 0.5), (1, 1, 0.5)),
}


def amplitude_oracle(
    cfg: ExperimentConfig,
    outcome: Outcome,
    *,
    rel_tol: float = 1e-11,
    abs_tol: float = 1e-14,
) -> float:
    """Outcome probability computed from the input states, no closed form.

    For each incoherent emission branch the probe wavepacket is the
    Gaussian spectral amplitude with a linear phase at the branch
    emission time; the reference carries the phase of its own arrival
    time and splits into sqrt(nu) of the probe's internal mode plus
    sqrt(1-nu) of an orthogonal one. Detection amplitudes for the two
    photon-to-camera assignments are summed coherently within the
    interfering mode and incoherently across orthogonal modes, and the
    squared amplitude is marginalized over the sum frequency by
    quadrature. Branches average with weight 1/2; eta scales the result.

    Raises QuadratureError if the sum-frequency integral fails to
    converge.
    """
    prof = cfg.profile
    sw = prof.sigma_omega
    dw = outcome.delta_omega
    nu = cfg.nu
    norm = (2.0 * math.pi * sw**2) ** -0.25

    def xi(w, t):
        # single-photon spectral amplitude at emission time t
        return norm * np.exp(-np.square(w) / (4.0 * sw**2)) * np.exp(-1j * w * t)

    patterns = _PATTERNS[outcome.port_pattern]
    t_ref = cfg.tau_r
    branch_times = (-0.5 * cfg.delta_t, +0.5 * cfg.delta_t)

    def ordered_density(w_sum, t_probe):
        wa = 0.5 * (w_sum + dw)
        wb = 0.5 * (w_sum - dw)
        probe_a, probe_b = xi(wa, t_probe), xi(wb, t_probe)
        ref_a, ref_b = xi(wa, t_ref), xi(wb, t_ref)
        total = np.zeros_like(w_sum, dtype=float)
        for cam_x, cam_y, weight in patterns:
            u_direct = _BS[cam_x][1] * _BS[cam_y][0]   # probe -> x, reference -> y
            u_swapped = _BS[cam_y][1] * _BS[cam_x][0]  # probe -> y, reference -> x
            interfering = u_direct * probe_a * ref_b + u_swapped * probe_b * ref_a
            orthogonal = (np.abs(u_direct * probe_a * ref_b) ** 2
                          + np.abs(u_swapped * probe_b * ref_a) ** 2)
            total += weight * (nu * np.abs(interfering) ** 2 + (1.0 - nu) * orthogonal)
        return total

    # The sum-frequency profile is Gaussian with std sqrt(2) sigma_omega;
    # phases beat no faster than the largest time scale in play.
    half_width = 16.0 * math.sqrt(2.0) * sw
    t_max = 0.5 * cfg.delta_t + abs(t_ref) + 1.0 / sw
    panel = min(half_width / 8.0, 2.0 * math.pi / (8.0 * t_max))

    prob = 0.0
    for t_probe in branch_times:
        value, _ = integrate_adaptive(
            lambda ws: ordered_density(ws, t_probe),
            -half_width,
            half_width,
            max_panel_width=panel,
            rel_tol=rel_tol,
            abs_tol=abs_tol,
        )
        # 1/2 per branch of the incoherent mixture, 1/2 from the
        # (wa, wb) -> (w_sum, dw) change of variables
        prob += 0.5 * 0.5 * value
    return cfg.eta * prob
