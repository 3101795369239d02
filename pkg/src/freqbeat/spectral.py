"""Gaussian photon wavepacket and the frequency-difference envelope.

All routines are dimensionally agnostic: ``sigma_t`` fixes the unit of
time, frequencies are in radians per unit of ``sigma_t``. Working with
``sigma_t = 1`` keeps every quantity of order unity; converting to
physical units (fs, ps) is left to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["SpectralProfile", "envelope_density", "temporal_overlap"]


@dataclass(frozen=True)
class SpectralProfile:
    """Single-photon Gaussian wavepacket with temporal std ``sigma_t``.

    The spectral standard deviation is fixed by the Fourier relation
    ``sigma_omega = 1 / (2 sigma_t)``.
    """

    sigma_t: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma_t) and self.sigma_t > 0):
            raise ValueError(f"sigma_t must be positive and finite, got {self.sigma_t}")

    @property
    def sigma_omega(self) -> float:
        return 0.5 / self.sigma_t


def envelope_density(profile: SpectralProfile, delta_omega):
    """Probability density of the pair frequency difference.

    For a Gaussian wavepacket this is a zero-mean normal density in
    ``delta_omega`` with variance ``2 sigma_omega**2``; it integrates to 1
    and is even. Accepts scalars or arrays.
    """
    var4 = 4.0 * profile.sigma_omega**2
    return np.exp(-np.square(delta_omega) / var4) / math.sqrt(math.pi * var4)


def temporal_overlap(profile: SpectralProfile, delta_t):
    """Characteristic function of the envelope at half the given delay.

    g(dt) = integral of envelope_density(dw) * cos(dw*dt/2) over dw, which
    for the Gaussian profile is exp(-(sigma_omega*dt)**2 / 4). Satisfies
    g(0) = 1, is even, and decays monotonically in |dt|.
    """
    x = profile.sigma_omega * np.asarray(delta_t, dtype=float)
    out = np.exp(-np.square(x) / 4.0)
    return float(out) if np.isscalar(delta_t) or out.ndim == 0 else out
