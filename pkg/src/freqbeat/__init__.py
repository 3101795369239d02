"""Frequency-resolved two-photon interference toolkit.

Estimates the time delay between two weak incoherent signals from the
quantum beats that the delay imprints, as a function of the pair
frequency difference, on bunching/coincidence statistics behind a
balanced beam splitter. Ships the outcome probability model with an
amplitude-level verification oracle, the Fisher-information analysis
against the quantum limit and a direct-detection baseline, a seeded
sampler, and a maximum-likelihood Monte Carlo pipeline.
"""

from .direct_detection import (
    DetectionGrid,
    arrival_density,
    trd_fisher_binned,
    trd_fisher_unbinned,
)
from .errors import NonIdentifiableError, QuadratureError, UnboundedVarianceError
from .estimation import (
    FitResult,
    MleResult,
    MonteCarloReport,
    PerSampleCount,
    fit_inverse_n,
    log_likelihood,
    mle_estimate,
    monte_carlo_study,
    read_report,
    write_report,
)
from .fisher import (
    FisherReport,
    bucket_fisher,
    crb,
    fisher_asymptote,
    fisher_indistinguishable,
    fisher_partial,
    precision_budget,
    quantum_limit,
)
from .interference import (
    ExperimentConfig,
    Outcome,
    Port,
    alpha,
    amplitude_oracle,
    conditional_bunching_probability,
    delay_probability,
    joint_probability,
)
from .sampling import (
    SampleSet,
    pair_stream_rng,
    sample_batch,
    sample_outcome,
    write_sample_csv,
)
from .spectral import SpectralProfile, envelope_density, temporal_overlap

__version__ = "0.1.0"

__all__ = [
    "DetectionGrid",
    "ExperimentConfig",
    "FisherReport",
    "FitResult",
    "MleResult",
    "MonteCarloReport",
    "NonIdentifiableError",
    "Outcome",
    "PerSampleCount",
    "Port",
    "QuadratureError",
    "SampleSet",
    "SpectralProfile",
    "UnboundedVarianceError",
    "alpha",
    "amplitude_oracle",
    "arrival_density",
    "bucket_fisher",
    "conditional_bunching_probability",
    "crb",
    "delay_probability",
    "envelope_density",
    "fisher_asymptote",
    "fisher_indistinguishable",
    "fisher_partial",
    "fit_inverse_n",
    "joint_probability",
    "log_likelihood",
    "mle_estimate",
    "monte_carlo_study",
    "pair_stream_rng",
    "precision_budget",
    "quantum_limit",
    "read_report",
    "sample_batch",
    "sample_outcome",
    "temporal_overlap",
    "trd_fisher_binned",
    "trd_fisher_unbinned",
    "write_report",
    "write_sample_csv",
]
