import pytest

from freqbeat import ExperimentConfig, SpectralProfile


@pytest.fixture
def unit_profile():
    return SpectralProfile(1.0)


@pytest.fixture
def make_cfg(unit_profile):
    def _make(delta_t, nu=1.0, eta=1.0, tau_r=0.0, sigma_t=None):
        profile = unit_profile if sigma_t is None else SpectralProfile(sigma_t)
        return ExperimentConfig(profile, delta_t=delta_t, nu=nu, eta=eta, tau_r=tau_r)

    return _make


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance: criterion-level checks, some take minutes"
    )
