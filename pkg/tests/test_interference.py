import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from freqbeat import (
    ExperimentConfig,
    Outcome,
    Port,
    SpectralProfile,
    alpha,
    amplitude_oracle,
    conditional_bunching_probability,
    delay_probability,
    joint_probability,
)
from freqbeat.quadrature import integrate_adaptive

C0 = 1.0 / math.sqrt(math.pi)  # envelope peak for sigma_t = 1


def test_alpha_signs():
    assert alpha(Port.B) == 1.0
    assert alpha(Port.A) == -1.0


def test_config_validation(make_cfg):
    with pytest.raises(ValueError):
        make_cfg(-0.1)
    with pytest.raises(ValueError):
        make_cfg(1.0, nu=1.2)
    with pytest.raises(ValueError):
        make_cfg(1.0, nu=-0.01)
    with pytest.raises(ValueError):
        make_cfg(1.0, eta=0.0)
    with pytest.raises(ValueError):
        make_cfg(1.0, eta=1.5)
    with pytest.raises(ValueError):
        make_cfg(1.0, tau_r=math.inf)


def test_outcome_validation():
    with pytest.raises(TypeError):
        Outcome(0.0, "B")
    with pytest.raises(ValueError):
        Outcome(math.nan, Port.B)


def test_perfect_hom_coincidence_vanishes(make_cfg):
    cfg = make_cfg(0.0, nu=1.0)
    for dw in (-3.0, 0.0, 0.4, 2.8):
        assert joint_probability(cfg, Outcome(dw, Port.A)) == 0.0


def test_bunching_peak_value(make_cfg):
    # delay 8 sigma_t, nu = 1: the bracket doubles the envelope at dw = 0
    cfg = make_cfg(8.0)
    assert delay_probability(cfg, Outcome(0.0, Port.B)) == pytest.approx(C0, rel=1e-14)


def test_coincidence_dip_partial_distinguishability(make_cfg):
    cfg = make_cfg(8.0, nu=0.9)
    expected = 0.5 * C0 * (1.0 - 0.9)
    assert delay_probability(cfg, Outcome(0.0, Port.A)) == pytest.approx(
        expected, rel=1e-14
    )
    assert expected == pytest.approx(0.028209, abs=5e-7)


def test_bunching_zero_at_half_beat(make_cfg):
    # dw dt/2 = pi kills the bunching bracket at nu = 1
    cfg = make_cfg(4.0, nu=1.0)
    dw = 2.0 * math.pi / cfg.delta_t
    assert delay_probability(cfg, Outcome(dw, Port.B)) == pytest.approx(0.0, abs=1e-16)


def test_delay_probability_is_joint_at_zero_offset(make_cfg):
    cfg = make_cfg(3.0, nu=0.8, eta=0.6, tau_r=1.2)
    out = Outcome(0.7, Port.A)
    assert delay_probability(cfg, out) == joint_probability(cfg.with_tau_r(0.0), out)


@settings(max_examples=60)
@given(
    dw=st.floats(min_value=0.0, max_value=8.0),
    dt=st.floats(min_value=0.0, max_value=12.0),
    nu=st.floats(min_value=0.0, max_value=1.0),
    port=st.sampled_from([Port.A, Port.B]),
)
def test_delay_probability_even_and_nonnegative(dw, dt, nu, port):
    cfg = ExperimentConfig(SpectralProfile(1.0), delta_t=dt, nu=nu)
    p_pos = delay_probability(cfg, Outcome(dw, port))
    p_neg = delay_probability(cfg, Outcome(-dw, port))
    assert p_pos == p_neg
    assert p_pos >= 0.0


def test_conditional_bunching_examples(make_cfg):
    assert conditional_bunching_probability(make_cfg(5.0, nu=1.0), 0.0) == 1.0
    for dw in (-2.0, 0.3, 1.7):
        assert conditional_bunching_probability(make_cfg(3.0, nu=0.0), dw) == 0.5
    cfg = make_cfg(8.0, nu=0.95)
    assert conditional_bunching_probability(cfg, math.pi / 4) == pytest.approx(
        0.025, rel=1e-12
    )


def test_conditional_complements_and_ratio(make_cfg):
    cfg = make_cfg(2.4, nu=0.7, eta=0.8, tau_r=0.5)
    for dw in (-1.3, 0.0, 0.9, 3.1):
        p_b = conditional_bunching_probability(cfg, dw)
        assert 0.0 <= p_b <= 1.0
        tot = sum(
            joint_probability(cfg, Outcome(dw, x)) for x in (Port.A, Port.B)
        )
        assert tot * p_b == pytest.approx(
            joint_probability(cfg, Outcome(dw, Port.B)), rel=1e-12
        )


@pytest.mark.parametrize("nu,eta,dt", [(1.0, 1.0, 0.8), (0.9, 0.7, 2.0), (0.5, 1.0, 0.0)])
def test_total_detection_mass_is_eta(make_cfg, nu, eta, dt):
    cfg = make_cfg(dt, nu=nu, eta=eta)
    sw = cfg.profile.sigma_omega
    half = 14.0 * math.sqrt(2.0) * sw
    panel = min(sw, 2.0 * math.pi / (max(dt, 1e-9) * 4.0))
    total = 0.0
    for port in (Port.A, Port.B):
        val, _ = integrate_adaptive(
            lambda x, p=port: np.array(
                [joint_probability(cfg, Outcome(float(v), p)) for v in np.atleast_1d(x)]
            ),
            -half, half, max_panel_width=panel, rel_tol=1e-10, abs_tol=1e-13,
        )
        total += val
    assert total == pytest.approx(eta, abs=1e-8)


def test_beat_zero_locations(make_cfg):
    # nu = 1 coincidence zeros sit exactly at dw = 4 pi k / dt
    cfg = make_cfg(5.0, nu=1.0)

    def coincidence(dw):
        return delay_probability(cfg, Outcome(dw, Port.A))

    def slope(dw, h=1e-7):
        return coincidence(dw + h) - coincidence(dw - h)

    for k in (1, 2, 3):
        target = 4.0 * math.pi * k / cfg.delta_t
        # the density touches zero quadratically, so locate the zero as the
        # sign change of its derivative and confirm the density dies there
        root = brentq(slope, target - 0.1, target + 0.1, xtol=1e-12)
        assert root == pytest.approx(target, abs=1e-9)
        assert coincidence(root) <= 1e-16
        assert coincidence(target) <= 1e-18


# --- amplitude oracle ------------------------------------------------------


def test_oracle_matches_closed_form_spot_values(make_cfg):
    cfg = make_cfg(8.0)
    got = amplitude_oracle(cfg, Outcome(0.0, Port.B))
    assert got == pytest.approx(C0, abs=1e-11)

    cfg = make_cfg(3.0, nu=0.9, tau_r=1.5)
    out = Outcome(1.0, Port.A)
    assert amplitude_oracle(cfg, out) == pytest.approx(
        joint_probability(cfg, out), abs=1e-12
    )


def test_oracle_hom_limit(make_cfg):
    cfg = make_cfg(0.0, nu=1.0)
    for dw in (0.0, 0.9):
        assert amplitude_oracle(cfg, Outcome(dw, Port.A)) <= 1e-25


def test_oracle_equivalence_random_grid(make_cfg):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(60):
        cfg = make_cfg(
            float(rng.uniform(0.0, 10.0)),
            nu=float(rng.uniform(0.0, 1.0)),
            eta=float(rng.uniform(0.2, 1.0)),
            tau_r=float(rng.uniform(-3.0, 3.0)),
        )
        out = Outcome(float(rng.uniform(-4.0, 4.0)),
                      Port.A if rng.random() < 0.5 else Port.B)
        diff = abs(amplitude_oracle(cfg, out) - joint_probability(cfg, out))
        worst = max(worst, diff)
    assert worst <= 1e-10
