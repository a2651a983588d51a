import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from relcp.config import EstimationConfig
from relcp.datagen import gen_innovations, ma_iv_coefficients
from relcp.errors import ConfigurationError, DegenerateSplitError, InvalidInputError
from relcp.variance import (
    bartlett_lrv,
    cube_root_bandwidth,
    sigma_hat,
    sigma_hat_panel,
    split_samples,
)


def bartlett_oracle(x, beta):
    # textbook double loop over lags and indices
    x = [float(v) for v in x]
    m = len(x)
    mean = sum(x) / m
    xc = [v - mean for v in x]

    def phi(j):
        return sum(xc[i] * xc[i + j] for i in range(m - j)) / m

    return phi(0) + 2 * sum((1 - j / beta) * phi(j) for j in range(1, beta))


def test_split_example():
    spec = split_samples(100, 0.5, 0.9, 0.05)
    assert (spec.end_before, spec.start_after) == (45, 56)
    assert spec.before == slice(0, 45) and spec.after == slice(55, 100)


def test_split_near_unit_separation_stays_disjoint():
    spec = split_samples(100, 0.5, 1 - 1e-12, 0.05)
    assert (spec.end_before, spec.start_after) == (50, 51)


def test_split_guard_binds_at_window_edge():
    spec = split_samples(100, 0.05, 0.9, 0.05)
    assert spec.end_before == math.floor(100 * 0.05)


def test_split_rejects_bad_separation():
    with pytest.raises(InvalidInputError):
        split_samples(100, 0.5, 1.0, 0.05)


@pytest.mark.parametrize("m", [1, 7, 8, 9, 26, 27, 28, 63, 64, 124, 125, 999, 1000, 10**6 - 1, 10**6])
def test_cube_root_bandwidth_exact(m):
    b = cube_root_bandwidth(m)
    assert b**3 <= m < (b + 1) ** 3


def test_bartlett_zero_bandwidth_is_sample_variance():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(500)
    assert bartlett_lrv(x, 0) == pytest.approx(np.var(x), rel=1e-13)
    assert bartlett_lrv(x, 1) == pytest.approx(np.var(x), rel=1e-13)


def test_bartlett_alternating_sequence():
    x = np.tile([1.0, -1.0], 50)
    assert bartlett_lrv(x, 1) == 1.0


@given(arrays(np.float64, st.integers(3, 40), elements=st.floats(-10, 10)), st.data())
def test_bartlett_matches_oracle(x, data):
    beta = data.draw(st.integers(0, len(x) - 1))
    assert bartlett_lrv(x, beta) == pytest.approx(bartlett_oracle(x, beta), rel=1e-9, abs=1e-9)


def test_bartlett_long_run_variance_model_iv():
    m = 10**5
    x = gen_innovations("IV", m, 1, seed=11)[:, 0]
    target = ma_iv_coefficients().sum() ** 2
    assert abs(bartlett_lrv(x, cube_root_bandwidth(m)) / target - 1) < 0.05


def test_sigma_hat_constant_series_is_clamped():
    est = sigma_hat(np.full(200, 3.0), 0.5)
    assert est.sigma1_sq == 0.0 and est.sigma2_sq == 0.0
    assert est.truncated and est.sigma_hat == pytest.approx(math.sqrt(1e-4))


def test_sigma_hat_combine_rules():
    z = np.r_[np.tile([1.0, -1.0], 50), np.tile([2.0, -2.0], 50)]
    hi = sigma_hat(z, 0.5, EstimationConfig(bandwidth=1))
    assert (hi.sigma1_sq, hi.sigma2_sq) == (1.0, 4.0)
    assert hi.sigma_hat**2 == 4.0
    avg = sigma_hat(z, 0.5, EstimationConfig(bandwidth=1, combine="average"))
    assert avg.sigma_hat**2 == pytest.approx(2.5, rel=1e-15)


def test_sigma_hat_iid_monte_carlo():
    rng = np.random.default_rng(99)
    inside = 0
    runs = 300
    for _ in range(runs):
        inside += 0.9 <= sigma_hat(rng.standard_normal(10**4), 0.5).sigma_hat <= 1.1
    assert inside / runs >= 0.99


def test_panel_matches_single_component():
    rng = np.random.default_rng(4)
    Z = rng.standard_normal((300, 5))
    k = np.array([40, 150, 151, 260, 15])
    cfg = EstimationConfig()
    sigma, s1, s2, trunc = sigma_hat_panel(Z, k, cfg)
    for h in range(5):
        est = sigma_hat(Z[:, h], k[h] / 300, cfg)
        assert sigma[h] == pytest.approx(est.sigma_hat, rel=1e-12)
        assert s1[h] == pytest.approx(est.sigma1_sq, rel=1e-12)
        assert s2[h] == pytest.approx(est.sigma2_sq, rel=1e-12)


def test_short_split_is_degenerate():
    with pytest.raises(DegenerateSplitError):
        sigma_hat(np.arange(20.0), 0.5, EstimationConfig(t_min=0.05, separation=0.05))


def test_config_validation():
    with pytest.raises(ConfigurationError):
        EstimationConfig(separation=1.2)
    with pytest.raises(ConfigurationError):
        EstimationConfig(combine="min")
    with pytest.raises(ConfigurationError):
        EstimationConfig(s_minus_sq=2.0, s_plus_sq=1.0)
