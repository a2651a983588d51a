import numpy as np
import pytest
from scipy import stats as sps

from relcp import seeding
from relcp.datagen import (
    BURN_IN,
    SimScenario,
    gen_innovations,
    inject_shifts,
    ma_iii_coefficients,
    ma_iv_coefficients,
    model_iv_variance,
    simulate_panel,
)
from relcp.errors import InvalidInputError


def recursion_iii(eps):
    # direct loops: MA(19) then ARMA(2, 1), both started from rest
    c = [1.0] + [i**-3 for i in range(1, 20)]
    y = [sum(c[i] * eps[j - i] for i in range(20)) for j in range(19, len(eps))]
    x = []
    for j, yj in enumerate(y):
        x1 = x[j - 1] if j >= 1 else 0.0
        x2 = x[j - 2] if j >= 2 else 0.0
        y1 = y[j - 1] if j >= 1 else 0.0
        x.append(0.2 * x1 - 0.3 * x2 - 0.4 * yj + 0.8 * y1)
    return np.array(x)


def test_model_i_moments():
    x = gen_innovations("I", 10_000, 100, seed=1)
    assert abs(x.mean()) < 0.004
    assert 0.99 <= x.var() <= 1.01


def test_model_ii_skewness_and_mean():
    x = gen_innovations("II", 10_000, 100, seed=2)
    assert abs(x.mean()) < 0.005
    assert abs(sps.skew(x.ravel()) / 2 - 1) < 0.05


def test_model_iv_variance():
    assert model_iv_variance() == pytest.approx(1 + 0.01 * sum(k**-6 for k in range(1, 30)), rel=1e-15)
    x = gen_innovations("IV", 10_000, 100, seed=3)
    assert abs(x.var() / model_iv_variance() - 1) < 0.01


def test_model_iii_matches_direct_recursion():
    n, d, seed = 50, 2, 4
    x = gen_innovations("III", n, d, seed)
    for h in range(d):
        eps = seeding.substream(seed, seeding.DATA, h).standard_normal(n + BURN_IN + 19)
        np.testing.assert_allclose(x[:, h], recursion_iii(eps)[BURN_IN:], rtol=1e-12, atol=1e-12)


def test_model_iii_variance_matches_impulse_response():
    impulse = np.zeros(400)
    impulse[19] = 1.0
    psi = recursion_iii(impulse)
    x = gen_innovations("III", 10_000, 100, seed=5)
    assert abs(x.var() / np.sum(psi**2) - 1) < 0.02
    assert ma_iii_coefficients()[0] == 1.0 and ma_iii_coefficients()[2] == 1 / 8


def test_model_iv_matches_direct_sum():
    n, seed = 40, 6
    x = gen_innovations("IV", n, 1, seed)[:, 0]
    eps = seeding.substream(seed, seeding.DATA, 0).standard_normal(n + BURN_IN + 29)
    c = ma_iv_coefficients()
    direct = [sum(c[i] * eps[j - i] for i in range(30)) for j in range(29 + BURN_IN, len(eps))]
    np.testing.assert_allclose(x, direct, rtol=1e-13)


@pytest.mark.parametrize("model", ["I", "II", "III", "IV"])
def test_columns_do_not_depend_on_dimension(model):
    a = gen_innovations(model, 64, 3, seed=7)
    b = gen_innovations(model, 64, 5, seed=7)
    np.testing.assert_array_equal(a, b[:, :3])
    np.testing.assert_array_equal(a, gen_innovations(model, 64, 3, seed=7))
    assert not np.array_equal(a, gen_innovations(model, 64, 3, seed=8))


def test_unknown_model():
    with pytest.raises(InvalidInputError):
        gen_innovations("V", 10, 2, 0)


def test_inject_shifts_examples():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((20, 3))
    np.testing.assert_array_equal(inject_shifts(x, 0.0), x)
    np.testing.assert_array_equal(inject_shifts(np.zeros((4, 2)), 1.0, 0.5), [[0, 0], [0, 0], [1, 1], [1, 1]])


def test_inject_shifts_per_column_locations():
    y = inject_shifts(np.zeros((10, 2)), [1.0, -2.0], [0.3, 0.75])
    np.testing.assert_array_equal(y[:, 0], [0, 0, 0, 1, 1, 1, 1, 1, 1, 1])
    np.testing.assert_array_equal(y[:, 1], [0] * 7 + [-2] * 3)


def test_inject_shifts_law_of_large_numbers():
    n = 10**5
    y = inject_shifts(gen_innovations("I", n, 2, seed=9), 0.7, 0.4)
    k = int(n * 0.4)
    diff = y[:k].mean(axis=0) - y[k:].mean(axis=0)
    se = np.sqrt(1 / k + 1 / (n - k))
    np.testing.assert_allclose(diff, -0.7, atol=5 * se)


def test_simulate_panel_reproducible_and_run_specific():
    sc = SimScenario("III", 100, 4, mu=1.0, seed=3)
    np.testing.assert_array_equal(simulate_panel(sc, 5), simulate_panel(sc, 5))
    assert not np.array_equal(simulate_panel(sc, 5), simulate_panel(sc, 6))


def test_scenario_validation():
    with pytest.raises(InvalidInputError):
        SimScenario("I", 100, 1, 1.0)
    with pytest.raises(InvalidInputError):
        SimScenario("I", 100, 3, 1.0, t=1.0)
    with pytest.raises(InvalidInputError):
        SimScenario("I", 100, 3, 1.0, t=(0.5, 0.5))
