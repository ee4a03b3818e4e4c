import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from femtoalloc.channel import (LinkShadowState, NoiseParams, PropagationParams, average_gain,
                                draw_fading, draw_link_states, noise_power_w, path_loss_db)


@pytest.mark.parametrize("d_in, d, pen, shadow, expected", [
    (1, 10, 10, 0, 86.06),
    (1, 1, 0, 0, 38.46),
    # 38.46 + 20 log10 5 + 37.6 log10 15, evaluated at 30 digits with mpmath
    (5, 15, 3, -3, 96.66043142721399),
])
def test_path_loss_examples(d_in, d, pen, shadow, expected):
    assert path_loss_db(d_in, d, pen, shadow) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("d_in, d", [(0, 10), (1, 0), (-1, 5)])
def test_path_loss_rejects_nonpositive_distance(d_in, d):
    with pytest.raises(ValueError):
        path_loss_db(d_in, d, 0, 0)


def test_average_gain_examples():
    p = PropagationParams()
    assert average_gain(p, LinkShadowState(1.0, 10.0, 0.0), 10.0) == pytest.approx(2.4774220576332855e-9, rel=1e-12)
    # PL = 80 dB and PL = 0 dB through the shadowing term
    assert average_gain(p, LinkShadowState(1.0, 0.0, 80 - 38.46), 1.0) == pytest.approx(1e-8, rel=1e-12)
    assert average_gain(p, LinkShadowState(1.0, 0.0, -38.46), 1.0) == pytest.approx(1.0, rel=1e-12)


def test_average_gain_clamps_min_distance():
    p = PropagationParams()
    s = LinkShadowState(2.0, 3.0, 1.5)
    assert average_gain(p, s, 0.2) == average_gain(p, s, 1.0)
    assert average_gain(p, s, 0.0) == average_gain(p, s, 1.0)


@given(d_in=st.floats(0.5, 10), d1=st.floats(1, 500), d2=st.floats(1, 500),
       pen=st.sampled_from([3.0, 10.0]), sh=st.floats(-30, 30))
def test_path_loss_increasing_in_distance(d_in, d1, d2, pen, sh):
    if d1 == d2:
        return
    lo, hi = sorted((d1, d2))
    assert path_loss_db(d_in, lo, pen, sh) < path_loss_db(d_in, hi, pen, sh)
    assert path_loss_db(lo / 100, 20.0, pen, sh) < path_loss_db(hi / 100, 20.0, pen, sh)


@given(d_in=st.floats(1, 5), d=st.floats(1, 1000), pen=st.sampled_from([3.0, 10.0]), sh=st.floats(0, 40))
def test_average_gain_in_unit_interval(d_in, d, pen, sh):
    g = average_gain(PropagationParams(), LinkShadowState(d_in, pen, sh), d)
    assert 0 < g <= 1


def test_link_states_ranges():
    p = PropagationParams()
    s = draw_link_states(p, (200, 300), np.random.default_rng(1))
    assert s.d_in.min() >= 1 and s.d_in.max() <= 5
    assert set(np.unique(s.penetration_db)) == {3.0, 10.0}
    assert abs(np.mean(s.penetration_db == 10.0) - 0.5) < 0.01
    assert np.std(s.shadow_db) == pytest.approx(10.0, rel=0.02)
    link = s.link(3, 4)
    assert link.d_in == s.d_in[3, 4]


def test_fading_unit_mean_and_cdf():
    x = draw_fading(1_000_000, np.random.default_rng(7))
    assert x.mean() == pytest.approx(1.0, abs=0.01)
    assert np.mean(x <= 1.0) == pytest.approx(1 - np.exp(-1), abs=0.005)


def test_fading_deterministic_and_shaped():
    a = draw_fading(50, np.random.default_rng(3), size=(4,))
    b = draw_fading(50, np.random.default_rng(3), size=(4,))
    assert a.shape == (4, 50)
    np.testing.assert_array_equal(a, b)
    with pytest.raises(ValueError):
        draw_fading(0, np.random.default_rng(0))


def test_fading_ks_exponential():
    x = draw_fading(100_000, np.random.default_rng(11))
    assert stats.kstest(x, "expon").pvalue > 0.01


def test_noise_power():
    assert noise_power_w(NoiseParams()) == pytest.approx(7.165929069962951e-15, rel=1e-12)
    assert noise_power_w(NoiseParams(-174, 0, 1.0)) == pytest.approx(10 ** -20.4, rel=1e-12)
    dbm = 10 * np.log10(noise_power_w(NoiseParams(-174, 0, 180e3))) + 30
    assert dbm == pytest.approx(-121.44727494896694, abs=1e-9)


def test_noise_doubles_with_bandwidth():
    a = noise_power_w(NoiseParams(prb_bandwidth_hz=180e3))
    b = noise_power_w(NoiseParams(prb_bandwidth_hz=360e3))
    assert 10 * np.log10(b / a) == pytest.approx(3.0103, abs=1e-4)


@pytest.mark.parametrize("kwargs", [
    {"d_in_range": (-1.0, 5.0)}, {"d_in_range": (5.0, 1.0)},
    {"shadow_sigma_db": -1.0}, {"wall_loss_db": -3.0},
])
def test_propagation_params_validation(kwargs):
    with pytest.raises(ValueError):
        PropagationParams(**kwargs)


def test_noise_params_validation():
    with pytest.raises(ValueError):
        NoiseParams(prb_bandwidth_hz=0)
