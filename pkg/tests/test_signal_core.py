"""Signal model, sampling schemes, and noise injection."""

import math

import numpy as np
import pytest

from subnyq import (
    DualChannelObservation,
    NoiseConfig,
    SamplingScheme,
    Scenario,
    ToneParams,
    add_noise,
    multitone,
    multitone_derivative,
    snr_linear,
    synthesize,
    uniform_sample_rate,
    wrap_phase,
)

TWO_PI = 2.0 * math.pi


def test_wrap_phase_range_and_fixed_points():
    assert wrap_phase(0.0) == 0.0
    assert wrap_phase(math.pi) == pytest.approx(-math.pi)
    assert wrap_phase(-math.pi) == pytest.approx(-math.pi)
    assert wrap_phase(2.5 * math.pi) == pytest.approx(0.5 * math.pi)
    rng = np.random.default_rng(0)
    p = rng.uniform(-50.0, 50.0, 1000)
    w = wrap_phase(p)
    assert np.all(w >= -math.pi) and np.all(w < math.pi)
    # wrapping is a congruence mod 2*pi
    assert np.allclose(np.cos(w), np.cos(p))
    assert np.allclose(np.sin(w), np.sin(p))


def test_tone_params_validation_and_derivative_amplitude():
    tone = ToneParams(amplitude=1.5, frequency=2.0e6, phase=0.4)
    assert tone.derivative_amplitude == TWO_PI * 2.0e6 * 1.5
    with pytest.raises(ValueError):
        ToneParams(amplitude=0.0, frequency=1.0)
    with pytest.raises(ValueError):
        ToneParams(amplitude=1.0, frequency=-3.0)
    # phase canonicalized into [-pi, pi)
    assert ToneParams(1.0, 1.0, phase=7.0).phase == pytest.approx(7.0 - TWO_PI)


def test_scenario_validation():
    t1 = ToneParams(1.0, 1.0e8)
    t2 = ToneParams(1.0, 1.1e8)
    scen = Scenario(tones=(t1, t2), band_limit=1.0e9)
    assert list(scen.frequencies) == [1.0e8, 1.1e8]
    with pytest.raises(ValueError):
        Scenario(tones=(), band_limit=1.0e9)
    with pytest.raises(ValueError):
        Scenario(tones=(ToneParams(1.0, 2.0e9),), band_limit=1.0e9)
    with pytest.raises(ValueError):
        Scenario(tones=(t1, t2), band_limit=1.0e9, min_separation=5.0e7)


def test_rms_frequency_power_weighted():
    # sqrt((A1^2 f1^2 + A2^2 f2^2) / (A1^2 + A2^2))
    scen = Scenario(
        tones=(ToneParams(2.0, 3.0e6), ToneParams(1.0, 9.0e6)), band_limit=1.0e8
    )
    expect = math.sqrt((4.0 * 9.0e12 + 1.0 * 81.0e12) / 5.0)
    assert scen.rms_frequency() == pytest.approx(expect, rel=1e-15)


def test_uniform_scheme_times_and_rates():
    scheme = SamplingScheme(variant="uniform", num_samples=16, sample_rate=4.0e6)
    t = scheme.times()
    assert np.array_equal(t, np.arange(16) / 4.0e6)
    assert scheme.average_rate() == pytest.approx(4.0e6)
    assert scheme.compression_ratio(2.0e7) == pytest.approx(10.0)
    assert uniform_sample_rate(t) == pytest.approx(4.0e6, rel=1e-12)


def test_random_scheme_subset_of_base_grid():
    scheme = SamplingScheme(
        variant="random", num_samples=64, base_rate=1.0e6, compression=8.0, seed=5
    )
    assert scheme.window_slots() == 512
    t = scheme.times()
    assert len(t) == 64
    assert np.all(np.diff(t) > 0)
    # every time lies on the dense base grid
    slots = np.round(t * 1.0e6)
    assert np.allclose(t, slots / 1.0e6, rtol=0, atol=1e-18)
    assert slots.max() < 512
    # reproducible from the seed, different for another seed
    assert np.array_equal(t, scheme.times())
    other = SamplingScheme(
        variant="random", num_samples=64, base_rate=1.0e6, compression=8.0, seed=6
    )
    assert not np.array_equal(t, other.times())


def test_scheme_validation():
    with pytest.raises(ValueError):
        SamplingScheme(variant="weird", num_samples=16, sample_rate=1.0)
    with pytest.raises(ValueError):
        SamplingScheme(variant="uniform", num_samples=16)
    with pytest.raises(ValueError):
        SamplingScheme(variant="random", num_samples=16, base_rate=1.0, compression=0.5)


def test_multitone_derivative_matches_complex_step():
    # complex-step differentiation: f'(t) = Im f(t + ih) / h to machine precision
    tones = (
        ToneParams(1.2, 3.1e5, 0.7),
        ToneParams(0.5, 1.7e6, -2.1),
        ToneParams(2.0, 4.9e6, 1.0),
    )
    t = np.linspace(0.0, 1e-4, 257)
    h = 1e-20
    oracle = multitone(tones, t + 1j * h).imag / h
    assert np.allclose(multitone_derivative(tones, t), oracle, rtol=1e-12, atol=0)


def test_synthesize_values_and_metadata():
    scen = Scenario(tones=(ToneParams(1.0, 5.0e5, 0.25),), band_limit=1.0e7)
    scheme = SamplingScheme(variant="uniform", num_samples=32, sample_rate=4.0e6)
    obs = synthesize(scen, scheme)
    assert obs.scenario is scen
    assert obs.sigma_x == 0.0 and obs.sigma_xdot == 0.0
    t3 = 3.0 / 4.0e6
    assert obs.x[3] == pytest.approx(math.cos(TWO_PI * 5.0e5 * t3 + 0.25), rel=1e-15)
    assert obs.xdot[3] == pytest.approx(
        -TWO_PI * 5.0e5 * math.sin(TWO_PI * 5.0e5 * t3 + 0.25), rel=1e-15
    )


def test_observation_length_mismatch():
    with pytest.raises(ValueError):
        DualChannelObservation(times=np.arange(4.0), x=np.zeros(4), xdot=np.zeros(3))


def test_noise_config_conventions():
    noise = NoiseConfig(sigma_x=0.5, convention="equal_variance")
    assert noise.sigma_xdot() == 0.5
    noise = NoiseConfig(sigma_x=0.5, convention="equal_snr", reference_frequency=2.0e6)
    assert noise.sigma_xdot() == pytest.approx(TWO_PI * 2.0e6 * 0.5, rel=1e-15)
    scen = Scenario(tones=(ToneParams(1.0, 3.0e6),), band_limit=1.0e8)
    noise = NoiseConfig(sigma_x=0.5, convention="equal_snr")
    assert noise.sigma_xdot(scen) == pytest.approx(TWO_PI * 3.0e6 * 0.5, rel=1e-15)
    with pytest.raises(ValueError):
        noise.sigma_xdot()
    with pytest.raises(ValueError):
        NoiseConfig(sigma_x=-1.0)
    with pytest.raises(ValueError):
        NoiseConfig(sigma_x=1.0, convention="loud")


def test_add_noise_statistics_and_reproducibility():
    scen = Scenario(tones=(ToneParams(1.0, 1.0e6),), band_limit=1.0e7)
    scheme = SamplingScheme(variant="uniform", num_samples=4096, sample_rate=8.0e6)
    clean = synthesize(scen, scheme)
    noise = NoiseConfig(sigma_x=0.3, convention="equal_variance")
    noisy = add_noise(clean, noise, seed=11)
    assert noisy.sigma_x == pytest.approx(0.3)
    assert noisy.sigma_xdot == pytest.approx(0.3)
    nx = noisy.x - clean.x
    nd = noisy.xdot - clean.xdot
    n = len(clean)
    # sample variance of N iid draws concentrates within 5 sigma
    tol = 5.0 * math.sqrt(2.0 / n) * 0.09
    assert abs(np.var(nx) - 0.09) < tol
    assert abs(np.var(nd) - 0.09) < tol
    # channels independent: negligible cross-correlation
    assert abs(np.mean(nx * nd)) < 5.0 * 0.09 / math.sqrt(n)
    again = add_noise(clean, noise, seed=11)
    assert np.array_equal(noisy.x, again.x)
    assert np.array_equal(noisy.xdot, again.xdot)
    different = add_noise(clean, noise, seed=12)
    assert not np.array_equal(noisy.x, different.x)


def test_add_noise_accumulates_in_quadrature():
    scen = Scenario(tones=(ToneParams(1.0, 1.0e6),), band_limit=1.0e7)
    scheme = SamplingScheme(variant="uniform", num_samples=64, sample_rate=8.0e6)
    obs = synthesize(scen, scheme)
    obs = add_noise(obs, NoiseConfig(sigma_x=3.0, convention="equal_variance"), 1)
    obs = add_noise(obs, NoiseConfig(sigma_x=4.0, convention="equal_variance"), 2)
    assert obs.sigma_x == pytest.approx(5.0)
    assert obs.sigma_xdot == pytest.approx(5.0)


def test_snr_linear_examples():
    scen = Scenario(tones=(ToneParams(1.0, 2.0e6),), band_limit=1.0e8)
    snr_x, snr_d = snr_linear(scen, NoiseConfig(sigma_x=1.0, convention="equal_variance"))
    assert snr_x[0] == pytest.approx(0.5)
    # equal_variance scales the derivative-channel SNR by (2 pi f)^2
    assert snr_d[0] == pytest.approx(0.5 * (TWO_PI * 2.0e6) ** 2, rel=1e-12)
    # equal_snr at the tone frequency equalizes both channels
    snr_x, snr_d = snr_linear(scen, NoiseConfig(sigma_x=0.1, convention="equal_snr"))
    assert snr_x[0] == pytest.approx(snr_d[0], rel=1e-12)
    with pytest.raises(ValueError):
        snr_linear(scen, NoiseConfig(sigma_x=0.0))


def test_uniform_sample_rate_rejects_random_times():
    scheme = SamplingScheme(
        variant="random", num_samples=64, base_rate=1.0e6, compression=4.0, seed=3
    )
    with pytest.raises(ValueError):
        uniform_sample_rate(scheme.times())
    # offset grids are fine, only spacing matters
    t = 0.37 + np.arange(50) * 2.5e-7
    assert uniform_sample_rate(t) == pytest.approx(4.0e6, rel=1e-9)
