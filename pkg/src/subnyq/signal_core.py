"""Dual-channel multi-tone signal model and sampling schemes.

A scenario is a sum of real tones A_k cos(2*pi*f_k*t + phi_k).  Both the
signal and its exact analytic derivative are observed, each through its own
additive white Gaussian noise channel.  The derivative channel is never
approximated by finite differencing: the clean derivative of a tone with
amplitude A and frequency f has amplitude B = 2*pi*f*A exactly, which is the
identity the ratio-based frequency estimator relies on.

Sub-Nyquist acquisition comes in two flavours: uniform sampling below the
Nyquist rate of the band (tones fold), and random undersampling on a dense
base grid (no coherent folding).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_phase(phase):
    """Wrap a phase (scalar or array) to the canonical interval [-pi, pi)."""
    return (np.asarray(phase) + math.pi) % TWO_PI - math.pi


@dataclass(frozen=True)
class ToneParams:
    """One real tone.  Phase is canonicalized to [-pi, pi) on construction."""

    amplitude: float
    frequency: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.amplitude > 0.0:
            raise ValueError(f"tone amplitude must be positive, got {self.amplitude}")
        if not self.frequency > 0.0:
            raise ValueError(f"tone frequency must be positive, got {self.frequency}")
        object.__setattr__(self, "phase", float(wrap_phase(self.phase)))

    @property
    def derivative_amplitude(self) -> float:
        # B = 2*pi*f*A, exact for the analytic derivative channel
        return TWO_PI * self.frequency * self.amplitude


@dataclass(frozen=True)
class Scenario:
    """A band-limited collection of tones.

    Parameters
    ----------
    tones : tuple of ToneParams
        At least one tone; all frequencies must lie in (0, band_limit).
    band_limit : float
        One-sided band limit in Hz.  The reference Nyquist rate of the
        scenario is 2*band_limit.
    min_separation : float
        Smallest allowed pairwise frequency spacing (0 disables the check).
    """

    tones: tuple
    band_limit: float
    min_separation: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "tones", tuple(self.tones))
        if len(self.tones) == 0:
            raise ValueError("scenario needs at least one tone")
        if not self.band_limit > 0.0:
            raise ValueError("band_limit must be positive")
        freqs = np.array([t.frequency for t in self.tones])
        if np.any(freqs >= self.band_limit):
            raise ValueError("tone frequency at or above the band limit")
        if self.min_separation > 0.0 and len(freqs) > 1:
            gaps = np.diff(np.sort(freqs))
            if np.min(gaps) < self.min_separation:
                raise ValueError(
                    f"tone spacing {np.min(gaps):.6g} below min_separation "
                    f"{self.min_separation:.6g}"
                )

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([t.frequency for t in self.tones])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([t.amplitude for t in self.tones])

    @property
    def phases(self) -> np.ndarray:
        return np.array([t.phase for t in self.tones])

    def rms_frequency(self) -> float:
        """Power-weighted RMS tone frequency, sqrt(sum A^2 f^2 / sum A^2)."""
        a2 = self.amplitudes**2
        return float(math.sqrt(np.sum(a2 * self.frequencies**2) / np.sum(a2)))


@dataclass(frozen=True)
class SamplingScheme:
    """Sample-time generator.

    variant "uniform": num_samples at sample_rate, t_n = n / sample_rate.
    variant "random": num_samples indices drawn uniformly without replacement
    from a dense base grid of ceil(num_samples * compression) slots at
    base_rate, sorted ascending.  The draw is reproducible from seed.
    """

    variant: str
    num_samples: int
    sample_rate: float = 0.0
    base_rate: float = 0.0
    compression: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.variant not in ("uniform", "random"):
            raise ValueError(f"unknown sampling variant {self.variant!r}")
        if self.num_samples < 8:
            raise ValueError("num_samples must be at least 8")
        if self.variant == "uniform" and not self.sample_rate > 0.0:
            raise ValueError("uniform scheme needs a positive sample_rate")
        if self.variant == "random":
            if not self.base_rate > 0.0:
                raise ValueError("random scheme needs a positive base_rate")
            if not self.compression >= 1.0:
                raise ValueError("random scheme needs compression >= 1")

    def window_slots(self) -> int:
        # number of base-grid slots spanned by the observation window
        return int(math.ceil(self.num_samples * self.compression))

    def times(self) -> np.ndarray:
        if self.variant == "uniform":
            return np.arange(self.num_samples) / self.sample_rate
        slots = self.window_slots()
        rng = np.random.default_rng(self.seed)
        idx = rng.choice(slots, size=self.num_samples, replace=False)
        idx.sort()
        return idx / self.base_rate

    def duration(self) -> float:
        if self.variant == "uniform":
            return self.num_samples / self.sample_rate
        return self.window_slots() / self.base_rate

    def average_rate(self) -> float:
        return self.num_samples / self.duration()

    def compression_ratio(self, band_limit: float) -> float:
        """Ratio of the band's Nyquist rate to the average sampling rate."""
        return 2.0 * band_limit / self.average_rate()


@dataclass(frozen=True)
class NoiseConfig:
    """Per-channel white Gaussian noise levels.

    convention "equal_variance": sigma_xdot = sigma_x.
    convention "equal_snr": sigma_xdot = 2*pi*f_ref*sigma_x so that a tone at
    f_ref sees the same SNR on both channels; f_ref defaults to the
    scenario's power-weighted RMS tone frequency when not given explicitly.
    """

    sigma_x: float
    convention: str = "equal_snr"
    reference_frequency: float | None = None

    def __post_init__(self):
        if self.sigma_x < 0.0:
            raise ValueError("sigma_x must be nonnegative")
        if self.convention not in ("equal_variance", "equal_snr"):
            raise ValueError(f"unknown noise convention {self.convention!r}")

    def resolve_reference(self, scenario: Scenario | None = None) -> float:
        if self.reference_frequency is not None:
            return self.reference_frequency
        if scenario is None:
            raise ValueError(
                "equal_snr noise needs a reference_frequency or a scenario"
            )
        return scenario.rms_frequency()

    def sigma_xdot(self, scenario: Scenario | None = None) -> float:
        if self.convention == "equal_variance":
            return self.sigma_x
        return TWO_PI * self.resolve_reference(scenario) * self.sigma_x


@dataclass(frozen=True)
class DualChannelObservation:
    """Sampled signal and derivative channels with their noise levels."""

    times: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    sigma_x: float = 0.0
    sigma_xdot: float = 0.0
    scenario: Scenario | None = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "xdot", np.asarray(self.xdot, dtype=float))
        if not (len(t) == len(self.x) == len(self.xdot)):
            raise ValueError("times, x and xdot must have equal length")

    def __len__(self) -> int:
        return len(self.times)


def multitone(tones, t):
    """Clean multi-tone signal sum_k A_k cos(2*pi*f_k*t + phi_k).

    Accepts complex t as well, which makes the model usable with
    complex-step differentiation in verification code.
    """
    t = np.asarray(t)
    out = np.zeros_like(t, dtype=t.dtype)
    for tone in tones:
        out = out + tone.amplitude * np.cos(TWO_PI * tone.frequency * t + tone.phase)
    return out


def multitone_derivative(tones, t):
    """Exact analytic derivative of :func:`multitone`."""
    t = np.asarray(t)
    out = np.zeros_like(t, dtype=t.dtype)
    for tone in tones:
        out = out - tone.derivative_amplitude * np.sin(
            TWO_PI * tone.frequency * t + tone.phase
        )
    return out


def synthesize(scenario: Scenario, scheme: SamplingScheme) -> DualChannelObservation:
    """Sample the clean signal and its analytic derivative.

    Returns a noiseless observation (sigma_x = sigma_xdot = 0) carrying the
    generating scenario for later reference.
    """
    t = scheme.times()
    return DualChannelObservation(
        times=t,
        x=multitone(scenario.tones, t),
        xdot=multitone_derivative(scenario.tones, t),
        sigma_x=0.0,
        sigma_xdot=0.0,
        scenario=scenario,
    )


def add_noise(
    obs: DualChannelObservation, noise: NoiseConfig, seed: int
) -> DualChannelObservation:
    """Add independent white Gaussian noise to both channels.

    The two channels use independent streams derived from one seed, so a
    single integer reproduces the full noisy observation.  Noise adds on top
    of whatever is already in the observation; the recorded standard
    deviations accumulate in quadrature.
    """
    sd_x = noise.sigma_x
    sd_d = noise.sigma_xdot(obs.scenario)
    ss_x, ss_d = np.random.SeedSequence(seed).spawn(2)
    n = len(obs)
    x = obs.x + np.random.default_rng(ss_x).normal(0.0, 1.0, n) * sd_x
    xdot = obs.xdot + np.random.default_rng(ss_d).normal(0.0, 1.0, n) * sd_d
    return replace(
        obs,
        x=x,
        xdot=xdot,
        sigma_x=math.hypot(obs.sigma_x, sd_x),
        sigma_xdot=math.hypot(obs.sigma_xdot, sd_d),
    )


def snr_linear(scenario: Scenario, noise: NoiseConfig):
    """Per-tone linear SNR on each channel.

    SNR_x = A^2 / (2 sigma_x^2) and SNR_xdot = (2 pi f A)^2 / (2 sigma_xdot^2).

    Returns
    -------
    (snr_x, snr_xdot) : pair of ndarray
        One entry per tone, in scenario order.
    """
    if noise.sigma_x == 0.0:
        raise ValueError("snr is undefined for sigma_x = 0")
    sd_d = noise.sigma_xdot(scenario)
    amps = scenario.amplitudes
    damps = TWO_PI * scenario.frequencies * amps
    snr_x = amps**2 / (2.0 * noise.sigma_x**2)
    snr_xdot = damps**2 / (2.0 * sd_d**2)
    return snr_x, snr_xdot


def uniform_sample_rate(times, rtol: float = 1e-9) -> float:
    """Sample rate of a uniform time grid, or raise ValueError.

    The grid may start at any offset; only the spacing must be constant to
    within rtol of the mean spacing.
    """
    t = np.asarray(times, dtype=float)
    if len(t) < 2:
        raise ValueError("need at least two sample times")
    dt = np.diff(t)
    mean_dt = float(np.mean(dt))
    if mean_dt <= 0.0:
        raise ValueError("sample times must be strictly increasing")
    if np.max(np.abs(dt - mean_dt)) > rtol * mean_dt:
        raise ValueError("sample times are not uniformly spaced")
    return 1.0 / mean_dt
