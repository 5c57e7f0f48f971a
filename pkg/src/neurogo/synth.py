"""Synthetic two-channel EEG with a steady-state response at the gazed frequency.

Stands in for a wireless occipital headset: every generated window carries a
sinusoid stack (fundamental plus harmonics, random per-session phase) at the
frequency coding the gazed command, mixed into pink/white/alpha noise at a
configured SNR.  Also models the pre-session electrode impedance check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .commands import Command
from .seeds import derive


class InvalidConfig(ValueError):
    """Raised when a configuration violates its invariants."""


class EmptyReport(ValueError):
    """Raised when an impedance report carries no channels."""


@dataclass(frozen=True)
class NoiseMix:
    """Power fractions of the three noise families; must sum to 1."""

    pink_weight: float = 0.7
    white_weight: float = 0.2
    alpha_weight: float = 0.1
    alpha_center_hz: float = 10.0


@dataclass(frozen=True)
class SynthConfig:
    target_amp_uv: float = 10.0
    # relative amplitudes of harmonics 2..H (fundamental is implicitly 1.0)
    harmonic_rel_amps: tuple[float, ...] = (0.5, 0.25)
    snr_db: float = 0.0
    noise: NoiseMix = field(default_factory=NoiseMix)
    sample_rate_hz: float = 256.0
    window_s: float = 2.0
    channel_labels: tuple[str, ...] = ("O1", "O2")
    seed: int = 0


@dataclass(frozen=True)
class GazeState:
    """What the subject is looking at; None means resting (no response)."""

    target: Command | None = None


@dataclass(frozen=True)
class ChannelData:
    label: str
    samples: np.ndarray  # microvolts, float64

    def __eq__(self, other) -> bool:  # samples need array comparison
        return (
            isinstance(other, ChannelData)
            and self.label == other.label
            and np.array_equal(self.samples, other.samples)
        )


@dataclass(frozen=True)
class SignalWindow:
    channels: tuple[ChannelData, ...]
    sample_rate_hz: float
    start_time_s: float
    window_id: int

    @property
    def n_samples(self) -> int:
        return len(self.channels[0].samples)

    def as_matrix(self) -> np.ndarray:
        """Samples as an (n_samples, n_channels) array."""
        return np.column_stack([ch.samples for ch in self.channels])


@dataclass(frozen=True)
class ImpedanceReport:
    per_channel_kohm: dict[str, float]


@dataclass(frozen=True)
class ImpedanceCheck:
    per_channel_pass: dict[str, bool]
    gate_open: bool


def _validate_config(cfg: SynthConfig, max_freq_hz: float | None) -> None:
    mix = cfg.noise
    weights = (mix.pink_weight, mix.white_weight, mix.alpha_weight)
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
        raise InvalidConfig(f"noise weights must be non-negative and sum to 1, got {weights}")
    if not np.isfinite(cfg.snr_db):
        raise InvalidConfig("snr_db must be finite")
    if cfg.sample_rate_hz <= 0 or cfg.window_s <= 0:
        raise InvalidConfig("sample_rate_hz and window_s must be positive")
    if any(not 0.0 <= a <= 1.0 for a in cfg.harmonic_rel_amps):
        raise InvalidConfig("harmonic_rel_amps must lie in [0, 1]")
    if max_freq_hz is not None:
        highest = max_freq_hz * (1 + len(cfg.harmonic_rel_amps))
        if cfg.sample_rate_hz < 2.0 * highest:
            raise InvalidConfig(
                f"sample rate {cfg.sample_rate_hz} Hz below Nyquist for "
                f"highest stimulus harmonic {highest} Hz"
            )


def _pink_noise(n: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-variance 1/f noise via spectral shaping of white noise."""
    white = rng.standard_normal(n)
    spec = np.fft.rfft(white)
    freqs = np.fft.rfftfreq(n, d=1.0)  # bin index scale; only the shape matters
    spec[0] = 0.0
    spec[1:] /= np.sqrt(freqs[1:])
    out = np.fft.irfft(spec, n)
    return out / out.std()


def _alpha_noise(n: int, fs: float, center_hz: float, rng: np.random.Generator) -> np.ndarray:
    """Unit-variance white noise band-limited to center_hz +/- 1 Hz."""
    white = rng.standard_normal(n)
    spec = np.fft.rfft(white)
    freqs = np.fft.rfftfreq(n, d=1.0 / fs)
    band = (freqs >= center_hz - 1.0) & (freqs <= center_hz + 1.0)
    spec[~band] = 0.0
    out = np.fft.irfft(spec, n)
    std = out.std()
    if std == 0.0:  # degenerate band (outside Nyquist); keep zeros
        return out
    return out / std


def _noise_block(n: int, cfg: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """Unit-power noise mixture; weights are power fractions."""
    mix = cfg.noise
    out = np.zeros(n)
    if mix.pink_weight > 0:
        out += np.sqrt(mix.pink_weight) * _pink_noise(n, rng)
    if mix.white_weight > 0:
        out += np.sqrt(mix.white_weight) * rng.standard_normal(n)
    if mix.alpha_weight > 0:
        out += np.sqrt(mix.alpha_weight) * _alpha_noise(n, cfg.sample_rate_hz, mix.alpha_center_hz, rng)
    return out


def signal_power(cfg: SynthConfig) -> float:
    """Mean power of the sinusoid stack (fundamental + harmonics)."""
    amps = [cfg.target_amp_uv] + [cfg.target_amp_uv * rel for rel in cfg.harmonic_rel_amps]
    return sum(a * a / 2.0 for a in amps)


def generate_window(
    gaze: GazeState,
    stim: "StimulusTable",
    cfg: SynthConfig,
    window_id: int,
) -> SignalWindow:
    """Generate one multi-channel window, deterministic in (gaze, stim, cfg, window_id).

    The SSVEP stack rides on every channel; noise is drawn independently per
    channel and scaled so the in-window SSVEP-to-noise power ratio equals
    cfg.snr_db exactly.  Resting gaze produces noise at the same floor a
    stimulus window would have, so streams mix cleanly.
    """
    max_freq = max(stim.frequencies_hz()) if stim is not None else None
    _validate_config(cfg, max_freq)

    n = int(round(cfg.window_s * cfg.sample_rate_hz))
    start_s = window_id * cfg.window_s
    t = start_s + np.arange(n) / cfg.sample_rate_hz

    # per-session random phase, one per harmonic, shared across channels
    phase_rng = np.random.default_rng(derive(cfg.seed, "phase"))
    n_harm = 1 + len(cfg.harmonic_rel_amps)
    phases = phase_rng.uniform(0.0, 2.0 * np.pi, size=n_harm)

    ssvep = np.zeros(n)
    if gaze.target is not None:
        freq = stim.frequency_of(gaze.target)
        rel = (1.0,) + tuple(cfg.harmonic_rel_amps)
        for k in range(n_harm):
            ssvep += cfg.target_amp_uv * rel[k] * np.sin(2.0 * np.pi * (k + 1) * freq * t + phases[k])

    noise_power = signal_power(cfg) / (10.0 ** (cfg.snr_db / 10.0))
    channels = []
    for ci, label in enumerate(cfg.channel_labels):
        rng = np.random.default_rng(derive(cfg.seed, "noise", window_id, ci))
        noise = _noise_block(n, cfg, rng)
        measured = noise.std()
        if measured > 0:
            noise *= np.sqrt(noise_power) / measured
        channels.append(ChannelData(label=label, samples=ssvep + noise))

    return SignalWindow(
        channels=tuple(channels),
        sample_rate_hz=cfg.sample_rate_hz,
        start_time_s=start_s,
        window_id=window_id,
    )


def measure_impedance(true_kohm: dict[str, float], jitter_pct: float, seed: int) -> ImpedanceReport:
    """Simulated contact-impedance readout: true value +/- uniform jitter."""
    if not 0.0 <= jitter_pct <= 50.0:
        raise InvalidConfig(f"jitter_pct must lie in [0, 50], got {jitter_pct}")
    rng = np.random.default_rng(derive(seed, "impedance"))
    report = {}
    for label in true_kohm:
        u = rng.uniform(-jitter_pct / 100.0, jitter_pct / 100.0)
        report[label] = true_kohm[label] * (1.0 + u)
    return ImpedanceReport(per_channel_kohm=report)


def check_impedance(report: ImpedanceReport, threshold_kohm: float) -> ImpedanceCheck:
    """Gate a session on contact quality: every channel must be at or below threshold."""
    if threshold_kohm <= 0:
        raise InvalidConfig("threshold_kohm must be positive")
    if not report.per_channel_kohm:
        raise EmptyReport("impedance report has no channels")
    per_channel = {label: value <= threshold_kohm for label, value in report.per_channel_kohm.items()}
    return ImpedanceCheck(per_channel_pass=per_channel, gate_open=all(per_channel.values()))


def window_to_csv(window: SignalWindow) -> str:
    """Dump one window as CSV: time_s plus one microvolt column per channel."""
    header = "time_s," + ",".join(f"{ch.label}_uv" for ch in window.channels)
    times = window.start_time_s + np.arange(window.n_samples) / window.sample_rate_hz
    lines = [header]
    for i in range(window.n_samples):
        row = [f"{times[i]:.6f}"] + [f"{ch.samples[i]:.6f}" for ch in window.channels]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
