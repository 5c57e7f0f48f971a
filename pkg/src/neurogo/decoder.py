"""Five-class frequency decoding of EEG windows into navigation commands.

Two scoring paths: a periodogram power ratio (psd) and canonical correlation
against sin/cos references (cca, the quality path).  A debouncer turns the
streaming classifications into at most one command per refractory period.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .commands import COMMANDS, Command
from .synth import InvalidConfig, SignalWindow


class WindowTooShort(ValueError):
    """Window carries too few samples for the requested analysis."""


class SingularCovariance(np.linalg.LinAlgError):
    """Covariance not invertible; only reachable with regularization disabled."""


DEFAULT_FREQUENCIES = {
    Command.UP: 8.0,
    Command.DOWN: 9.0,
    Command.LEFT: 10.0,
    Command.RIGHT: 11.0,
    Command.SELECT: 12.0,
}


@dataclass(frozen=True)
class StimulusTable:
    """Command -> flicker frequency mapping; exactly one entry per command."""

    frequencies: dict[Command, float] = field(default_factory=lambda: dict(DEFAULT_FREQUENCIES))

    def __post_init__(self) -> None:
        if set(self.frequencies) != set(COMMANDS):
            raise InvalidConfig("stimulus table must map exactly the five commands")
        freqs = sorted(self.frequencies.values())
        if any(f <= 0 for f in freqs):
            raise InvalidConfig("stimulus frequencies must be positive")
        if any(b - a < 0.5 for a, b in zip(freqs, freqs[1:])):
            raise InvalidConfig("stimulus frequencies must be at least 0.5 Hz apart")

    def frequency_of(self, command: Command) -> float:
        return self.frequencies[command]

    def frequencies_hz(self) -> list[float]:
        return list(self.frequencies.values())

    def ordered_by_frequency(self) -> list[Command]:
        return sorted(COMMANDS, key=self.frequency_of)


@dataclass(frozen=True)
class Classification:
    window_id: int
    scores: dict[Command, float]
    predicted: Command
    confidence: float


@dataclass(frozen=True)
class DecoderConfig:
    method: str = "cca"  # "psd" | "cca"
    n_harmonics: int = 2
    decision_threshold: float = 0.35
    margin: float = 0.05
    consecutive_required: int = 2
    refractory_s: float = 1.0
    detrend: bool = True

    def __post_init__(self) -> None:
        if self.method not in ("psd", "cca"):
            raise InvalidConfig(f"unknown decoder method {self.method!r}")
        if self.consecutive_required < 1:
            raise InvalidConfig("consecutive_required must be >= 1")
        if not (0.0 <= self.decision_threshold <= 1.0 and 0.0 <= self.margin <= 1.0):
            raise InvalidConfig("thresholds must lie in [0, 1]")
        if self.n_harmonics < 1:
            raise InvalidConfig("n_harmonics must be >= 1")


def _check_window_length(window: SignalWindow, stim: StimulusTable) -> None:
    min_freq = min(stim.frequencies_hz())
    required = 2.0 * window.sample_rate_hz / min_freq
    if window.n_samples < required:
        raise WindowTooShort(
            f"{window.n_samples} samples < {required:.0f} required for {min_freq} Hz"
        )


def psd_scores(window: SignalWindow, stim: StimulusTable, n_harmonics: int = 2) -> dict[Command, float]:
    """Relative periodogram power at each command's harmonic bins.

    Rectangular window, single segment, nearest-bin lookup; the five class
    powers are normalized to sum to 1.  An all-zero window scores uniformly.
    """
    _check_window_length(window, stim)
    fs = window.sample_rate_hz
    n = window.n_samples
    freqs = np.fft.rfftfreq(n, d=1.0 / fs)

    power = np.zeros(len(freqs))
    for ch in window.channels:
        spec = np.fft.rfft(ch.samples)
        power += (spec.real**2 + spec.imag**2) / n

    raw = {}
    for cmd in COMMANDS:
        f0 = stim.frequency_of(cmd)
        total = 0.0
        for k in range(1, n_harmonics + 1):
            idx = int(np.argmin(np.abs(freqs - k * f0)))
            total += power[idx]
        raw[cmd] = total

    denom = sum(raw.values())
    if denom <= 0.0:
        return {cmd: 1.0 / len(COMMANDS) for cmd in COMMANDS}
    return {cmd: float(raw[cmd] / denom) for cmd in COMMANDS}


def _reference_set(freq_hz: float, fs: float, n: int, n_harmonics: int) -> np.ndarray:
    t = np.arange(n) / fs
    cols = []
    for k in range(1, n_harmonics + 1):
        cols.append(np.sin(2.0 * np.pi * k * freq_hz * t))
        cols.append(np.cos(2.0 * np.pi * k * freq_hz * t))
    return np.column_stack(cols)


def first_canonical_correlation(x: np.ndarray, y: np.ndarray, eps: float = 1e-9) -> float:
    """Largest canonical correlation between column sets x and y.

    Standard whitened-cross-covariance SVD.  Regularization floors the
    covariance eigenvalues at `eps`, which only acts on (near-)singular
    directions, so well-conditioned inputs match unregularized CCA to machine
    precision.  With eps=0 a rank-deficient covariance raises
    SingularCovariance instead of returning garbage.
    """
    n = x.shape[0]
    cxx = x.T @ x / n
    cyy = y.T @ y / n
    cxy = x.T @ y / n

    def inv_sqrt(c: np.ndarray) -> np.ndarray:
        vals, vecs = np.linalg.eigh(c)
        if vals[0] <= max(vals[-1], 0.0) * 1e-14:
            if eps == 0.0:
                raise SingularCovariance("covariance is singular; enable regularization")
            vals = np.maximum(vals, eps)
        return vecs @ np.diag(vals**-0.5) @ vecs.T

    m = inv_sqrt(cxx) @ cxy @ inv_sqrt(cyy)
    rho = float(np.linalg.svd(m, compute_uv=False)[0])
    return min(max(rho, 0.0), 1.0)


def cca_scores(
    window: SignalWindow,
    stim: StimulusTable,
    n_harmonics: int = 2,
    detrend: bool = True,
    eps: float = 1e-9,
) -> dict[Command, float]:
    """First canonical correlation of the window against each command's references.

    Scores lie individually in [0, 1]; they are not normalized across classes.
    """
    _check_window_length(window, stim)
    x = window.as_matrix()
    if detrend:
        x = x - x.mean(axis=0)
    scores = {}
    for cmd in COMMANDS:
        y = _reference_set(stim.frequency_of(cmd), window.sample_rate_hz, window.n_samples, n_harmonics)
        y = y - y.mean(axis=0)
        scores[cmd] = first_canonical_correlation(x, y, eps=eps)
    return scores


def classify(window: SignalWindow, stim: StimulusTable, cfg: DecoderConfig) -> Classification:
    """Score the window with the configured method and pick the winner.

    Ties break toward the lowest stimulus frequency so degenerate windows
    classify deterministically with confidence 0.
    """
    if cfg.method == "psd":
        scores = psd_scores(window, stim, cfg.n_harmonics)
    else:
        scores = cca_scores(window, stim, cfg.n_harmonics, detrend=cfg.detrend)

    by_preference = stim.ordered_by_frequency()
    predicted = max(by_preference, key=lambda c: (scores[c], -by_preference.index(c)))
    ranked = sorted(scores.values(), reverse=True)
    confidence = min(max(ranked[0] - ranked[1], 0.0), 1.0)
    return Classification(
        window_id=window.window_id,
        scores=scores,
        predicted=predicted,
        confidence=confidence,
    )


def smooth_decide(
    history: list[Classification],
    cfg: DecoderConfig,
    now_s: float,
    last_emit_s: float | None = None,
) -> Command | None:
    """Debounce the classification stream into an occasional command.

    Emits c iff the last `consecutive_required` classifications all predict c
    with top score >= decision_threshold and confidence >= margin, and no
    command was emitted within refractory_s of now_s.  Pure in
    (history, cfg, now_s, last_emit_s).
    """
    if last_emit_s is not None and now_s - last_emit_s < cfg.refractory_s:
        return None
    if len(history) < cfg.consecutive_required:
        return None
    recent = history[-cfg.consecutive_required:]
    candidate = recent[-1].predicted
    for cls in recent:
        if cls.predicted is not candidate:
            return None
        if cls.scores[cls.predicted] < cfg.decision_threshold:
            return None
        if cls.confidence < cfg.margin:
            return None
    return candidate
