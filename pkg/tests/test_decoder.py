"""Decoder: psd/cca scoring, classification, debouncing, and the CCA oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neurogo.commands import COMMANDS, Command
from neurogo.decoder import (
    Classification,
    DecoderConfig,
    StimulusTable,
    WindowTooShort,
    cca_scores,
    classify,
    first_canonical_correlation,
    psd_scores,
    smooth_decide,
)
from neurogo.synth import ChannelData, GazeState, InvalidConfig, SignalWindow, SynthConfig, generate_window

STIM = StimulusTable()
FS = 256.0


def tone_window(freq_hz, n=512, channels=2, amp=10.0, harmonics=(), window_id=0):
    t = np.arange(n) / FS
    sig = amp * np.sin(2 * np.pi * freq_hz * t)
    for k, rel in harmonics:
        sig = sig + amp * rel * np.sin(2 * np.pi * k * freq_hz * t)
    return SignalWindow(
        channels=tuple(ChannelData(f"C{i}", sig.copy()) for i in range(channels)),
        sample_rate_hz=FS,
        start_time_s=0.0,
        window_id=window_id,
    )


def zero_window(n=512, channels=2):
    return SignalWindow(
        channels=tuple(ChannelData(f"C{i}", np.zeros(n)) for i in range(channels)),
        sample_rate_hz=FS,
        start_time_s=0.0,
        window_id=0,
    )


def noise_window(seed, n=512, channels=2):
    rng = np.random.default_rng(seed)
    return SignalWindow(
        channels=tuple(ChannelData(f"C{i}", rng.standard_normal(n) * 10) for i in range(channels)),
        sample_rate_hz=FS,
        start_time_s=0.0,
        window_id=0,
    )


# psd ------------------------------------------------------------------------


def test_psd_pure_tone_dominates():
    scores = psd_scores(tone_window(8.0), STIM)
    assert scores[Command.UP] > 0.9
    assert sum(scores.values()) == pytest.approx(1.0)


def test_psd_zero_window_uniform():
    scores = psd_scores(zero_window(), STIM)
    assert scores == {cmd: pytest.approx(0.2) for cmd in COMMANDS}


def test_psd_10hz_maps_to_left():
    scores = psd_scores(tone_window(10.0), STIM)
    assert max(scores, key=scores.get) is Command.LEFT


def test_psd_window_too_short():
    with pytest.raises(WindowTooShort):
        psd_scores(tone_window(8.0, n=32), STIM)


# cca ------------------------------------------------------------------------


def test_cca_reference_signal_scores_one():
    t = np.arange(512) / FS
    window = SignalWindow(
        channels=(
            ChannelData("O1", np.sin(2 * np.pi * 8.0 * t)),
            ChannelData("O2", np.cos(2 * np.pi * 8.0 * t)),
        ),
        sample_rate_hz=FS,
        start_time_s=0.0,
        window_id=0,
    )
    assert cca_scores(window, STIM)[Command.UP] >= 0.999


def test_cca_tone_with_harmonic_scores_one():
    window = tone_window(8.0, harmonics=[(2, 0.5)])
    assert cca_scores(window, STIM, n_harmonics=2)[Command.UP] >= 0.999


def test_cca_white_noise_mean_top_score():
    # Monte-Carlo oracle over the noise model: 2 s of white noise should not
    # look like any stimulus
    tops = []
    for seed in range(1000):
        scores = cca_scores(noise_window(seed), STIM)
        tops.append(max(scores.values()))
    assert np.mean(tops) < 0.5


def test_cca_scores_bounded():
    for seed in range(50):
        for score in cca_scores(noise_window(seed), STIM).values():
            assert 0.0 <= score <= 1.0 + 1e-6


def test_cca_projection_oracle_small_windows():
    # independent small-instance oracle: correlation with the least-squares
    # projection onto the reference span
    rng = np.random.default_rng(123)
    for _ in range(200):
        n = int(rng.integers(16, 65))
        freq = float(rng.uniform(4.0, 30.0))
        t = np.arange(n) / FS
        cols = []
        for k in (1, 2):
            cols.append(np.sin(2 * np.pi * k * freq * t))
            cols.append(np.cos(2 * np.pi * k * freq * t))
        y = np.column_stack(cols)
        x = rng.standard_normal(n) * 10.0

        xc = (x - x.mean()).reshape(-1, 1)
        yc = y - y.mean(axis=0)
        rho = first_canonical_correlation(xc, yc)

        q, _ = np.linalg.qr(yc)
        proj = q @ (q.T @ xc[:, 0])
        oracle = float(xc[:, 0] @ proj / (np.linalg.norm(xc) * np.linalg.norm(proj)))
        assert abs(rho - oracle) < 1e-9


def test_cca_singular_only_without_regularization():
    from neurogo.decoder import SingularCovariance

    x = np.zeros((64, 2))
    t = np.arange(64) / FS
    y = np.column_stack([np.sin(2 * np.pi * 8 * t), np.cos(2 * np.pi * 8 * t)])
    assert first_canonical_correlation(x, y) == 0.0  # regularized: defined
    with pytest.raises(SingularCovariance):
        first_canonical_correlation(x, y, eps=0.0)


# classify ---------------------------------------------------------------------


def test_classify_tone_predicts_up():
    for method in ("psd", "cca"):
        result = classify(tone_window(8.0), STIM, DecoderConfig(method=method))
        assert result.predicted is Command.UP


def test_classify_zero_window_tie_breaks_to_lowest_frequency():
    for method in ("psd", "cca"):
        result = classify(zero_window(), STIM, DecoderConfig(method=method))
        assert result.predicted is Command.UP
        assert result.confidence == 0.0


def test_classify_synthetic_high_snr_all_classes():
    cfg = SynthConfig(snr_db=60.0, seed=21)
    for cmd in COMMANDS:
        window = generate_window(GazeState(cmd), STIM, cfg, 0)
        assert classify(window, STIM, DecoderConfig()).predicted is cmd


@settings(max_examples=30, deadline=None)
@given(scale=st.floats(0.01, 100.0), seed=st.integers(0, 500))
def test_argmax_scale_invariant(scale, seed):
    window = noise_window(seed)
    scaled = SignalWindow(
        channels=tuple(ChannelData(ch.label, ch.samples * scale) for ch in window.channels),
        sample_rate_hz=window.sample_rate_hz,
        start_time_s=window.start_time_s,
        window_id=window.window_id,
    )
    for method in ("psd", "cca"):
        cfg = DecoderConfig(method=method)
        assert classify(window, STIM, cfg).predicted is classify(scaled, STIM, cfg).predicted


def test_channel_permutation_invariance():
    window = noise_window(7, channels=3)
    swapped = SignalWindow(
        channels=(window.channels[2], window.channels[0], window.channels[1]),
        sample_rate_hz=FS,
        start_time_s=0.0,
        window_id=0,
    )
    for cmd in COMMANDS:
        assert cca_scores(window, STIM)[cmd] == pytest.approx(cca_scores(swapped, STIM)[cmd], abs=1e-12)
        assert psd_scores(window, STIM)[cmd] == pytest.approx(psd_scores(swapped, STIM)[cmd], abs=1e-12)


def test_stimulus_table_validation():
    with pytest.raises(InvalidConfig):
        StimulusTable({Command.UP: 8.0})
    with pytest.raises(InvalidConfig):
        StimulusTable(
            {
                Command.UP: 8.0,
                Command.DOWN: 8.2,  # closer than 0.5 Hz
                Command.LEFT: 10.0,
                Command.RIGHT: 11.0,
                Command.SELECT: 12.0,
            }
        )


def test_decoder_config_validation():
    with pytest.raises(InvalidConfig):
        DecoderConfig(method="fir")
    with pytest.raises(InvalidConfig):
        DecoderConfig(consecutive_required=0)


# smooth_decide ----------------------------------------------------------------


def _cls(window_id, predicted, top, runner=0.0):
    scores = {cmd: runner for cmd in COMMANDS}
    scores[predicted] = top
    ranked = sorted(scores.values(), reverse=True)
    return Classification(
        window_id=window_id,
        scores=scores,
        predicted=predicted,
        confidence=max(ranked[0] - ranked[1], 0.0),
    )


def test_smooth_decide_emits_on_agreement():
    history = [_cls(0, Command.UP, 0.8), _cls(1, Command.UP, 0.7)]
    assert smooth_decide(history, DecoderConfig(), now_s=4.0) is Command.UP


def test_smooth_decide_requires_agreement():
    history = [_cls(0, Command.UP, 0.9), _cls(1, Command.DOWN, 0.9)]
    assert smooth_decide(history, DecoderConfig(), now_s=4.0) is None


def test_smooth_decide_respects_refractory():
    history = [_cls(0, Command.UP, 0.8), _cls(1, Command.UP, 0.7)]
    assert smooth_decide(history, DecoderConfig(), now_s=4.0, last_emit_s=3.7) is None
    assert smooth_decide(history, DecoderConfig(), now_s=4.8, last_emit_s=3.7) is Command.UP


def test_smooth_decide_threshold_and_margin():
    weak = [_cls(0, Command.UP, 0.3), _cls(1, Command.UP, 0.3)]
    assert smooth_decide(weak, DecoderConfig(), now_s=4.0) is None
    close = [_cls(0, Command.UP, 0.5, runner=0.48), _cls(1, Command.UP, 0.5, runner=0.48)]
    assert smooth_decide(close, DecoderConfig(), now_s=4.0) is None


@settings(max_examples=200, deadline=None)
@given(
    preds=st.lists(st.sampled_from(list(COMMANDS)), min_size=0, max_size=12),
    tops=st.lists(st.floats(0.0, 1.0), min_size=12, max_size=12),
)
def test_smooth_decide_at_most_one_emission_per_refractory(preds, tops):
    cfg = DecoderConfig()
    history: list[Classification] = []
    last_emit = None
    emit_times = []
    for i, pred in enumerate(preds):
        history.append(_cls(i, pred, tops[i]))
        now = i * 0.4  # faster than the refractory period
        decided = smooth_decide(history, cfg, now_s=now, last_emit_s=last_emit)
        if decided is not None:
            emit_times.append(now)
            last_emit = now
    for a, b in zip(emit_times, emit_times[1:]):
        assert b - a >= cfg.refractory_s
