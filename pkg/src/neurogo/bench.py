"""Decoder accuracy sweeps over an SNR/window grid, with information-transfer rate."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .commands import COMMANDS
from .decoder import DecoderConfig, StimulusTable, classify
from .seeds import derive
from .synth import GazeState, SynthConfig, generate_window


class InvalidGrid(ValueError):
    """Raised on an empty grid or a non-positive trial count."""


@dataclass(frozen=True)
class BenchCell:
    method: str
    snr_db: float
    window_s: float
    trials: int
    accuracy: float
    mean_confidence: float
    itr_bits_per_min: float


def wolpaw_itr(n_classes: int, accuracy: float, trial_s: float) -> float:
    """Wolpaw information transfer rate in bits/min.

    Undefined below chance; clamped to 0 there (and at accuracy 0/1 the
    entropy terms collapse to their limits).
    """
    if not 0.0 <= accuracy <= 1.0:
        raise InvalidGrid(f"accuracy must lie in [0, 1], got {accuracy}")
    p = accuracy
    n = n_classes
    if p <= 1.0 / n:
        return 0.0
    if p == 1.0:
        bits = math.log2(n)
    else:
        bits = math.log2(n) + p * math.log2(p) + (1 - p) * math.log2((1 - p) / (n - 1))
    return bits * 60.0 / trial_s


def benchmark(
    stim: StimulusTable,
    decoder_cfg: DecoderConfig,
    snr_db_grid: list[float],
    window_s_grid: list[float],
    methods: list[str],
    trials_per_cell: int,
    seed: int,
    synth_cfg: SynthConfig | None = None,
) -> list[BenchCell]:
    """Monte-Carlo accuracy per (method, snr_db, window_s) cell.

    Each trial draws its target uniformly and uses a fresh session seed, so
    the per-session random phases vary across trials.  Deterministic by seed.
    """
    if trials_per_cell < 1:
        raise InvalidGrid("trials_per_cell must be >= 1")
    if not snr_db_grid or not window_s_grid or not methods:
        raise InvalidGrid("grid must name at least one snr, window length, and method")
    base = synth_cfg or SynthConfig()

    cells = []
    for method in methods:
        dcfg = replace(decoder_cfg, method=method)
        for snr_db in snr_db_grid:
            for window_s in window_s_grid:
                rng = np.random.default_rng(derive(seed, "bench", int(round(snr_db * 1000)), int(round(window_s * 1000)), methods.index(method)))
                correct = 0
                conf_total = 0.0
                for trial in range(trials_per_cell):
                    target = COMMANDS[int(rng.integers(len(COMMANDS)))]
                    scfg = replace(base, snr_db=snr_db, window_s=window_s, seed=int(rng.integers(2**63)))
                    window = generate_window(GazeState(target=target), stim, scfg, window_id=0)
                    result = classify(window, stim, dcfg)
                    if result.predicted is target:
                        correct += 1
                    conf_total += result.confidence
                accuracy = correct / trials_per_cell
                cells.append(
                    BenchCell(
                        method=method,
                        snr_db=snr_db,
                        window_s=window_s,
                        trials=trials_per_cell,
                        accuracy=accuracy,
                        mean_confidence=conf_total / trials_per_cell,
                        itr_bits_per_min=wolpaw_itr(len(COMMANDS), accuracy, window_s),
                    )
                )
    return cells


def bench_to_csv(cells: list[BenchCell]) -> str:
    lines = ["method,snr_db,window_s,trials,accuracy,mean_confidence,itr_bits_per_min"]
    for c in cells:
        lines.append(
            f"{c.method},{c.snr_db:.4f},{c.window_s:.4f},{c.trials},"
            f"{c.accuracy:.4f},{c.mean_confidence:.4f},{c.itr_bits_per_min:.4f}"
        )
    return "\n".join(lines) + "\n"
