"""Linguistic game-situation labels from (winrate, simulation count) samples.

Five trapezoidal membership functions partition the Black-winrate axis into
W++ / W+ / U / B+ / B++ ("White is obvious at an advantage" through "Black is
obvious at an advantage").  Thin evidence (few simulations) demotes the
extreme labels one step toward uncertain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .synth import InvalidConfig


class GameSituationLabel(Enum):
    W_PLUS_PLUS = "W++"
    W_PLUS = "W+"
    UNCERTAIN = "U"
    B_PLUS = "B+"
    B_PLUS_PLUS = "B++"

    def __str__(self) -> str:
        return self.value


LABELS_ORDERED = (
    GameSituationLabel.W_PLUS_PLUS,
    GameSituationLabel.W_PLUS,
    GameSituationLabel.UNCERTAIN,
    GameSituationLabel.B_PLUS,
    GameSituationLabel.B_PLUS_PLUS,
)

_ORDINAL = {label: i for i, label in enumerate(LABELS_ORDERED)}


def label_ordinal(label: GameSituationLabel) -> int:
    """W++ = 0 .. B++ = 4."""
    return _ORDINAL[label]


def label_from_name(name: str) -> GameSituationLabel:
    for label in LABELS_ORDERED:
        if label.value == name:
            return label
    raise ValueError(f"unknown label {name!r}")


@dataclass(frozen=True)
class Trapezoid:
    """Membership 1 on [core_lo, core_hi], sloping to 0 at support_lo/support_hi.

    Supports may extend past the winrate domain; edge labels use that to stay
    flat at 0 and 1.
    """

    support_lo: float
    core_lo: float
    core_hi: float
    support_hi: float

    def membership(self, w: float) -> float:
        if w < self.support_lo or w > self.support_hi:
            return 0.0
        if w < self.core_lo:
            return (w - self.support_lo) / (self.core_lo - self.support_lo)
        if w > self.core_hi:
            return (self.support_hi - w) / (self.support_hi - self.core_hi)
        return 1.0


def _trapezoid_from_support(lo: float, hi: float, flat_left: bool, flat_right: bool) -> Trapezoid:
    # flat core spans the middle half of the support; edge labels extend
    # their core to the domain boundary so coverage holds at 0 and 1
    quarter = (hi - lo) / 4.0
    return Trapezoid(
        support_lo=lo if not flat_left else float("-inf"),
        core_lo=lo + quarter if not flat_left else float("-inf"),
        core_hi=hi - quarter if not flat_right else float("inf"),
        support_hi=hi if not flat_right else float("inf"),
    )


def default_breakpoints() -> dict[GameSituationLabel, Trapezoid]:
    return {
        GameSituationLabel.W_PLUS_PLUS: _trapezoid_from_support(0.0, 0.25, True, False),
        GameSituationLabel.W_PLUS: _trapezoid_from_support(0.15, 0.45, False, False),
        GameSituationLabel.UNCERTAIN: _trapezoid_from_support(0.35, 0.65, False, False),
        GameSituationLabel.B_PLUS: _trapezoid_from_support(0.55, 0.85, False, False),
        GameSituationLabel.B_PLUS_PLUS: _trapezoid_from_support(0.75, 1.0, False, True),
    }


@dataclass(frozen=True)
class AssessorConfig:
    breakpoints: dict[GameSituationLabel, Trapezoid] = field(default_factory=default_breakpoints)
    min_sims: int = 1000
    smoothing_window: int = 3

    def __post_init__(self) -> None:
        if set(self.breakpoints) != set(LABELS_ORDERED):
            raise InvalidConfig("breakpoints must cover exactly the five labels")
        if self.smoothing_window < 1 or self.smoothing_window % 2 == 0:
            raise InvalidConfig("smoothing_window must be a positive odd integer")
        if self.min_sims < 0:
            raise InvalidConfig("min_sims must be non-negative")
        for i in range(101):  # coverage: some label fires everywhere on [0, 1]
            w = i / 100.0
            if max(t.membership(w) for t in self.breakpoints.values()) <= 0.0:
                raise InvalidConfig(f"membership functions leave winrate {w} uncovered")


@dataclass(frozen=True)
class EvalSample:
    move_no: int
    black_winrate: float
    simulations: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.black_winrate <= 1.0:
            raise ValueError("black_winrate must lie in [0, 1]")
        if self.move_no < 0 or self.simulations < 0:
            raise ValueError("move_no and simulations must be non-negative")


@dataclass(frozen=True)
class Assessment:
    label: GameSituationLabel
    memberships: dict[GameSituationLabel, float]


_TOWARD_U = {
    GameSituationLabel.B_PLUS_PLUS: GameSituationLabel.B_PLUS,
    GameSituationLabel.W_PLUS_PLUS: GameSituationLabel.W_PLUS,
}


def assess(sample: EvalSample, cfg: AssessorConfig | None = None) -> Assessment:
    """Label one sample; ties pick the label nearer U, thin evidence demotes extremes."""
    cfg = cfg or AssessorConfig()
    memberships = {
        label: cfg.breakpoints[label].membership(sample.black_winrate) for label in LABELS_ORDERED
    }
    best = max(
        LABELS_ORDERED,
        key=lambda lb: (memberships[lb], -abs(label_ordinal(lb) - 2)),
    )
    if sample.simulations < cfg.min_sims:
        best = _TOWARD_U.get(best, best)
    return Assessment(label=best, memberships=memberships)


def assess_series(samples: list[EvalSample], cfg: AssessorConfig | None = None) -> list[GameSituationLabel]:
    """Per-sample labels, median-smoothed over ordinals with replicated edges."""
    cfg = cfg or AssessorConfig()
    raw = [label_ordinal(assess(s, cfg).label) for s in samples]
    if not raw:
        return []
    half = cfg.smoothing_window // 2
    padded = [raw[0]] * half + raw + [raw[-1]] * half
    out = []
    for i in range(len(raw)):
        window = sorted(padded[i : i + cfg.smoothing_window])
        out.append(LABELS_ORDERED[window[half]])
    return out


def mirror(label: GameSituationLabel) -> GameSituationLabel:
    """Swap the Black/White perspective; U is the fixed point."""
    return LABELS_ORDERED[4 - label_ordinal(label)]


def timeline_csv(samples: list[EvalSample], cfg: AssessorConfig | None = None) -> str:
    """Export `move_no,black_winrate,simulations,label` rows with smoothed labels."""
    labels = assess_series(samples, cfg)
    lines = ["move_no,black_winrate,simulations,label"]
    for sample, label in zip(samples, labels):
        lines.append(f"{sample.move_no},{sample.black_winrate:.4f},{sample.simulations},{label.value}")
    return "\n".join(lines) + "\n"
