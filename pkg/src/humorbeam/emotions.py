"""Emotion signals from decoding statistics: E = N * (I - I0)."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class EmotionConfig:
    need_N: float = 1.0
    I0_pleasure: float = -2.0
    I0_confidence: float = 1.0

    def __post_init__(self):
        if self.need_N < 0:
            raise ValueError("need_N must be nonnegative")


@dataclass(frozen=True)
class EmotionSample:
    pleasure: float
    confidence: float | None
    p_max: float
    p_comp: float | None


def simonov(N: float, I: float, I0: float) -> float:
    """Emotion strength; positive iff the available information exceeds the need."""
    if N < 0:
        raise ValueError("need strength N must be nonnegative")
    return N * (I - I0)


def sample_emotions(
    best: float, runner_up: float | None, cfg: EmotionConfig = EmotionConfig()
) -> EmotionSample:
    """``best``/``runner_up`` are per-symbol log-probabilities.

    Confidence uses the log ratio best - runner_up; it is undefined (None)
    without a finite competitor.
    """
    if not math.isfinite(best):
        raise ValueError("best per-symbol score must be finite")
    pleasure = simonov(cfg.need_N, best, cfg.I0_pleasure)
    if runner_up is None or not math.isfinite(runner_up):
        return EmotionSample(pleasure, None, best, None)
    confidence = simonov(cfg.need_N, best - runner_up, cfg.I0_confidence)
    return EmotionSample(pleasure, confidence, best, runner_up)
