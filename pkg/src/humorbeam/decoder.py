"""Incremental beam decoder with bounded commitment delay.

The beam plays the role of operative memory: every step extends each kept
trajectory by each sense of the incoming symbol and keeps as many of the
best as fit in a symbol-count budget. The committed prefix lags the front
by at most ``tau_max`` steps; when a later-winning trajectory contradicts
already-committed content, the content is replaced in place and a
HumorousEffect event is emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

from .emotions import EmotionConfig, EmotionSample, sample_emotions
from .lexicon import Lexicon, OutOfVocabulary
from .ngram import BOS, NEG_INF, BigramModel

UNBOUNDED = math.inf


@dataclass(frozen=True)
class Trajectory:
    images: tuple[str, ...]
    score: float
    # column (sense) indices, used for deterministic tie-breaking
    indices: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.images)

    def sort_key(self):
        return (-self.score, self.indices)


@dataclass(frozen=True)
class DecoderConfig:
    tau_max: float = 2
    memory_budget: int = 64
    p_low: float = -6.0
    suppression_enabled: bool = False
    signature_window: int = 2
    emotions: EmotionConfig | None = field(default_factory=EmotionConfig)

    def __post_init__(self):
        if not (self.tau_max == UNBOUNDED or (self.tau_max >= 0 and self.tau_max == int(self.tau_max))):
            raise ValueError("tau_max must be a nonnegative integer or UNBOUNDED")
        if self.memory_budget < 1:
            raise ValueError("memory_budget must be positive")
        if self.signature_window < 1:
            raise ValueError("signature_window must be >= 1")


@dataclass(frozen=True)
class Commit:
    t: int
    start: int
    end: int
    images: tuple[str, ...]


@dataclass(frozen=True)
class HumorousEffect:
    t: int
    start: int
    end: int
    old: tuple[str, ...]
    new: tuple[str, ...]
    p_old: float
    p_new: float

    def __post_init__(self):
        if not self.old or len(self.old) != len(self.new) or self.old == self.new:
            raise ValueError("retraction fragments must be nonempty, equal-length and differ")


@dataclass(frozen=True)
class Incomprehension:
    t: int
    position: int
    symbol: str | None = None


@dataclass(frozen=True)
class Emotion:
    t: int
    sample: EmotionSample


Event = Union[Commit, HumorousEffect, Incomprehension, Emotion]


def _empty_beam() -> list[Trajectory]:
    return [Trajectory((), 0.0, ())]


@dataclass
class DecoderState:
    beam: list[Trajectory] = field(default_factory=_empty_beam)
    front_A: int = 0
    commit_C: int = 0
    committed: list[str] = field(default_factory=list)
    suppression_store: set = field(default_factory=set)

    @property
    def depth(self) -> int:
        """Trajectory length; differs from front_A only after unknown symbols."""
        return len(self.beam[0].images)

    @property
    def best(self) -> Trajectory:
        return self.beam[0]

    def reset_operative(self) -> None:
        """Start a new passage; the suppression store (long-term memory) survives."""
        self.beam = _empty_beam()
        self.front_A = 0
        self.commit_C = 0
        self.committed = []


@dataclass
class Trace:
    events: list[Event]
    state: DecoderState

    def of_type(self, cls) -> list:
        return [e for e in self.events if isinstance(e, cls)]


def branch_point(beam: Sequence[Trajectory]) -> int:
    """Length of the prefix shared by every trajectory in the beam."""
    if not beam:
        raise ValueError("empty beam")
    first = beam[0].images
    k = 0
    for k, column in enumerate(zip(*(t.images for t in beam))):
        if any(img != first[k] for img in column):
            return k
    return len(first)


def commit_index(front_A: int, branch_B: int, tau_max: float) -> int:
    if branch_B > front_A:
        raise ValueError("branch point cannot lie ahead of the front")
    if tau_max == UNBOUNDED:
        return branch_B
    return max(branch_B, front_A - int(tau_max))


def context_signature(tail: Sequence[str], window: int = 2) -> tuple[str, ...]:
    """Key for the suppression store: the last ``window`` images before a position."""
    if window < 1:
        raise ValueError("window must be >= 1")
    return tuple(tail[-window:])


def capacity(memory_budget: int, length: int) -> int:
    return max(1, memory_budget // max(1, length))


def _extend(state, cfg, model, senses, weights, use_suppression):
    window = cfg.signature_window
    store = state.suppression_store
    out = []
    for traj in state.beam:
        prev = traj.images[-1] if traj.images else BOS
        sig = context_signature(traj.images, window) if use_suppression else None
        for k, (img, w) in enumerate(zip(senses, weights)):
            if use_suppression and (sig, img) in store:
                continue
            out.append(
                Trajectory(traj.images + (img,), traj.score + model.logp(prev, img) + w,
                           traj.indices + (k,))
            )
    return out


def _retract(state, cfg, t, best, candidates, events):
    c = state.commit_C
    old = state.committed
    new = best.images[:c]
    if tuple(old) == new:
        return
    diff = [p for p in range(c) if old[p] != new[p]]
    lo, hi = diff[0], diff[-1] + 1
    p_old = max((x.score for x in candidates if x.images[:c] == tuple(old)), default=NEG_INF)
    events.append(
        HumorousEffect(t, lo, hi, tuple(old[lo:hi]), tuple(new[lo:hi]), p_old, best.score)
    )
    if cfg.suppression_enabled:
        for p in diff:
            state.suppression_store.add(
                (context_signature(old[:p], cfg.signature_window), old[p])
            )
    state.committed = list(new)


def step(
    state: DecoderState, cfg: DecoderConfig, model: BigramModel, lex: Lexicon, s: str
) -> tuple[DecoderState, list[Event]]:
    """Consume one symbol. Mutates and returns ``state`` with the step's events."""
    t = state.front_A
    state.front_A += 1
    try:
        senses = lex.senses(s)
    except OutOfVocabulary:
        return state, [Incomprehension(t, t, s)]
    weights = lex.weights(s)

    use_supp = cfg.suppression_enabled and bool(state.suppression_store)
    candidates = _extend(state, cfg, model, senses, weights, use_supp)
    if not candidates:
        # everything suppressed: the beam must never empty
        candidates = _extend(state, cfg, model, senses, weights, False)
    candidates.sort(key=Trajectory.sort_key)
    length = len(candidates[0].images)
    state.beam = candidates[: capacity(cfg.memory_budget, length)]
    best = state.beam[0]

    events: list[Event] = []
    _retract(state, cfg, t, best, candidates, events)

    per_symbol = best.score / length
    if not per_symbol >= cfg.p_low:
        events.append(Incomprehension(t, t, s))
    else:
        target = commit_index(length, branch_point(state.beam), cfg.tau_max)
        if target > state.commit_C:
            images = best.images[state.commit_C:target]
            events.append(Commit(t, state.commit_C, target, images))
            state.committed.extend(images)
            state.commit_C = target

    if cfg.emotions is not None and math.isfinite(per_symbol):
        runner = state.beam[1].score / length if len(state.beam) > 1 else None
        events.append(Emotion(t, sample_emotions(per_symbol, runner, cfg.emotions)))
    return state, events


def finalize(state: DecoderState, cfg: DecoderConfig) -> list[Event]:
    """End of text: commit whatever remains of the best trajectory."""
    t = state.front_A
    best = state.best
    events: list[Event] = []
    _retract(state, cfg, t, best, state.beam, events)
    if len(best.images) > state.commit_C:
        images = best.images[state.commit_C:]
        events.append(Commit(t, state.commit_C, len(best.images), images))
        state.committed.extend(images)
        state.commit_C = len(best.images)
    state.beam = [best]
    return events


def run(
    text: Sequence[str],
    cfg: DecoderConfig,
    model: BigramModel,
    lex: Lexicon,
    state: DecoderState | None = None,
) -> Trace:
    """Decode a whole text.

    Passing an existing ``state`` re-reads with the same long-term memory:
    operative fields are reset, the suppression store is kept.
    """
    if state is None:
        state = DecoderState()
    else:
        state.reset_operative()
    events: list[Event] = []
    if not text:
        return Trace(events, state)
    for s in text:
        _, evs = step(state, cfg, model, lex, s)
        events.extend(evs)
    events.extend(finalize(state, cfg))
    return Trace(events, state)
