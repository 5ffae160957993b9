"""Higher processing levels: image enlargement and the two-channel ambiguity race."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .decoder import (
    Commit,
    DecoderConfig,
    DecoderState,
    Event,
    HumorousEffect,
    finalize,
    step,
)
from .lexicon import Lexicon, LexiconError
from .ngram import BigramModel, LatticeWindow, exact_viterbi

PRIMARY = "primary"
SECONDARY = "secondary"


@dataclass(frozen=True)
class AssociationMap:
    """image -> ordered (larger image, size rank) pairs; rank 0 is the image's own size."""

    assoc: Mapping[str, tuple[tuple[str, int], ...]] = field(default_factory=dict)

    def __post_init__(self):
        for img, pairs in self.assoc.items():
            if not pairs:
                raise ValueError(f"empty association set for {img!r}")

    def column(self, image: str) -> tuple[tuple[str, int], ...]:
        """Candidates for one position: the image itself at rank 0, then its associations."""
        out = [(image, 0)]
        for parent, rank in self.assoc.get(image, ()):
            if parent != image:
                out.append((parent, int(rank)))
        return tuple(out)


def load_association_map(source: str) -> AssociationMap:
    """Lines ``image<TAB>parent:rank,parent:rank``; ``#`` lines are comments."""
    assoc: dict[str, tuple[tuple[str, int], ...]] = {}
    for lineno, line in enumerate(source.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        img, sep, rest = line.partition("\t")
        if not sep or not img:
            raise LexiconError("expected image<TAB>parent:rank,...", lineno)
        if img in assoc:
            raise LexiconError(f"duplicate image {img!r}", lineno)
        pairs = []
        for item in filter(None, (x.strip() for x in rest.split(","))):
            parent, colon, rank = item.rpartition(":")
            if not colon or not parent:
                raise LexiconError(f"bad association {item!r}", lineno)
            try:
                pairs.append((parent, int(rank)))
            except ValueError:
                raise LexiconError(f"bad rank in {item!r}", lineno) from None
        if not pairs:
            raise LexiconError(f"empty association list for {img!r}", lineno)
        assoc[img] = tuple(pairs)
    return AssociationMap(assoc)


def load_exclusions(source: str) -> frozenset[frozenset[str]]:
    """Lines ``imageA<TAB>imageB``: the two images cannot hold at the same time."""
    pairs = set()
    for lineno, line in enumerate(source.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not all(parts) or parts[0] == parts[1]:
            raise LexiconError("expected imageA<TAB>imageB", lineno)
        pairs.add(frozenset(parts))
    return frozenset(pairs)


def enlarge(primary: Sequence[str], amap: AssociationMap, lam: float = 2.0) -> LatticeWindow:
    """Secondary lattice over a primary image sequence.

    Each candidate carries a log-domain bonus rank * log(lam), so decoding
    the window favours larger images.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    cols, weights = [], []
    log_lam = math.log(lam)
    for img in primary:
        col = amap.column(img)
        cols.append(tuple(c for c, _ in col))
        weights.append(tuple(rank * log_lam for _, rank in col))
    return LatticeWindow(tuple(cols), tuple(weights))


def best_secondary(
    primary: Sequence[str], amap: AssociationMap, model: BigramModel, lam: float = 2.0
) -> tuple[list[str], float]:
    return exact_viterbi(model, enlarge(primary, amap, lam))


def merge_repetitions(t: Sequence[str]) -> list[str]:
    out: list[str] = []
    for img in t:
        if not out or out[-1] != img:
            out.append(img)
    return out


def secondary_lexicon(lex: Lexicon, amap: AssociationMap, lam: float = 2.0) -> Lexicon:
    """Compose symbol -> primary senses -> enlarged candidates, with rank bonuses."""
    log_lam = math.log(lam)
    entries, bonus = {}, {}
    for sym, senses in lex.entries.items():
        seen: dict[str, int] = {}
        for sense in senses:
            for img, rank in amap.column(sense):
                seen.setdefault(img, rank)
        entries[sym] = tuple(seen)
        bonus[sym] = tuple(r * log_lam for r in seen.values())
    return Lexicon(entries, bonus)


# --- two-channel race ------------------------------------------------------


@dataclass(frozen=True)
class ChannelConfig:
    rate: int = 1
    jitter_seed: int = 0
    tau_max: float = 2
    jitter: bool = True

    def __post_init__(self):
        if self.rate < 1:
            raise ValueError("rate must be >= 1")


@dataclass(frozen=True)
class RaceEvent:
    tick: int
    time: Fraction
    channel: str
    event: Event


@dataclass
class RaceTrace:
    events: list[RaceEvent]
    verdict: str | None = None
    verdict_tick: int | None = None


@dataclass
class _Channel:
    name: str
    lex: Lexicon
    cfg: ChannelConfig
    dcfg: DecoderConfig
    rng: np.random.Generator
    state: DecoderState = field(default_factory=DecoderState)
    pos: int = 0

    def quota(self) -> int:
        jitter = int(self.rng.integers(-1, 2)) if self.cfg.jitter else 0
        return max(0, self.cfg.rate + jitter)


def _replacement(loser, image_lost, winner_image, sym, lex, amap, exclusions):
    """Image that takes the place of the retracted one, compatible with the winner."""
    def ok(z):
        return z != image_lost and frozenset((z, winner_image)) not in exclusions

    if loser == PRIMARY:
        cands = list(lex.senses(sym))
        for z in cands:
            if z != image_lost and winner_image in dict(amap.column(z)):
                return z
    else:
        col = sorted(amap.column(winner_image), key=lambda c: -c[1])
        cands = [img for img, _ in col]
    for z in cands:
        if ok(z):
            return z
    return None


def run_two_channels(
    text: Sequence[str],
    lex: Lexicon,
    model: BigramModel,
    amap: AssociationMap,
    cfg1: ChannelConfig,
    cfg2: ChannelConfig,
    seed: int = 0,
    exclusions: frozenset = frozenset(),
    lam: float = 2.0,
    memory_budget: int = 64,
    p_low: float = -6.0,
) -> RaceTrace:
    """Race a primary decoder against a secondary (enlarged) decoder over one text.

    Each tick, a channel consumes ``rate`` symbols plus a seeded jitter in
    {-1, 0, +1}; the k-th of n symbols consumed in tick T completes at time
    T - 1 + k/n. When a channel transmits an image excluded with what the
    other channel already transmitted at the same position, the earlier
    version is replaced and a HumorousEffect is recorded on the later
    (lagging) channel; the first such conflict fixes the verdict.
    """
    channels = []
    for name, clex, cfg in (
        (PRIMARY, lex, cfg1),
        (SECONDARY, secondary_lexicon(lex, amap, lam), cfg2),
    ):
        dcfg = DecoderConfig(cfg.tau_max, memory_budget, p_low, emotions=None)
        rng = np.random.default_rng([seed, cfg.jitter_seed])
        channels.append(_Channel(name, clex, cfg, dcfg, rng))

    trace = RaceTrace([])
    transmitted: dict[int, dict[str, str]] = {}

    def note(ch: _Channel, tick: int, time: Fraction, ev: Event):
        trace.events.append(RaceEvent(tick, time, ch.name, ev))
        if isinstance(ev, Commit):
            placed = zip(range(ev.start, ev.end), ev.images)
        elif isinstance(ev, HumorousEffect):
            placed = zip(range(ev.start, ev.end), ev.new)
        else:
            return
        other = SECONDARY if ch.name == PRIMARY else PRIMARY
        for p, img in placed:
            slot = transmitted.setdefault(p, {})
            slot[ch.name] = img
            held = slot.get(other)
            if held is None or frozenset((img, held)) not in exclusions:
                continue
            sym = text_positions[p]
            z = _replacement(other, held, img, sym, lex, amap, exclusions)
            if z is None:
                continue
            slot[other] = z
            if trace.verdict is None:
                trace.verdict, trace.verdict_tick = other, tick
            p_old = channels_by_name[other].state.best.score
            trace.events.append(
                RaceEvent(tick, time, ch.name,
                          HumorousEffect(tick, p, p + 1, (held,), (z,), p_old, ch.state.best.score))
            )

    channels_by_name = {c.name: c for c in channels}
    # trajectory position -> symbol (unknown symbols occupy no position)
    text_positions = [s for s in text if s in lex]

    tick = 0
    while any(c.pos < len(text) for c in channels):
        tick += 1
        pending = []
        for order, ch in enumerate(channels):
            n = ch.quota()
            for k in range(n):
                if ch.pos >= len(text):
                    break
                _, evs = step(ch.state, ch.dcfg, model, ch.lex, text[ch.pos])
                ch.pos += 1
                time = Fraction(tick - 1) + Fraction(k + 1, n)
                pending.extend((time, order, ev) for ev in evs)
        for time, order, ev in sorted(pending, key=lambda x: (x[0], x[1])):
            note(channels[order], tick, time, ev)
    tick += 1
    for order, ch in enumerate(channels):
        for ev in finalize(ch.state, ch.dcfg):
            note(ch, tick, Fraction(tick), ev)
    return trace
