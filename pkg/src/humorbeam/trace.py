"""Trace records (line-delimited JSON), laughter wiring and the tau sweep."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .decoder import (
    UNBOUNDED,
    Commit,
    DecoderConfig,
    DecoderState,
    Emotion,
    HumorousEffect,
    Incomprehension,
    finalize,
    step,
)
from .hierarchy import RaceTrace
from .laughter import NullifyReport, forced_deletion, laughter_from_retraction
from .lexicon import Lexicon
from .ngram import BigramModel


def _num(x):
    """JSON has no infinities: non-finite scores are written as null."""
    if x is None or not math.isfinite(x):
        return None
    return x


def event_record(ev, t: int | None = None, **extra) -> dict:
    t = ev.t if t is None else t
    if isinstance(ev, Commit):
        rec = {"t": t, "type": "commit", "start": ev.start, "end": ev.end, "images": list(ev.images)}
    elif isinstance(ev, HumorousEffect):
        rec = {
            "t": t, "type": "humor", "start": ev.start, "end": ev.end,
            "old": list(ev.old), "new": list(ev.new),
            "p_old": _num(ev.p_old), "p_new": _num(ev.p_new),
        }
    elif isinstance(ev, Incomprehension):
        rec = {"t": t, "type": "incomprehension", "position": ev.position, "symbol": ev.symbol}
    elif isinstance(ev, Emotion):
        s = ev.sample
        rec = {
            "t": t, "type": "emotion",
            "pleasure": _num(s.pleasure), "confidence": _num(s.confidence),
            "p_max": _num(s.p_max), "p_comp": _num(s.p_comp),
        }
    else:
        raise TypeError(f"not a trace event: {ev!r}")
    rec.update(extra)
    return rec


def laughter_record(t: int, report: NullifyReport, nervous: bool = False, **extra) -> dict:
    rec = {
        "t": t, "type": "laughter",
        "amplitude": report.motor_share, "limbic": report.limbic_share,
        "sweeps": report.sweeps_used, "nervous": nervous,
    }
    rec.update(extra)
    return rec


@dataclass(frozen=True)
class LaughterParams:
    spins_per_image: int = 4
    coupling_scale: float = 0.05
    field_strength: float = 1.0
    routing_rho: float = 1.0
    seed: int = 0
    # consecutive incomprehension steps that force a deletion (0 disables)
    overload: int = 0

    def kwargs(self, t: int) -> dict:
        return dict(
            spins_per_image=self.spins_per_image, coupling_scale=self.coupling_scale,
            routing_rho=self.routing_rho, seed=self.seed + t, field_strength=self.field_strength,
        )


def decoder_records(events: Iterable, params: LaughterParams = LaughterParams()) -> list[dict]:
    """Records for a decoder trace; each humor record is followed by its laughter record."""
    out: list[dict] = []
    streak = 0
    for ev in events:
        out.append(event_record(ev))
        if isinstance(ev, HumorousEffect):
            out.append(laughter_record(ev.t, laughter_from_retraction(ev, **params.kwargs(ev.t))))
        if isinstance(ev, Incomprehension):
            streak += 1
            if params.overload and streak == params.overload:
                rep = forced_deletion(streak, **params.kwargs(ev.t))
                out.append(laughter_record(ev.t, rep, nervous=True))
                streak = 0
        elif not isinstance(ev, Emotion):
            streak = 0
    return out


def race_records(race: RaceTrace, params: LaughterParams = LaughterParams()) -> list[dict]:
    out: list[dict] = []
    for rev in race.events:
        out.append(event_record(rev.event, t=rev.tick, channel=rev.channel))
        if isinstance(rev.event, HumorousEffect):
            rep = laughter_from_retraction(rev.event, **params.kwargs(rev.tick))
            out.append(laughter_record(rev.tick, rep, channel=rev.channel))
    last = race.events[-1].tick if race.events else 0
    out.append({
        "t": race.verdict_tick if race.verdict_tick is not None else last,
        "type": "verdict", "first": race.verdict,
    })
    out.sort(key=lambda r: r["t"])
    return out


def dumps(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, allow_nan=False) + "\n" for r in records)


# --- tau sweep -------------------------------------------------------------


@dataclass
class SweepResult:
    grid: list[float]
    retraction_rate: list[float]
    mean_latency: list[float]
    loss: list[float]
    tau_star: float
    alpha: float = 1.0
    beta: float = 1.0

    def table(self) -> str:
        lines = ["tau\tretraction_rate\tmean_latency\tloss"]
        for row in zip(self.grid, self.retraction_rate, self.mean_latency, self.loss):
            lines.append("\t".join([format_tau(row[0]), *(repr(x) for x in row[1:])]))
        lines.append(f"tau_star\t{format_tau(self.tau_star)}")
        return "\n".join(lines) + "\n"


def format_tau(tau: float) -> str:
    return "inf" if tau == UNBOUNDED else str(int(tau))


def parse_tau(text: str) -> float:
    text = text.strip().lower()
    if text in ("inf", "unbounded", "none"):
        return UNBOUNDED
    value = int(text)
    if value < 0:
        raise ValueError("tau must be nonnegative")
    return value


def parse_grid(text: str) -> list[float]:
    grid = [parse_tau(x) for x in text.split(",") if x.strip()]
    if not grid:
        raise ValueError("empty tau grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("tau grid must be strictly increasing")
    return grid


def measure(text: Sequence[str], cfg: DecoderConfig, model: BigramModel, lex: Lexicon):
    """(retraction events, latency samples) for one text; latency is front - commit per step."""
    state = DecoderState()
    humor = 0
    latencies = []
    for s in text:
        _, evs = step(state, cfg, model, lex, s)
        humor += sum(isinstance(e, HumorousEffect) for e in evs)
        latencies.append(state.front_A - state.commit_C)
    humor += sum(isinstance(e, HumorousEffect) for e in finalize(state, cfg))
    return humor, latencies


def sweep_tau(
    texts: Sequence[Sequence[str]],
    grid: Sequence[float],
    alpha: float,
    beta: float,
    model: BigramModel,
    lex: Lexicon,
    base: DecoderConfig = DecoderConfig(),
) -> SweepResult:
    """Trade retractions against commit latency over a grid of tau_max values."""
    if not texts or not any(texts):
        raise ValueError("empty corpus")
    if not grid:
        raise ValueError("empty grid")
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be nonnegative")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("tau grid must be strictly increasing")
    rates, lats, losses = [], [], []
    for tau in grid:
        cfg = DecoderConfig(tau, base.memory_budget, base.p_low, base.suppression_enabled,
                            base.signature_window, emotions=None)
        events, samples = 0, []
        for text in texts:
            h, lat = measure(text, cfg, model, lex)
            events += h
            samples.extend(lat)
        rate = events / len(samples)
        latency = sum(samples) / len(samples)
        rates.append(rate)
        lats.append(latency)
        losses.append(alpha * rate + beta * latency)
    best = min(range(len(grid)), key=lambda k: (losses[k], k))
    return SweepResult(list(grid), rates, lats, losses, grid[best], alpha, beta)
